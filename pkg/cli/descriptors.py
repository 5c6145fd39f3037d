"""
fb/cli/descriptors.py
─────────────────────
Turns command-line references into engine objects.
  • groups: catalog names, "catalog:<name>", or a JSON descriptor file
  • fusion systems: "frobenius:<group>:<p>", "trivial:<group>", or JSON
  • subgroup labels and element expressions such as "2*[C2#1] - [1]"
"""

import json
import logging
import os
import re
from dataclasses import dataclass

from core.catalog import load_group
from core.config import ORDER_CAP
from core.burnside import BurnsideElement, BurnsideRing
from core.errors import DescriptorError, PreconditionError
from core.fusion import FusionSystem, generated_fusion, trivial_fusion
from core.group import FiniteGroup, mask_of, prime_factors
from core.lattice import SubgroupLattice, build_lattice
from core.transfer import FrobeniusContext

log = logging.getLogger("fb.descriptors")

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?(alpha)?\[([^\]]+)\]\s*")


@dataclass
class FusionRef:
    """A resolved fusion reference; `context` is set for Frobenius systems."""
    ref: str
    fusion: FusionSystem
    context: FrobeniusContext | None = None


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise DescriptorError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"{path} is not valid JSON: {exc}") from exc


def _is_file_ref(ref: str) -> bool:
    return ref.endswith(".json") or os.path.isfile(ref)


def resolve_group(ref: str, *, cap: int = ORDER_CAP) -> FiniteGroup:
    if _is_file_ref(ref):
        return load_group(_read_json(ref), cap=cap)
    return load_group(ref, cap=cap)


def _single_prime(G: FiniteGroup) -> int:
    primes = prime_factors(G.order)
    if len(primes) != 1:
        raise DescriptorError(f"{G.name} is not a p-group")
    return primes[0]


def _pick(data: dict, key: str, alias: str):
    return data[key] if key in data else data[alias]


def _map_source(L: SubgroupLattice, source) -> int:
    """A map source given by a subgroup label or by its member ids."""
    try:
        if isinstance(source, str):
            return resolve_label(L, source)
        return L.id_of(mask_of(int(x) for x in source))
    except PreconditionError as exc:
        raise DescriptorError(f"map source {source!r} is not a subgroup") from exc


def _fusion_from_json(data: dict, cap: int) -> FusionRef:
    """Fusion descriptor objects.

      {"mode": "frobenius", "G": <group>, "sylow": p}
      {"mode": "generated", "S": <p-group>, "automorphisms": [[...]],
       "maps": [{"source": "V4#1", "images": [...]}]}

    "ambient"/"prime" and "group" are accepted for "G"/"sylow" and "S".
    """
    mode = data.get("mode") or ("frobenius" if "G" in data or "ambient" in data else "generated")
    try:
        if mode == "frobenius":
            G = load_group(_pick(data, "G", "ambient"), cap=cap)
            ctx = FrobeniusContext(G, int(_pick(data, "sylow", "prime")))
            return FusionRef("json", ctx.fusion, ctx)
        if mode != "generated":
            raise DescriptorError(f"unknown fusion mode {mode!r}")
        S = load_group(_pick(data, "S", "group"), cap=cap)
        p = int(data["prime"]) if "prime" in data else _single_prime(S)
        L = build_lattice(S, cap=cap)
        maps = [(_map_source(L, m["source"]), m["images"]) for m in data.get("maps", [])]
        F = generated_fusion(L, data.get("automorphisms", []), p, maps=maps,
                             name=data.get("name"))
    except KeyError as exc:
        raise DescriptorError(f"fusion descriptor is missing {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise DescriptorError(f"fusion descriptor is malformed: {exc}") from exc
    return FusionRef("json", F)


def resolve_fusion(ref: str, *, cap: int = ORDER_CAP) -> FusionRef:
    if _is_file_ref(ref):
        data = _read_json(ref)
        if not isinstance(data, dict):
            raise DescriptorError("fusion descriptor must be a JSON object")
        return _fusion_from_json(data, cap)
    kind, _, rest = ref.partition(":")
    if kind == "frobenius":
        name, _, p = rest.rpartition(":")
        if not name or not p.isdigit():
            raise DescriptorError(f"expected frobenius:<group>:<p>, got {ref!r}")
        ctx = FrobeniusContext(resolve_group(name, cap=cap), int(p))
        return FusionRef(ref, ctx.fusion, ctx)
    if kind == "trivial":
        S = resolve_group(rest, cap=cap)
        return FusionRef(ref, trivial_fusion(build_lattice(S, cap=cap), _single_prime(S)))
    raise DescriptorError(f"unknown fusion reference {ref!r}")


# ══════════════════════════════════════════════════════════════════════════════
# LABELS & EXPRESSIONS
# ══════════════════════════════════════════════════════════════════════════════

def resolve_label(L: SubgroupLattice, text: str) -> int:
    """Subgroup id for a label; "#1" may be omitted."""
    text = text.strip()
    label = text if "#" in text else f"{text}#1"
    try:
        return L.by_label(label)
    except KeyError:
        raise DescriptorError(f"{L.group.name} has no subgroup labelled {text!r}") from None


def parse_element(expr: str, ring: BurnsideRing, *, alpha=None) -> BurnsideElement:
    """Parse Σ ±k*[label] (and ±k*alpha[label] when `alpha` maps ids to elements)."""
    L = ring.lattice
    total = ring.zero()
    pos = 0
    expr = expr.strip()
    if not expr:
        raise DescriptorError("empty element expression")
    while pos < len(expr):
        m = _TERM.match(expr, pos)
        if not m or m.end() == pos:
            raise DescriptorError(f"cannot parse element expression at {expr[pos:]!r}")
        if pos and not m[1]:
            raise DescriptorError(f"missing + or - before {m[0].strip()!r}")
        sign = -1 if m[1] == "-" else 1
        k = int(m[2]) if m[2] else 1
        h = resolve_label(L, m[4])
        if m[3]:
            if alpha is None:
                raise DescriptorError("alpha[...] terms need a fusion system")
            term = alpha(h)
        else:
            term = ring.transitive(L.class_of[h])
        total = total + term.scale(sign * k)
        pos = m.end()
    log.debug("parsed %r → %s", expr, total.coeffs)
    return total
