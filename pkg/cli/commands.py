"""
fb/cli/commands.py
──────────────────
One handler per verb.  Each takes the resolved `Inputs` and returns a
`Report`; rendering and exit codes are the caller's business.
"""

import logging
from functools import cached_property

from cli.descriptors import FusionRef, parse_element, resolve_fusion, resolve_group, resolve_label
from cli.render import Report, sign_row
from core.burnside import BurnsideRing
from core.errors import DescriptorError, PreconditionError
from core.fusion import detect_essentials, has_strongly_p_embedded, local_data
from core.lattice import build_lattice
from core.stable import (
    ambient_check, classify_maximals, f_class_marks, is_stable_marks, maximal_unit,
    reeh_basis, stable_lattice, stable_units,
)
from core.transfer import (
    NonRealizable, bouc_check, genuine_witness, normalizer_diagram, star_product, transfer,
)

log = logging.getLogger("fb.commands")


class Inputs:
    """Lazily resolved objects behind the command-line flags."""

    def __init__(self, args):
        self.args = args
        self.cap = args.cap

    def echo(self) -> dict[str, str]:
        out = {}
        for key in ("group", "fusion", "subgroup", "left", "element", "suite", "seed"):
            value = getattr(self.args, key, None)
            if value is not None:
                out[key] = str(value)
        return out

    def report(self, verb: str) -> Report:
        return Report(verb, self.echo())

    @cached_property
    def fusion_ref(self) -> FusionRef:
        if not self.args.fusion:
            raise DescriptorError(f"{self.args.verb} needs --fusion")
        return resolve_fusion(self.args.fusion, cap=self.cap)

    @property
    def fusion(self):
        return self.fusion_ref.fusion

    @property
    def context(self):
        ctx = self.fusion_ref.context
        if ctx is None:
            raise DescriptorError(f"{self.args.verb} needs a frobenius:<group>:<p> fusion")
        return ctx

    @cached_property
    def lattice(self):
        if self.args.group:
            return build_lattice(resolve_group(self.args.group, cap=self.cap), cap=self.cap)
        if self.args.fusion:
            return self.fusion.lattice
        raise DescriptorError(f"{self.args.verb} needs --group or --fusion")

    @cached_property
    def ring(self) -> BurnsideRing:
        if not self.args.group and self.args.fusion:
            return self.fusion.ring
        return BurnsideRing(self.lattice)

    def subgroup(self, L) -> int:
        if not self.args.subgroup:
            raise DescriptorError(f"{self.args.verb} needs --subgroup")
        return resolve_label(L, self.args.subgroup)

    def stable_element(self):
        """--element parsed over B(S), with alpha[...] meaning Reeh basis elements."""
        if not self.args.element:
            raise DescriptorError(f"{self.args.verb} needs --element")
        F = self.fusion
        reeh = reeh_basis(F)
        return parse_element(self.args.element, F.ring,
                             alpha=lambda h: reeh.basis[F.class_of[h]])


def _class_labels(L) -> tuple[str, ...]:
    return tuple(L.class_label(c) for c in range(L.class_count))


# ══════════════════════════════════════════════════════════════════════════════
# GROUPS & RINGS
# ══════════════════════════════════════════════════════════════════════════════

def cmd_marks(inp: Inputs) -> Report:
    ring = inp.ring
    rep = inp.report("marks")
    labels = ring.table.labels
    t = rep.table("marks", ("H\\K",) + labels)
    for label, row in zip(labels, ring.table.rows):
        t.rows.append((label,) + row)
    rep.flags["classes"] = ring.rank
    return rep


def cmd_lattice(inp: Inputs) -> Report:
    L = inp.lattice
    rep = inp.report("lattice")
    t = rep.table("subgroups", ("label", "order", "class", "normal", "cyclic",
                                "normalizer", "maximal"))
    maximal = set(L.maximal)
    for s in L.subgroups:
        t.rows.append((L.labels[s.id], s.order, L.class_label(L.class_of[s.id]),
                       L.is_normal(s.id), L.is_cyclic(s.id),
                       L.labels[L.normalizer[s.id]], s.id in maximal))
    rep.flags["subgroups"] = len(L)
    rep.flags["classes"] = L.class_count
    rep.flags["frattini"] = L.labels[L.frattini]
    return rep


def cmd_units(inp: Inputs) -> Report:
    ring = inp.ring
    units = ring.unit_group()
    rep = inp.report("units")
    t = rep.table("basis", ("unit", "signs", "coefficients"))
    for i, u in enumerate(units.basis):
        t.rows.append((f"u{i}", sign_row(u.signs), u.element.coeffs))
    rep.flags["classes"] = " ".join(_class_labels(ring.lattice))
    rep.flags["rank"] = units.rank
    rep.flags["group"] = "{±1}" if units.rank == 1 and units.contains_minus_one else f"C2^{units.rank}"
    rep.flags["certified_by"] = units.method
    return rep


# ══════════════════════════════════════════════════════════════════════════════
# FUSION SYSTEMS
# ══════════════════════════════════════════════════════════════════════════════

def cmd_classes(inp: Inputs) -> Report:
    F = inp.fusion
    L = F.lattice
    rep = inp.report("classes")
    t = rep.table("F-classes", ("class", "representative", "fully_normalized", "size",
                                "s_classes", "aut_order", "centric"))
    for f, members in enumerate(F.classes):
        t.rows.append((f, L.labels[members[0]], L.labels[F.fully_normalized_rep(f)],
                       len(members),
                       ",".join(L.class_label(c) for c in F.s_classes_in(f)),
                       F.aut_order(members[0]), F.is_centric(members[0])))
    e = rep.table("element classes", ("class", "elements"))
    for i, cls in enumerate(F.element_classes()):
        e.rows.append((i, ",".join(F.S.label(x) for x in cls)))
    rep.flags["f_classes"] = len(F.classes)
    rep.flags["s_classes"] = L.class_count
    rep.flags["trivial"] = F.is_trivial()
    return rep


def cmd_local(inp: Inputs) -> Report:
    F = inp.fusion
    P = inp.subgroup(F.lattice)
    ld = local_data(F, P)
    rep = inp.report("local")
    rep.flags.update({
        "subgroup": F.lattice.labels[P],
        "aut_f": ld.aut.order,
        "aut_s": len(ld.aut_s),
        "inn": len(ld.inner),
        "out_f": ld.out_group.order,
        "fully_automized": ld.fully_automized,
        "fully_normalized": F.fully_normalized(P),
        "centric": F.is_centric(P),
        "strongly_p_embedded": has_strongly_p_embedded(ld.out_group, F.p),
    })
    return rep


def cmd_essentials(inp: Inputs) -> Report:
    F = inp.fusion
    L = F.lattice
    rep = inp.report("essentials")
    t = rep.table("essential subgroups", ("label", "f_class", "out_f"))
    essentials = detect_essentials(F)
    for P in essentials:
        t.rows.append((L.labels[P], F.class_of[P], local_data(F, P).out_group.order))
    rep.flags["count"] = len(essentials)
    return rep


# ══════════════════════════════════════════════════════════════════════════════
# STABLE RING
# ══════════════════════════════════════════════════════════════════════════════

def cmd_stable_basis(inp: Inputs) -> Report:
    F = inp.fusion
    basis = stable_lattice(F)
    rep = inp.report("stable-basis")
    t = rep.table("hnf basis", ("element",) + _class_labels(F.lattice))
    for i, b in enumerate(basis.basis):
        t.rows.append((f"b{i}",) + b.coeffs)
    rep.flags["rank"] = basis.rank
    rep.flags["certified_by"] = "smith-kernel+hnf"
    return rep


def cmd_reeh_basis(inp: Inputs) -> Report:
    F = inp.fusion
    L = F.lattice
    basis = reeh_basis(F, cross_check=True)
    names = tuple(L.labels[F.fully_normalized_rep(f)] for f in range(len(F.classes)))
    rep = inp.report("reeh-basis")
    t = rep.table("marks", ("element",) + names)
    for name, row in zip(names, basis.marks):
        t.rows.append((f"alpha[{name}]",) + row)
    c = rep.table("coefficients", ("element",) + _class_labels(L))
    for name, b in zip(names, basis.basis):
        c.rows.append((f"alpha[{name}]",) + b.coeffs)
    rep.flags["rank"] = basis.rank
    rep.flags["certified_by"] = "stable-lattice"
    return rep


def _unit_table(rep: Report, F, units, title: str):
    t = rep.table(title, ("unit", "signs", "f_class_signs"))
    for i, u in enumerate(units.basis):
        t.rows.append((f"u{i}", sign_row(u.signs), sign_row(f_class_marks(F, u.signs))))


def cmd_stable_units(inp: Inputs) -> Report:
    F = inp.fusion
    units = stable_units(F)
    rep = inp.report("stable-units")
    _unit_table(rep, F, units, "basis")
    rep.flags["classes"] = " ".join(_class_labels(F.lattice))
    rep.flags["rank"] = units.rank
    rep.flags["essentials"] = len(detect_essentials(F))
    if inp.args.ambient_check:
        rep.flags.update(ambient_check(F))
    rep.flags["certified_by"] = "kernel-intersection"
    return rep


def cmd_max_units(inp: Inputs) -> Report:
    F = inp.fusion
    L = F.lattice
    if F.p != 2:
        raise PreconditionError(f"{F.name}: maximal units need p = 2")
    rep = inp.report("max-units")
    t = rep.table("maximal units", ("maximal", "signs", "stable"))
    for m in L.maximal:
        v = maximal_unit(F.ring, m)
        t.rows.append((L.labels[m], sign_row(v.signs), is_stable_marks(F, v.signs)))
    rep.flags["classes"] = " ".join(_class_labels(L))
    return rep


def cmd_classify_maximals(inp: Inputs) -> Report:
    F = inp.fusion
    L = F.lattice
    result = classify_maximals(F)
    rep = inp.report("classify-maximals")
    t = rep.table("maximals", ("maximal", "unit_stable", "strongly_closed", "abelian",
                               "normal_in_f"))
    for r in result.rows:
        t.rows.append((r.label, r.unit_stable, r.strongly_closed, r.abelian, r.normal_in_f))
    rep.flags["all_stable"] = result.all_stable
    rep.flags["frattini"] = L.labels[result.frattini]
    rep.flags["frattini_strongly_closed"] = result.frattini_strongly_closed
    rep.flags["frattini_normal"] = result.frattini_normal
    return rep


# ══════════════════════════════════════════════════════════════════════════════
# FROBENIUS TRANSFER
# ══════════════════════════════════════════════════════════════════════════════

def _element_tables(rep: Report, ring, element):
    labels = _class_labels(ring.lattice)
    t = rep.table("result", ("row",) + labels)
    t.rows.append(("coefficients",) + element.coeffs)
    t.rows.append(("marks",) + tuple(ring.mark(element)))


def cmd_star(inp: Inputs) -> Report:
    ctx = inp.context
    b = inp.stable_element()
    a = parse_element(inp.args.left, ctx.ring) if inp.args.left else ctx.ring.one()
    result = star_product(ctx, a, b)
    rep = inp.report("star")
    _element_tables(rep, ctx.ring, result)
    rep.flags["certified_by"] = "from_marks+congruences"
    return rep


def cmd_transfer(inp: Inputs) -> Report:
    ctx = inp.context
    result = transfer(ctx, inp.stable_element())
    rep = inp.report("transfer")
    _element_tables(rep, ctx.ring, result)
    rep.flags["certified_by"] = "from_marks+congruences"
    return rep


def cmd_witness(inp: Inputs) -> Report:
    ctx = inp.context
    found = genuine_witness(ctx, inp.stable_element())
    rep = inp.report("witness")
    if isinstance(found, NonRealizable):
        rep.flags["realizable"] = False
        rep.flags["nodes"] = found.nodes
    else:
        rep.flags["realizable"] = True
        _element_tables(rep, ctx.ring, found)
    rep.flags["certified_by"] = "exhaustive-search"
    return rep


def cmd_normalizer_report(inp: Inputs) -> Report:
    result = normalizer_diagram(inp.context)
    rep = inp.report("normalizer-report")
    t = rep.table("conditions", ("condition", "value", "certified_by"))
    t.rows.append(("(i) transfer to N splits", "equivalent-to-(iii)", "equivalence"))
    t.rows.append(("(ii) B(F)^x embeds split in B(N)^x", "equivalent-to-(iii)", "equivalence"))
    t.rows.append(("(iii) Res(B(N)^x) = B(F)^x", result.restriction_image_is_stable_units,
                   "unit-group-span"))
    t.rows.append(("(iv) B(F)^x = B(F')^x", result.stable_units_equal_normalizer_units,
                   "unit-group-span"))
    t.rows.append(("normalizer controls fusion", result.controls_fusion, "morphism-sets"))
    rep.flags["rank_normalizer_units"] = result.rank_normalizer_units
    rep.flags["rank_stable_units"] = result.rank_stable_units
    rep.flags["abelian_sylow"] = result.abelian_sylow
    return rep


def cmd_bouc_check(inp: Inputs) -> Report:
    result = bouc_check(inp.context)
    rep = inp.report("bouc-check")
    t = rep.table("checks", ("condition", "value", "certified_by"))
    t.rows.append(("Res maps B(G)^x onto fixed units", result.restriction_iso, "unit-group-span"))
    t.rows.append(("Ten inverts Res", result.tensor_inverse, "basis-roundtrip"))
    t.rows.append(("transfer = Ten on B(F)^x", result.transfer_is_tensor, "ghost-comparison"))
    rep.flags["rank_g"] = result.rank_g
    rep.flags["rank_fixed"] = result.rank_fixed
    return rep


COMMANDS = {
    "marks": cmd_marks,
    "lattice": cmd_lattice,
    "classes": cmd_classes,
    "local": cmd_local,
    "essentials": cmd_essentials,
    "stable-basis": cmd_stable_basis,
    "reeh-basis": cmd_reeh_basis,
    "units": cmd_units,
    "stable-units": cmd_stable_units,
    "max-units": cmd_max_units,
    "classify-maximals": cmd_classify_maximals,
    "star": cmd_star,
    "transfer": cmd_transfer,
    "witness": cmd_witness,
    "normalizer-report": cmd_normalizer_report,
    "bouc-check": cmd_bouc_check,
}
