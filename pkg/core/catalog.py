"""
fb/core/catalog.py
──────────────────
Named groups and group descriptors.
  • cyclic, abelian products, dihedral, generalized quaternion
  • symmetric / alternating groups, SL(2,3)
  • semidirect products C2^k ⋊ A for A ≤ GL(k,2) given by bit matrices
  • load_group(descriptor) for catalog / permutation / cayley / semidirect
"""

import logging
import re
from itertools import product

from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

from core.config import ORDER_CAP
from core.errors import GroupError, DescriptorError, CapExceeded
from core.group import (
    FiniteGroup, from_permutation_group, from_permutations, from_table, parse_cycles,
    permutation_from_cycles,
)

log = logging.getLogger("fb.catalog")


# ══════════════════════════════════════════════════════════════════════════════
# TABLE-BUILT FAMILIES
# ══════════════════════════════════════════════════════════════════════════════

def abelian(orders: list[int], name: str | None = None) -> FiniteGroup:
    """C_{n1} × C_{n2} × …  (the first factor varies fastest)."""
    orders = [int(n) for n in orders]
    if any(n < 1 for n in orders):
        raise GroupError(f"bad cyclic factor orders {orders}")
    tuples = [tuple(reversed(c)) for c in product(*(range(n) for n in reversed(orders)))]
    index = {c: i for i, c in enumerate(tuples)}
    table = tuple(
        tuple(index[tuple((a + b) % n for a, b, n in zip(x, y, orders))] for y in tuples)
        for x in tuples
    )
    labels = tuple(",".join(map(str, c)) for c in tuples)
    name = name or "x".join(f"C{n}" for n in orders)
    return FiniteGroup(name, table, labels)


def cyclic(n: int) -> FiniteGroup:
    return abelian([n], f"C{n}")


def dihedral(order: int) -> FiniteGroup:
    """D_{2n} = <r, s | rⁿ, s², srs⁻¹ = r⁻¹>, element r^i s^e has id i + n·e."""
    if order % 2 or order < 2:
        raise GroupError(f"dihedral group order must be even, got {order}")
    n = order // 2
    elems = [(i, e) for e in range(2) for i in range(n)]

    def mul(x, y):
        (i, a), (j, b) = x, y
        return ((i + (j if a == 0 else -j)) % n, (a + b) % 2)

    index = {x: k for k, x in enumerate(elems)}
    table = tuple(tuple(index[mul(x, y)] for y in elems) for x in elems)
    labels = tuple(f"r^{i}" + ("s" if e else "") for i, e in elems)
    return FiniteGroup(f"D{order}", table, labels)


def quaternion(order: int) -> FiniteGroup:
    """Generalized quaternion Q_{4n}: r^{2n} = 1, s² = rⁿ, srs⁻¹ = r⁻¹."""
    if order % 4 or order < 8:
        raise GroupError(f"quaternion group order must be a multiple of 4 ≥ 8, got {order}")
    n = order // 4
    m = 2 * n
    elems = [(i, e) for e in range(2) for i in range(m)]

    def mul(x, y):
        (i, a), (j, b) = x, y
        k = i + (j if a == 0 else -j) + (n if a and b else 0)
        return (k % m, (a + b) % 2)

    index = {x: k for k, x in enumerate(elems)}
    table = tuple(tuple(index[mul(x, y)] for y in elems) for x in elems)
    labels = tuple(f"r^{i}" + ("s" if e else "") for i, e in elems)
    return FiniteGroup(f"Q{order}", table, labels)


def metacyclic(p: int, q: int, r: int, name: str) -> FiniteGroup:
    """C_p ⋊ C_q with the generator of C_q acting as x ↦ r·x."""
    if pow(r, q, p) != 1:
        raise GroupError(f"{name}: {r} does not have order dividing {q} mod {p}")
    elems = [(a, b) for b in range(q) for a in range(p)]
    index = {x: k for k, x in enumerate(elems)}
    table = tuple(
        tuple(index[((a + pow(r, b, p) * c) % p, (b + d) % q)] for c, d in elems)
        for a, b in elems
    )
    return FiniteGroup(name, table)


# ══════════════════════════════════════════════════════════════════════════════
# SEMIDIRECT PRODUCTS C2^k ⋊ A
# ══════════════════════════════════════════════════════════════════════════════

def _rows(matrix, k: int) -> tuple[int, ...]:
    if len(matrix) != k or any(len(row) != k for row in matrix):
        raise DescriptorError(f"action matrix must be {k}×{k}")
    out = []
    for row in matrix:
        if any(v not in (0, 1) for v in row):
            raise DescriptorError("action matrices are over GF(2): entries 0/1")
        out.append(sum(1 << j for j, v in enumerate(row) if v))
    return tuple(out)


def _f2_rank(rows) -> int:
    rows, rank = list(rows), 0
    for col in range(max((r.bit_length() for r in rows), default=0)):
        pivot = next((i for i in range(rank, len(rows)) if (rows[i] >> col) & 1), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and (rows[i] >> col) & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def _apply(rows, v: int) -> int:
    return sum(((r & v).bit_count() & 1) << i for i, r in enumerate(rows))


def _matmul(a, b) -> tuple[int, ...]:
    out = []
    for row in a:
        acc = 0
        for j in range(len(b)):
            if (row >> j) & 1:
                acc ^= b[j]
        out.append(acc)
    return tuple(out)


def semidirect(name: str, k: int, matrices, *, cap: int = ORDER_CAP) -> FiniteGroup:
    """C2^k ⋊ A, A generated by invertible k×k bit matrices acting on columns.

    Element (v, a) has id a_index · 2^k + v and (v,a)(w,b) = (v + a·w, ab).
    """
    gens = [_rows(m, k) for m in matrices]
    for g in gens:
        if _f2_rank(g) != k:
            raise GroupError(f"{name}: action matrix is not invertible")
    identity = tuple(1 << i for i in range(k))
    mats, index = [identity], {identity: 0}
    for a in mats:
        for g in gens:
            c = _matmul(a, g)
            if c not in index:
                index[c] = len(mats)
                mats.append(c)
    size = len(mats) << k
    if size > cap:
        raise CapExceeded(f"group {name}", size, cap)
    width = 1 << k
    prodidx = [[index[_matmul(a, b)] for b in mats] for a in mats]
    act = [[_apply(a, w) for w in range(width)] for a in mats]
    table = tuple(
        tuple(prodidx[ai][bi] * width + (v ^ act[ai][w])
              for bi in range(len(mats)) for w in range(width))
        for ai in range(len(mats)) for v in range(width)
    )
    labels = tuple(f"{v:0{k}b}|a{ai}" for ai in range(len(mats)) for v in range(width))
    log.debug("semidirect %s: |A| = %d, order %d", name, len(mats), size)
    return FiniteGroup(name, table, labels)


# multiplication by a root of x³ + x + 1 on F8 (basis 1, α, α²) and Frobenius
_MUL_ALPHA = [[0, 0, 1], [1, 0, 1], [0, 1, 0]]
_FROBENIUS = [[1, 0, 0], [0, 0, 1], [0, 1, 1]]
_MUL_OMEGA = [[0, 1], [1, 1]]


def _pad(matrix) -> list[list[int]]:
    """Extend a 3×3 action to F8 ⊕ F2 with trivial action on the new summand."""
    return [row + [0] for row in matrix] + [[0, 0, 0, 1]]


def sl23() -> FiniteGroup:
    """SL(2,3) acting on the eight nonzero vectors of F3²."""
    vectors = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    pos = {v: i for i, v in enumerate(vectors)}

    def perm(m):
        return tuple(pos[((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3)]
                     for a, b in vectors)

    return from_permutations("SL(2,3)", [perm([[1, 1], [0, 1]]), perm([[1, 0], [1, 1]])])


_PERMUTATION_CATALOG = {
    "S3": (SymmetricGroup, 3),
    "S4": (SymmetricGroup, 4),
    "S5": (SymmetricGroup, 5),
    "A4": (AlternatingGroup, 4),
    "A5": (AlternatingGroup, 5),
}

_SEMIDIRECT_CATALOG = {
    "C2^2:C3":  (2, [_MUL_OMEGA]),
    "C2^3:C7":  (3, [_MUL_ALPHA]),
    "C2^3:F21": (3, [_MUL_ALPHA, _FROBENIUS]),
    "C2^4:C7":  (4, [_pad(_MUL_ALPHA)]),
    "C2^4:F21": (4, [_pad(_MUL_ALPHA), _pad(_FROBENIUS)]),
}

CATALOG_NAMES = (
    ["C2", "C3", "C4", "C5", "C6", "C7", "C8", "C16", "V4", "C2^3", "C2^4",
     "C4xC2", "C4xC4", "C8xC2", "C4xC2xC2", "S3", "D8", "D10", "D12", "D16",
     "Q8", "Q16", "C7:C3", "SL(2,3)"]
    + list(_PERMUTATION_CATALOG) + list(_SEMIDIRECT_CATALOG)
)

# fusion systems exercised by the verify suite: (group, prime)
FUSION_CATALOG = (
    ("C2", 2), ("C4", 2), ("V4", 2), ("C4xC2", 2), ("C2^3", 2), ("D8", 2),
    ("Q8", 2), ("S3", 2), ("C6", 2), ("A4", 2), ("S4", 2), ("A5", 2),
    ("S5", 2), ("SL(2,3)", 2), ("C2^3:C7", 2), ("C2^3:F21", 2),
    ("C2^4:C7", 2), ("C2^4:F21", 2), ("D6", 3), ("D10", 5),
)

_CACHE: dict[str, FiniteGroup] = {}


def catalog(name: str, *, cap: int = ORDER_CAP) -> FiniteGroup:
    """Build a named group; results are cached per name."""
    key = name.strip()
    if key in _CACHE:
        group = _CACHE[key]
        if group.order > cap:
            raise CapExceeded(f"group {key}", group.order, cap)
        return group
    group = _build(key, cap)
    _CACHE[key] = group
    return group


def _build(name: str, cap: int) -> FiniteGroup:
    if name in _PERMUTATION_CATALOG:
        family, degree = _PERMUTATION_CATALOG[name]
        return from_permutation_group(name, family(degree), cap=cap)
    if name in _SEMIDIRECT_CATALOG:
        k, mats = _SEMIDIRECT_CATALOG[name]
        return semidirect(name, k, mats, cap=cap)
    if name in ("C7:C3", "F21"):
        return metacyclic(7, 3, 2, name)
    if name == "SL(2,3)":
        return sl23()
    if name == "V4":
        return abelian([2, 2], "V4")
    if m := re.fullmatch(r"C(\d+)\^(\d+)", name):
        n, k = int(m[1]), int(m[2])
        _check(name, n ** k, cap)
        return abelian([n] * k, name)
    if m := re.fullmatch(r"C\d+(?:xC\d+)*", name):
        orders = [int(v) for v in re.findall(r"\d+", name)]
        size = 1
        for n in orders:
            size *= n
        _check(name, size, cap)
        return abelian(orders, name)
    if m := re.fullmatch(r"D(\d+)", name):
        n = int(m[1])
        _check(name, n, cap)
        if n == 2:
            return abelian([2], name)
        if n == 4:
            return abelian([2, 2], name)
        return dihedral(n)
    if m := re.fullmatch(r"Q(\d+)", name):
        _check(name, int(m[1]), cap)
        return quaternion(int(m[1]))
    raise DescriptorError(f"unknown catalog group {name!r}")


def _check(name: str, size: int, cap: int):
    if size > cap:
        raise CapExceeded(f"group {name}", size, cap)


# ══════════════════════════════════════════════════════════════════════════════
# DESCRIPTORS
# ══════════════════════════════════════════════════════════════════════════════

def _generator(g, degree: int | None) -> tuple[int, ...]:
    """A generator as "(1 2 3)(4 5)" or as an array of 1-based cycles [[1, 2, 3], [4, 5]]."""
    try:
        if isinstance(g, str):
            return parse_cycles(g, degree)
        if isinstance(g, list) and all(isinstance(c, list) for c in g):
            return permutation_from_cycles(g, degree)
    except GroupError as exc:
        raise DescriptorError(str(exc)) from exc
    raise DescriptorError(f"permutation generator {g!r} is not an array of cycles")


def load_group(descriptor, *, cap: int = ORDER_CAP) -> FiniteGroup:
    """Build a FiniteGroup from a descriptor.

    Accepted forms: "A4", "catalog:A4", or a dict with "kind" one of
    catalog / permutation / cayley / semidirect.
    """
    if isinstance(descriptor, str):
        name = descriptor.removeprefix("catalog:")
        return catalog(name, cap=cap)
    if not isinstance(descriptor, dict):
        raise DescriptorError("group descriptor must be a string or an object")
    kind = descriptor.get("kind")
    name = str(descriptor.get("name", kind or "G"))
    try:
        if kind == "catalog":
            return catalog(descriptor["name"], cap=cap)
        if kind == "permutation":
            degree = descriptor.get("degree")
            degree = None if degree is None else int(degree)
            gens = [_generator(g, degree) for g in descriptor["generators"]]
            return from_permutations(name, gens, degree, cap=cap)
        if kind == "cayley":
            return from_table(name, descriptor["table"], descriptor.get("labels"), cap=cap)
        if kind == "semidirect":
            return semidirect(name, int(descriptor["rank"]), descriptor["action"], cap=cap)
    except KeyError as exc:
        raise DescriptorError(f"group descriptor {name!r} is missing {exc}") from exc
    except (TypeError, ValueError, IndexError) as exc:
        raise DescriptorError(f"group descriptor {name!r} is malformed: {exc}") from exc
    raise DescriptorError(f"unknown group descriptor kind {kind!r}")
