"""
fb/core/group.py
────────────────
Finite groups as Cayley tables on element ids 0..n-1 (identity = 0).
  • FiniteGroup with validation (Latin square + Light's associativity test)
  • permutation groups and cycle notation (sympy.combinatorics)
  • subgroup-as-group, quotient groups
  • automorphism groups (generic backtracking, GL(k,p) fast path)

Subgroups travel through the engine as int bitmasks over element ids.
"""

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import prod

from sympy.combinatorics import Permutation, PermutationGroup

from core.config import (
    ORDER_CAP, AUT_SEARCH_CAP, AUT_ELEMENTARY_RANK_CAP, AUT_ORDER_CAP,
)
from core.errors import GroupError, CapExceeded, PreconditionError

log = logging.getLogger("fb.group")

_CYCLES = re.compile(r"(?:\s*\([^()]*\)\s*)+")


# ══════════════════════════════════════════════════════════════════════════════
# BITMASK HELPERS
# ══════════════════════════════════════════════════════════════════════════════

def bits(mask: int):
    """Yield the set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elements) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def subgroup_key(mask: int) -> tuple:
    """Canonical subgroup order: by order, then sorted member ids."""
    return (mask.bit_count(), tuple(bits(mask)))


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


# ══════════════════════════════════════════════════════════════════════════════
# FINITE GROUP
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    table[a][b] is the id of a·b.  Element 0 is the identity.  Instances
    are immutable; derived data is computed once and cached.
    """
    name: str
    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = field(default=None, repr=False)

    # ── basics ────────────────────────────────────────────────────────────
    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(row.index(0) for row in self.table)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        for _ in range(k):
            out = self.table[out][a]
        return out

    def conj(self, g: int, h: int) -> int:
        """g·h·g⁻¹"""
        return self.table[self.table[g][h]][self.inverses[g]]

    def conj_mask(self, g: int, mask: int) -> int:
        """The subgroup g·H·g⁻¹ for H given as a mask."""
        t, gi = self.table, self.inverses[g]
        out = 0
        tg = t[g]
        for h in bits(mask):
            out |= 1 << t[tg[h]][gi]
        return out

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = self.table[x][a]
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        n = self.order
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    # ── generation ────────────────────────────────────────────────────────
    def closure_mask(self, gens) -> int:
        """Mask of the subgroup generated by gens."""
        gens = list(dict.fromkeys(g for g in gens if g != 0))
        t = self.table
        mask, frontier = 1, [0]
        while frontier:
            nxt = []
            for x in frontier:
                row = t[x]
                for g in gens:
                    y = row[g]
                    if not (mask >> y) & 1:
                        mask |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return mask

    def generators_of(self, mask: int) -> tuple[int, ...]:
        """Greedy generating set of a subgroup, larger element orders first."""
        orders = self.element_orders
        members = sorted(bits(mask), key=lambda x: (-orders[x], x))
        gens, span = [], 1
        for x in members:
            if span == mask:
                break
            if not (span >> x) & 1:
                gens.append(x)
                span = self.closure_mask(gens)
        return tuple(gens)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return self.generators_of(self.full_mask)

    def normalizer_mask(self, mask: int) -> int:
        out = 0
        for g in range(self.order):
            if self.conj_mask(g, mask) == mask:
                out |= 1 << g
        return out

    def is_normal(self, mask: int) -> bool:
        return all(self.conj_mask(g, mask) == mask for g in self.generators)

    def is_p_group(self, mask: int | None = None) -> bool:
        n = (self.full_mask if mask is None else mask).bit_count()
        return len(prime_factors(n)) <= 1


# ══════════════════════════════════════════════════════════════════════════════
# CONSTRUCTION
# ══════════════════════════════════════════════════════════════════════════════

def _light_associative(table, gens) -> bool:
    """Light's test: (x·a)·y == x·(a·y) for a in a generating set suffices."""
    n = len(table)
    for a in gens:
        col_a = [table[x][a] for x in range(n)]
        row_a = table[a]
        for x in range(n):
            xa_row = table[col_a[x]]
            x_row = table[x]
            for y in range(n):
                if xa_row[y] != x_row[row_a[y]]:
                    return False
    return True


def from_table(name: str, rows, labels=None, *, cap: int = ORDER_CAP,
               check: bool = True) -> FiniteGroup:
    """Validate a Cayley table and wrap it as a FiniteGroup."""
    try:
        table = tuple(tuple(int(v) for v in row) for row in rows)
    except (TypeError, ValueError) as exc:
        raise GroupError(f"{name}: table entries must be integers ({exc})") from exc
    n = len(table)
    if n == 0:
        raise GroupError(f"{name}: empty table")
    if n > cap:
        raise CapExceeded(f"group {name}", n, cap)
    if check:
        full = tuple(range(n))
        if any(len(row) != n for row in table):
            raise GroupError(f"{name}: table is not square")
        if table[0] != full or tuple(row[0] for row in table) != full:
            raise GroupError(f"{name}: element 0 is not the identity")
        for a, row in enumerate(table):
            if sorted(row) != list(full):
                raise GroupError(f"{name}: row {a} is not a permutation")
        for b in range(n):
            if sorted(row[b] for row in table) != list(full):
                raise GroupError(f"{name}: column {b} is not a permutation")
    group = FiniteGroup(name, table, tuple(labels) if labels else None)
    if check and not _light_associative(table, group.generators):
        raise GroupError(f"{name}: table is not associative")
    log.debug("group %s: order %d", name, n)
    return group


def permutation_from_cycles(cycles, degree: int | None = None) -> tuple[int, ...]:
    """Disjoint 1-based cycles such as [[1, 2, 3], [4, 5]] → 0-based image tuple."""
    try:
        cycles = [[int(v) - 1 for v in cyc] for cyc in cycles]
    except (TypeError, ValueError) as exc:
        raise GroupError(f"bad cycle list {cycles!r}") from exc
    seen: set[int] = set()
    for cyc in cycles:
        if any(v < 0 for v in cyc) or len(set(cyc)) != len(cyc) or seen & set(cyc):
            raise GroupError(f"bad cycle list: {[[v + 1 for v in c] for c in cycles]}")
        seen |= set(cyc)
    size = max([degree or 0] + [v + 1 for v in seen])
    # sympy multiplies overlapping cycles; disjointness is checked above
    return tuple(Permutation([c for c in cycles if c], size=size).array_form)


def parse_cycles(text: str, degree: int | None = None) -> tuple[int, ...]:
    """'(1 2 3)(4 5)' → 0-based image tuple."""
    text = text.strip()
    if not _CYCLES.fullmatch(text):
        raise GroupError(f"bad cycle notation: {text!r}")
    cycles = [body.replace(",", " ").split() for body in re.findall(r"\(([^()]*)\)", text)]
    try:
        return permutation_from_cycles(cycles, degree)
    except GroupError as exc:
        raise GroupError(f"bad cycle notation: {text!r}") from exc


def cycle_string(perm) -> str:
    cycles = Permutation(list(perm)).cyclic_form
    return "".join("(" + " ".join(str(v + 1) for v in cyc) + ")" for cyc in cycles) or "()"


def from_permutation_group(name: str, group: PermutationGroup, *,
                           cap: int = ORDER_CAP) -> FiniteGroup:
    """Tabulate a sympy PermutationGroup; element order is sympy's Dimino enumeration.

    Products compose right to left: (x·y)(p) = x(y(p)).
    """
    order = int(group.order())
    if order > cap:
        raise CapExceeded(f"group {name}", order, cap)
    elements = [tuple(a) for a in group.generate(method="dimino", af=True)]
    identity = tuple(range(group.degree))
    elements.remove(identity)
    elements.insert(0, identity)
    index = {x: i for i, x in enumerate(elements)}
    table = tuple(
        tuple(index[tuple(x[p] for p in y)] for y in elements)
        for x in elements
    )
    labels = tuple(cycle_string(x) for x in elements)
    log.debug("permutation group %s: order %d", name, order)
    return FiniteGroup(name, table, labels)


def from_permutations(name: str, gens, degree: int | None = None, *,
                      cap: int = ORDER_CAP) -> FiniteGroup:
    """Close a list of permutations (0-based image tuples) into a group."""
    degree = max([degree or 1] + [len(g) for g in gens])
    perms = []
    for g in gens:
        g = tuple(g) + tuple(range(len(g), degree))
        if sorted(g) != list(range(degree)):
            raise GroupError(f"{name}: generator {g} is not a permutation")
        perms.append(Permutation(list(g)))
    group = PermutationGroup(perms or [Permutation(list(range(degree)))])
    return from_permutation_group(name, group, cap=cap)


def subgroup_group(G: FiniteGroup, mask: int, name: str | None = None):
    """The subgroup `mask` as a FiniteGroup plus its embedding into G.

    Local ids follow the parent's id order, so the embedding is increasing.
    """
    members = tuple(bits(mask))
    pos = {x: i for i, x in enumerate(members)}
    t = G.table
    try:
        table = tuple(tuple(pos[t[a][b]] for b in members) for a in members)
    except KeyError as exc:
        raise GroupError(f"{G.name}: mask is not closed under multiplication") from exc
    labels = tuple(G.label(x) for x in members) if G.labels else None
    sub = FiniteGroup(name or f"{G.name}[{len(members)}]", table, labels)
    return sub, members


@dataclass(frozen=True)
class Quotient:
    """G/N with cosets numbered by their least element."""
    group: FiniteGroup
    kernel: int
    coset_of: tuple[int, ...]
    reps: tuple[int, ...]

    def image_mask(self, mask: int) -> int:
        return mask_of(self.coset_of[x] for x in bits(mask))

    def preimage_mask(self, qmask: int) -> int:
        return mask_of(x for x, c in enumerate(self.coset_of) if (qmask >> c) & 1)


def quotient(G: FiniteGroup, kernel: int, name: str | None = None) -> Quotient:
    if not G.is_normal(kernel):
        raise PreconditionError(f"{G.name}: subgroup is not normal")
    coset_of = [-1] * G.order
    reps = []
    for x in range(G.order):
        if coset_of[x] >= 0:
            continue
        c = len(reps)
        reps.append(x)
        for k in bits(kernel):
            coset_of[G.mul(x, k)] = c
    table = tuple(tuple(coset_of[G.mul(a, b)] for b in reps) for a in reps)
    labels = tuple(G.label(r) + "N" for r in reps) if G.labels else None
    Q = FiniteGroup(name or f"{G.name}/N{kernel.bit_count()}", table, labels)
    return Quotient(Q, kernel, tuple(coset_of), tuple(reps))


# ══════════════════════════════════════════════════════════════════════════════
# MAPS & AUTOMORPHISMS
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class GroupMap:
    """A homomorphism between two subgroups of one ambient group.

    images[i] is the image of the i-th smallest element of the source.
    """
    source: int
    target: int
    images: tuple[int, ...]


@dataclass(eq=False)
class AutomorphismGroup:
    """Aut(P) as an explicit list of element permutations of P.

    maps are sorted, so index 0 is the identity; composition is
    (i ∘ j)(x) = maps[i][maps[j][x]].
    """
    group: FiniteGroup
    maps: tuple[tuple[int, ...], ...]
    inner: frozenset[int]

    def __post_init__(self):
        self._index = {m: i for i, m in enumerate(self.maps)}

    @property
    def order(self) -> int:
        return len(self.maps)

    def index(self, m) -> int:
        return self._index[tuple(m)]

    def compose(self, i: int, j: int) -> int:
        a, b = self.maps[i], self.maps[j]
        return self._index[tuple(a[x] for x in b)]

    def inverse(self, i: int) -> int:
        m = self.maps[i]
        inv = [0] * len(m)
        for x, y in enumerate(m):
            inv[y] = x
        return self._index[tuple(inv)]

    def is_inner(self, i: int) -> bool:
        return i in self.inner

    def as_group(self, cap: int = ORDER_CAP) -> FiniteGroup:
        if self.order > cap:
            raise CapExceeded(f"Aut({self.group.name})", self.order, cap)
        n = self.order
        table = tuple(tuple(self.compose(i, j) for j in range(n)) for i in range(n))
        return FiniteGroup(f"Aut({self.group.name})", table)

    def outer(self, cap: int = ORDER_CAP) -> Quotient:
        A = self.as_group(cap)
        return quotient(A, mask_of(self.inner), f"Out({self.group.name})")


def inner_maps(P: FiniteGroup) -> set[tuple[int, ...]]:
    return {tuple(P.conj(g, x) for x in range(P.order)) for g in range(P.order)}


def _elementary_rank(P: FiniteGroup) -> tuple[int, int] | None:
    """(p, k) if P ≅ C_p^k with k ≥ 1, else None."""
    if P.order == 1 or not P.is_abelian:
        return None
    primes = prime_factors(P.order)
    if len(primes) != 1:
        return None
    p = primes[0]
    if any(o not in (1, p) for o in P.element_orders):
        return None
    k, n = 0, P.order
    while n > 1:
        n //= p
        k += 1
    return p, k


def _gl_order(p: int, k: int) -> int:
    return prod(p ** k - p ** i for i in range(k))


def _linear_automorphisms(P: FiniteGroup, p: int, k: int, order_cap: int):
    total = _gl_order(p, k)
    if total > order_cap:
        raise CapExceeded(f"Aut({P.name}) = GL({k},{p})", total, order_cap)
    basis = P.generators
    if len(basis) != k:
        raise GroupError(f"{P.name}: generating set is not a basis")
    # coordinates of every element over the basis
    coords = {}
    for c in product(range(p), repeat=k):
        x = 0
        for b, e in zip(basis, c):
            x = P.mul(x, P.power(b, e))
        coords[x] = c
    maps = []

    def extend(chosen: list[int], span: int):
        if len(chosen) == k:
            m = [0] * P.order
            for x, c in coords.items():
                y = 0
                for img, e in zip(chosen, c):
                    y = P.mul(y, P.power(img, e))
                m[x] = y
            maps.append(tuple(m))
            return
        for y in range(1, P.order):
            if not (span >> y) & 1:
                extend(chosen + [y], P.closure_mask(chosen + [y]))

    extend([], 1)
    return maps


def _generic_automorphisms(P: FiniteGroup, order_cap: int):
    gens = P.generators
    n, t, orders = P.order, P.table, P.element_orders
    # BFS word tree: every element as parent · generator
    parent = {0: None}
    order_list = [0]
    for x in order_list:
        for gi, g in enumerate(gens):
            y = t[x][g]
            if y not in parent:
                parent[y] = (x, gi)
                order_list.append(y)
    prefix_orders = [P.closure_mask(gens[:i + 1]).bit_count() for i in range(len(gens))]
    candidates = [[y for y in range(n) if orders[y] == orders[g]] for g in gens]
    maps = []

    def realize(images):
        f = [0] * n
        for x in order_list[1:]:
            px, gi = parent[x]
            f[x] = t[f[px]][images[gi]]
        if len(set(f)) != n:
            return None
        for x in range(n):
            fx = t[f[x]]
            for gi, g in enumerate(gens):
                if f[t[x][g]] != fx[images[gi]]:
                    return None
        return tuple(f)

    def extend(images: list[int]):
        i = len(images)
        if i == len(gens):
            f = realize(images)
            if f is not None:
                maps.append(f)
                if len(maps) > order_cap:
                    raise CapExceeded(f"Aut({P.name})", len(maps), order_cap)
            return
        for y in candidates[i]:
            if P.closure_mask(images + [y]).bit_count() == prefix_orders[i]:
                extend(images + [y])

    extend([])
    return maps


def automorphism_group(P: FiniteGroup, *, search_cap: int = AUT_SEARCH_CAP,
                       rank_cap: int = AUT_ELEMENTARY_RANK_CAP,
                       order_cap: int = AUT_ORDER_CAP) -> AutomorphismGroup:
    """Every automorphism of P, with the inner ones flagged."""
    if P.order == 1:
        maps = [(0,)]
    else:
        elem = _elementary_rank(P)
        if elem is not None:
            p, k = elem
            if k > rank_cap:
                raise CapExceeded(f"Aut({P.name}) rank", k, rank_cap)
            maps = _linear_automorphisms(P, p, k, order_cap)
        else:
            if P.order > search_cap:
                raise CapExceeded(f"Aut({P.name})", P.order, search_cap)
            maps = _generic_automorphisms(P, order_cap)
    maps = tuple(sorted(maps))
    index = {m: i for i, m in enumerate(maps)}
    inner = frozenset(index[m] for m in inner_maps(P))
    log.info("Aut(%s): order %d, inner %d", P.name, len(maps), len(inner))
    return AutomorphismGroup(P, maps, inner)
