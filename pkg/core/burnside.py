"""
fb/core/burnside.py
───────────────────
The Burnside ring B(G) and its ghost ring.
  • marks table, mark homomorphism, inverse (from_marks)
  • congruence membership test for mark vectors
  • ring arithmetic on transitive-set coordinates
  • unit group B(G)^× as an F2-space with certified preimages

Coordinates are indexed by conjugacy-class index of the lattice; the
marks table is upper triangular in that order.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from core import f2
from core.config import UNIT_CLASS_CAP, ENUMERATION_CROSSCHECK_CLASSES
from core.errors import NotIntegral, CapExceeded, ConsistencyError, PreconditionError
from core.group import prime_factors, p_part, quotient
from core.lattice import SubgroupLattice, build_lattice

log = logging.getLogger("fb.burnside")


# ══════════════════════════════════════════════════════════════════════════════
# VALUE TYPES
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class MarkVector:
    """A ghost-ring element: one integer per conjugacy class."""
    values: tuple[int, ...]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __add__(self, other: "MarkVector") -> "MarkVector":
        return MarkVector(tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "MarkVector") -> "MarkVector":
        return MarkVector(tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "MarkVector":
        return MarkVector(tuple(-a for a in self.values))

    def __mul__(self, other) -> "MarkVector":
        if isinstance(other, MarkVector):
            return MarkVector(tuple(a * b for a, b in zip(self.values, other.values)))
        return MarkVector(tuple(a * other for a in self.values))

    __rmul__ = __mul__


@dataclass(frozen=True)
class BurnsideElement:
    """Σ coeffs[c]·[G/H_c] over class representatives H_c."""
    coeffs: tuple[int, ...]

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        return BurnsideElement(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        return BurnsideElement(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "BurnsideElement":
        return BurnsideElement(tuple(-a for a in self.coeffs))

    def scale(self, k: int) -> "BurnsideElement":
        return BurnsideElement(tuple(k * a for a in self.coeffs))

    @property
    def is_genuine(self) -> bool:
        return all(a >= 0 for a in self.coeffs)


@dataclass(frozen=True)
class MarksTable:
    """rows[h][k] = |(G/K)^H| for class representatives H, K."""
    rows: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.rows)


def marks_table(L: SubgroupLattice) -> MarksTable:
    """|(G/K)^H| = |N_G(H)| · #{H' ∈ cl(H) : H' ≤ K} / |K|."""
    c = L.class_count
    rows = []
    for h in range(c):
        H = L.class_reps[h]
        n_order = L.order(L.normalizer[H])
        row = []
        for k in range(c):
            K = L.class_reps[k]
            inside = sum(1 for h2 in L.classes[h] if L.leq(h2, K))
            num = n_order * inside
            if num % L.order(K):
                raise ConsistencyError(f"{L.group.name}: non-integral mark at ({h},{k})")
            row.append(num // L.order(K))
        rows.append(tuple(row))
    labels = tuple(L.class_label(i) for i in range(c))
    return MarksTable(tuple(rows), labels)


# ══════════════════════════════════════════════════════════════════════════════
# RING
# ══════════════════════════════════════════════════════════════════════════════

class BurnsideRing:
    """B(G) for the group of a subgroup lattice."""

    def __init__(self, lattice: SubgroupLattice, table: MarksTable | None = None):
        self.lattice = lattice
        self.table = table or marks_table(lattice)
        self._unit_groups: dict[str, "UnitGroup"] = {}
        self._sub_rings: dict[int, "BurnsideRing"] = {}
        self._quotient_rings: dict[int, tuple] = {}

    @property
    def group(self):
        return self.lattice.group

    @property
    def rank(self) -> int:
        return self.table.size

    # ── coordinates ───────────────────────────────────────────────────────
    def one(self) -> BurnsideElement:
        return self.transitive(self.rank - 1)

    def zero(self) -> BurnsideElement:
        return BurnsideElement((0,) * self.rank)

    def transitive(self, c: int) -> BurnsideElement:
        """[G/H] for the representative of class c."""
        return BurnsideElement(tuple(int(i == c) for i in range(self.rank)))

    def mark(self, b: BurnsideElement) -> MarkVector:
        M = self.table.rows
        n = self.rank
        if len(b) != n:
            raise PreconditionError(f"element has {len(b)} coordinates, ring has {n}")
        return MarkVector(tuple(
            sum(b[k] * M[h][k] for k in range(h, n) if b[k]) for h in range(n)
        ))

    def from_marks(self, v) -> BurnsideElement:
        """Triangular back-substitution; raises NotIntegral at the first failure."""
        M = self.table.rows
        n = self.rank
        v = tuple(v)
        if len(v) != n:
            raise PreconditionError(f"mark vector has {len(v)} entries, ring has {n}")
        b = [0] * n
        for h in range(n - 1, -1, -1):
            rest = v[h] - sum(b[k] * M[h][k] for k in range(h + 1, n) if b[k])
            q, r = divmod(rest, M[h][h])
            if r:
                raise NotIntegral(h)
            b[h] = q
        return BurnsideElement(tuple(b))

    def is_integral(self, v) -> bool:
        try:
            self.from_marks(v)
        except NotIntegral:
            return False
        return True

    def mul(self, a: BurnsideElement, b: BurnsideElement) -> BurnsideElement:
        return self.from_marks(self.mark(a) * self.mark(b))

    def power(self, a: BurnsideElement, k: int) -> BurnsideElement:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    # ── congruences ───────────────────────────────────────────────────────
    @cached_property
    def congruences(self) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
        """(modulus, ((class, μ-coefficient), …)) for each class H and prime q | |W(H)|."""
        L = self.lattice
        out = []
        for h in range(self.rank):
            H = L.class_reps[h]
            N = L.normalizer[H]
            w = L.order(N) // L.order(H)
            for q in prime_factors(w):
                target = L.order(H) * p_part(w, q)
                Q = next(i for i in L.supers[H] if L.order(i) == target and L.leq(i, N))
                coeffs: dict[int, int] = {}
                for i in L.supers[H]:
                    if L.leq(i, Q):
                        mu = L.moebius(H, i)
                        if mu:
                            c = L.class_of[i]
                            coeffs[c] = coeffs.get(c, 0) + mu
                out.append((target // L.order(H), tuple(sorted(coeffs.items()))))
        return tuple(out)

    def congruence_member(self, v) -> bool:
        """Whether v is the mark vector of some element, by congruences alone."""
        v = tuple(v)
        return all(sum(mu * v[c] for c, mu in terms) % modulus == 0
                   for modulus, terms in self.congruences)

    # ── related rings ─────────────────────────────────────────────────────
    def sub_ring(self, h: int) -> "BurnsideRing":
        """B(H) for subgroup id h, with H relabelled as a group of its own."""
        if h == self.lattice.top:
            return self
        cache = self._sub_rings
        if h not in cache:
            cache[h] = BurnsideRing(self.lattice.sublattice(h))
        return cache[h]

    def quotient_ring(self, n: int):
        """(Quotient, B(G/N)) for a normal subgroup id n."""
        cache = self._quotient_rings
        if n not in cache:
            Q = quotient(self.group, self.lattice.mask(n))
            cache[n] = (Q, BurnsideRing(build_lattice(Q.group)))
        return cache[n]

    # ── units ─────────────────────────────────────────────────────────────
    def unit_group(self, method: str = "auto", *, cap: int = UNIT_CLASS_CAP) -> "UnitGroup":
        key = f"{method}:{cap}"
        if key not in self._unit_groups:
            self._unit_groups[key] = unit_group(self, method, cap=cap)
        return self._unit_groups[key]


# ══════════════════════════════════════════════════════════════════════════════
# UNITS
# ══════════════════════════════════════════════════════════════════════════════

def signs_to_bits(signs) -> np.ndarray:
    return np.array([s == -1 for s in signs], dtype=np.bool_)


def bits_to_signs(row) -> tuple[int, ...]:
    return tuple(-1 if b else 1 for b in row)


@dataclass(frozen=True)
class Unit:
    """A unit of B(G): its ±1 mark vector and certified preimage."""
    signs: tuple[int, ...]
    element: BurnsideElement


class UnitGroup:
    """A subgroup of B(G)^×, stored as a canonical F2 basis of sign vectors."""

    def __init__(self, ring: BurnsideRing, rows: np.ndarray, method: str = ""):
        self.ring = ring
        self.method = method
        rows = np.asarray(rows, dtype=np.bool_).reshape(-1, ring.rank)
        self.rows = f2.span_basis(rows)
        basis = []
        for row in self.rows:
            signs = bits_to_signs(row)
            try:
                element = ring.from_marks(signs)
            except NotIntegral as exc:
                raise ConsistencyError(
                    f"{ring.group.name}: sign vector {signs} is not a unit") from exc
            basis.append(Unit(signs, element))
        self.basis = tuple(basis)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return 2 ** self.rank

    def contains(self, signs) -> bool:
        return f2.in_span(self.rows, signs_to_bits(signs))

    @property
    def contains_minus_one(self) -> bool:
        return self.contains((-1,) * self.ring.rank)

    def same_as(self, other: "UnitGroup") -> bool:
        return f2.same_span(self.rows, other.rows)

    def issubset(self, other: "UnitGroup") -> bool:
        return all(other.contains(u.signs) for u in self.basis)

    def members(self):
        """Every unit in the group, as sign vectors (2**rank of them)."""
        n = self.ring.rank
        for code in range(self.order):
            acc = np.zeros(n, dtype=np.bool_)
            for i in range(self.rank):
                if (code >> i) & 1:
                    acc ^= self.rows[i]
            yield bits_to_signs(acc)


def maximal_unit_marks(L: SubgroupLattice, m: int) -> tuple[int, ...]:
    """Marks of the unit attached to an index-2 subgroup M: −1 exactly on classes inside M."""
    return tuple(-1 if L.leq(L.class_reps[c], m) else 1 for c in range(L.class_count))


def _abelian_two_group_units(ring: BurnsideRing) -> np.ndarray:
    L = ring.lattice
    rows = [signs_to_bits((-1,) * ring.rank)]
    rows += [signs_to_bits(maximal_unit_marks(L, m)) for m in L.maximal]
    return np.array(rows, dtype=np.bool_)


def _search_units(ring: BurnsideRing) -> np.ndarray:
    """Top-down sign assignment pruned by triangular integrality."""
    M = ring.table.rows
    n = ring.rank
    found = []
    signs = [1] * n
    coeffs = [0] * n

    def descend(h: int):
        if h < 0:
            found.append(signs_to_bits(signs))
            return
        rest = sum(coeffs[k] * M[h][k] for k in range(h + 1, n) if coeffs[k])
        for s in (1, -1):
            q, r = divmod(s - rest, M[h][h])
            if r == 0:
                signs[h], coeffs[h] = s, q
                descend(h - 1)
        signs[h], coeffs[h] = 1, 0

    descend(n - 1)
    log.debug("unit search %s: %d units", ring.group.name, len(found))
    return np.array(found, dtype=np.bool_).reshape(-1, n)


def _exhaustive_units(ring: BurnsideRing) -> np.ndarray:
    """Gray-code sweep over all ±1 vectors, checked by back-substitution."""
    n = ring.rank
    found = []
    for i in range(1 << n):
        g = i ^ (i >> 1)
        signs = tuple(-1 if (g >> k) & 1 else 1 for k in range(n))
        if ring.is_integral(signs):
            found.append(signs_to_bits(signs))
    return np.array(found, dtype=np.bool_).reshape(-1, n)


def unit_group(ring: BurnsideRing, method: str = "auto", *,
               cap: int = UNIT_CLASS_CAP) -> UnitGroup:
    """B(G)^× with a canonical F2 basis.

    method: "auto" (abelian 2-group formula, else search), "search",
    or "exhaustive" (cross-check only).
    """
    G = ring.group
    abelian_two = G.is_abelian and G.order > 1 and prime_factors(G.order) == [2]
    if method == "auto":
        method = "abelian" if abelian_two else "search"
    if method == "abelian":
        if not abelian_two:
            raise PreconditionError(f"{G.name} is not an abelian 2-group")
        rows = _abelian_two_group_units(ring)
    elif method == "search":
        if ring.rank > cap:
            raise CapExceeded(f"unit search for {G.name}", ring.rank, cap)
        rows = _search_units(ring)
    elif method == "exhaustive":
        if ring.rank > ENUMERATION_CROSSCHECK_CLASSES:
            raise CapExceeded(f"exhaustive units for {G.name}", ring.rank,
                              ENUMERATION_CROSSCHECK_CLASSES)
        rows = _exhaustive_units(ring)
    else:
        raise PreconditionError(f"unknown unit method {method!r}")
    units = UnitGroup(ring, rows, method)
    log.info("B(%s)^×: rank %d (%s)", G.name, units.rank, method)
    return units
