"""
fb/core/stable.py
─────────────────
The Burnside ring B(F) of a fusion system and its units.
  • stable lattice as an integer kernel, canonical Hermite basis
  • Reeh basis by stabilizing transitive S-sets
  • Out_F(P)-action on B(P)^×, fixed units, trace maps
  • B(F)^× as an intersection of kernels over S and the essentials
  • units attached to maximal subgroups; strong-closure classification

B(F) lives inside B(S); every basis element here is a BurnsideElement
over the S-classes of the fusion system's lattice.
"""

import logging
from dataclasses import dataclass

import numpy as np

from core import f2
from core.burnside import (
    BurnsideElement, BurnsideRing, MarkVector, Unit, UnitGroup,
    maximal_unit_marks, signs_to_bits,
)
from core.biset import Inflation
from core.config import UNIT_FILTER_RANK_CAP
from core.errors import ConsistencyError, PreconditionError
from core.fusion import FusionSystem, LocalData, detect_essentials, is_strongly_closed, local_data
from core.group import FiniteGroup, bits, mask_of
from core.zlattice import hnf_basis, integer_kernel, lattice_contains, same_lattice

log = logging.getLogger("fb.stable")


# ══════════════════════════════════════════════════════════════════════════════
# STABLE ELEMENTS
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class StableLattice:
    """A Z-basis of B(F) ⊆ B(S).

    marks[i][f] is the mark of basis element i at F-class f.
    """
    fusion: FusionSystem
    kind: str
    basis: tuple[BurnsideElement, ...]
    marks: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def vectors(self) -> list[tuple[int, ...]]:
        return [b.coeffs for b in self.basis]

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        return hnf_basis(self.vectors())

    def same_as(self, other: "StableLattice") -> bool:
        return same_lattice(self.vectors(), other.vectors())

    def contains(self, b: BurnsideElement) -> bool:
        return lattice_contains(self.vectors(), [b.coeffs])

    def includes(self, other: "StableLattice") -> bool:
        """other ⊆ self as lattices."""
        return lattice_contains(self.vectors(), other.vectors())

    def coordinates(self, values) -> tuple[int, ...]:
        """Coefficients over a Reeh basis of the element with F-class marks `values`."""
        if self.kind != "reeh":
            raise PreconditionError("coordinates need a Reeh basis")
        R = self.marks
        n = self.rank
        c = [0] * n
        for q in range(n - 1, -1, -1):
            rest = values[q] - sum(c[p] * R[p][q] for p in range(q + 1, n))
            k, r = divmod(rest, R[q][q])
            if r:
                raise ConsistencyError(f"marks are not in B(F) at F-class {q}")
            c[q] = k
        return tuple(c)


def f_class_marks(F: FusionSystem, v) -> tuple[int, ...]:
    """Restrict an S-class mark vector to one value per F-class (at the representative)."""
    L = F.lattice
    return tuple(v[L.class_of[c[0]]] for c in F.classes)


def is_stable_marks(F: FusionSystem, v) -> bool:
    return all(len({v[c] for c in F.s_classes_in(f)}) == 1 for f in range(len(F.classes)))


def is_stable_marks_local(F: FusionSystem, v) -> bool:
    """Stability tested only against Aut_F(R) for R = S and the essentials."""
    pairs = set()
    for R in (F.lattice.top,) + detect_essentials(F):
        pairs |= _kernel_pairs(F, R)
    return all(v[a] == v[b] for a, b in pairs)


def is_stable(F: FusionSystem, b: BurnsideElement, *, mode: str = "all") -> bool:
    """Whether the marks of b are constant on F-conjugacy classes.

    mode "all" compares every F-class; "essentials" uses only the
    automizers of S and of the essential subgroups.
    """
    v = F.ring.mark(b)
    if mode == "all":
        return is_stable_marks(F, v)
    if mode == "essentials":
        return is_stable_marks_local(F, v)
    raise PreconditionError(f"unknown stability mode {mode!r}")


def stable_lattice(F: FusionSystem) -> StableLattice:
    """B(F) as the integer kernel of the mark-difference functionals."""
    ring = F.ring
    M = ring.table.rows
    rows = []
    for f in range(len(F.classes)):
        scs = F.s_classes_in(f)
        for c in scs[1:]:
            rows.append([M[scs[0]][k] - M[c][k] for k in range(ring.rank)])
    kernel = integer_kernel(rows, ring.rank)
    basis = tuple(BurnsideElement(v) for v in hnf_basis(kernel))
    if len(basis) != len(F.classes):
        raise ConsistencyError(
            f"{F.name}: stable lattice has rank {len(basis)}, expected {len(F.classes)}")
    marks = tuple(f_class_marks(F, ring.mark(b)) for b in basis)
    log.info("B(%s): rank %d from %d constraints", F.name, len(basis), len(rows))
    return StableLattice(F, "hnf", basis, marks)


def reeh_basis(F: FusionSystem, *, cross_check: bool = False) -> StableLattice:
    """α_P for each F-class, obtained by stabilizing [S/P] from the top down.

    P is the fully normalized member of its class (least id on ties).
    """
    ring = F.ring
    L = F.lattice
    M = ring.table.rows
    n = len(F.classes)
    basis = [None] * n
    for f in range(n - 1, -1, -1):
        P = F.fully_normalized_rep(f)
        x = list(ring.transitive(L.class_of[P]).coeffs)
        m = list(ring.mark(BurnsideElement(tuple(x))))
        for g in range(f, -1, -1):
            scs = F.s_classes_in(g)
            target = max(m[c] for c in scs)
            for c in scs:
                diff = target - m[c]
                if not diff:
                    continue
                k, r = divmod(diff, M[c][c])
                if r:
                    raise ConsistencyError(
                        f"{F.name}: cannot stabilize [S/{L.labels[P]}] at class {L.class_label(c)}")
                x[c] += k
                for h in range(c + 1):
                    m[h] += k * M[h][c]
        basis[f] = BurnsideElement(tuple(x))
        if not is_stable_marks(F, m):
            raise ConsistencyError(f"{F.name}: stabilized [S/{L.labels[P]}] is not stable")
    marks = tuple(f_class_marks(F, ring.mark(b)) for b in basis)
    result = StableLattice(F, "reeh", tuple(basis), marks)
    if cross_check and not result.same_as(stable_lattice(F)):
        raise ConsistencyError(f"{F.name}: Reeh basis and stable lattice disagree")
    return result


# ══════════════════════════════════════════════════════════════════════════════
# OUTER AUTOMORPHISM ACTION
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class OutAction:
    """Out_F(P) acting on the conjugacy classes of subgroups of P.

    perms[o][k] is the class of α(Q_k) for a representative α of o.
    """
    fusion: FusionSystem
    subgroup: int
    ring: BurnsideRing
    local: LocalData
    perms: tuple[tuple[int, ...], ...]

    @property
    def group(self) -> FiniteGroup:
        return self.local.out_group

    @property
    def out_s(self) -> int:
        return self.local.out_s

    @property
    def full(self) -> int:
        return self.group.full_mask

    def act(self, o: int, values) -> tuple[int, ...]:
        out = [0] * len(values)
        for k, c in enumerate(self.perms[o]):
            out[c] = values[k]
        return tuple(out)


def out_action(F: FusionSystem, P: int) -> OutAction:
    ld = local_data(F, P)
    ring = F.ring.sub_ring(P)
    LP = ring.lattice
    L = F.lattice
    emb = L.subgroup_group(P)[1] if P != L.top else tuple(range(F.S.order))
    pos = {x: i for i, x in enumerate(emb)}
    perms = []
    for rep in ld.out.reps:
        a = tuple(pos[y] for y in ld.maps[rep])
        perms.append(tuple(
            LP.class_of[LP.id_of(mask_of(a[x] for x in LP.subgroups[LP.class_reps[k]].elements))]
            for k in range(LP.class_count)
        ))
    return OutAction(F, P, ring, ld, tuple(perms))


def out_fixed_units(action: OutAction, gamma: int | None = None) -> UnitGroup:
    """(B(P)^×)^Γ for Γ ≤ Out_F(P) given as a mask (default: all of Out_F(P))."""
    gamma = action.full if gamma is None else gamma
    units = action.ring.unit_group()
    rows = units.rows
    if rows.shape[0] == 0:
        return units
    blocks = []
    for o in bits(gamma):
        perm = action.perms[o]
        moved = np.zeros_like(rows)
        moved[:, list(perm)] = rows
        blocks.append(moved ^ rows)
    D = np.hstack(blocks) if blocks else np.zeros((rows.shape[0], 0), dtype=np.bool_)
    coeffs = f2.left_kernel(D)
    return UnitGroup(action.ring, f2.combine(coeffs, rows), "fixed")


def trace(action: OutAction, u, delta: int, gamma: int | None = None,
          transversal: list[int] | None = None) -> Unit:
    """tr_Δ^Γ(u) = Π over a transversal of Γ/Δ of α·u, for Δ-fixed u."""
    G = action.group
    gamma = action.full if gamma is None else gamma
    if delta & ~gamma:
        raise PreconditionError("trace: Δ is not contained in Γ")
    signs = tuple(u.signs if isinstance(u, Unit) else u)
    for d in bits(delta):
        if action.act(d, signs) != signs:
            raise PreconditionError("trace: unit is not Δ-fixed")
    if transversal is None:
        transversal, covered = [], 0
        for a in bits(gamma):
            if (covered >> a) & 1:
                continue
            transversal.append(a)
            for d in bits(delta):
                covered |= 1 << G.mul(a, d)
    out = [1] * len(signs)
    for a in transversal:
        moved = action.act(a, signs)
        out = [x * y for x, y in zip(out, moved)]
    out = tuple(out)
    return Unit(out, action.ring.from_marks(out))


# ══════════════════════════════════════════════════════════════════════════════
# STABLE UNITS
# ══════════════════════════════════════════════════════════════════════════════

def _kernel_pairs(F: FusionSystem, R: int) -> set[tuple[int, int]]:
    """S-class pairs (Q, α(Q)) for Q ≤ R, α ∈ Aut_F(R); Ker(d_R) forces equal signs."""
    L = F.lattice
    elems = L.subgroups[R].elements
    pairs = set()
    for a in F.aut(R):
        image = dict(zip(elems, a))
        for q in L.subs[R]:
            c1 = L.class_of[q]
            c2 = L.class_of[L.id_of(mask_of(image[x] for x in L.subgroups[q].elements))]
            if c1 != c2:
                pairs.add((min(c1, c2), max(c1, c2)))
    return pairs


def stable_units(F: FusionSystem, *, cross_check: bool = True) -> UnitGroup:
    """B(F)^× = ∩ Ker(d_R) over R = S and the F-essential subgroups."""
    ring = F.ring
    units = ring.unit_group()
    essentials = detect_essentials(F)
    pairs = set()
    for R in (F.lattice.top,) + essentials:
        pairs |= _kernel_pairs(F, R)
    rows = units.rows
    if pairs and rows.shape[0]:
        D = np.stack([rows[:, a] ^ rows[:, b] for a, b in sorted(pairs)], axis=1)
        rows = f2.combine(f2.left_kernel(D), rows)
    result = UnitGroup(ring, rows, "stable")

    if cross_check:
        if not essentials:
            fixed = out_fixed_units(out_action(F, F.lattice.top))
            if not fixed.same_as(result):
                raise ConsistencyError(f"{F.name}: Out_F(S)-fixed units differ from B(F)^×")
        if units.rank <= UNIT_FILTER_RANK_CAP:
            kept = [signs_to_bits(s) for s in units.members() if is_stable_marks(F, s)]
            swept = UnitGroup(ring, np.array(kept, dtype=np.bool_).reshape(-1, ring.rank))
            if not swept.same_as(result):
                raise ConsistencyError(f"{F.name}: stable-unit sweep differs from kernel computation")
        else:
            log.warning("%s: B(S)^× rank %d, skipping stable-unit sweep", F.name, units.rank)
    log.info("B(%s)^×: rank %d (B(S)^× rank %d, %d essentials)",
             F.name, result.rank, units.rank, len(essentials))
    return result


def maximal_unit(ring: BurnsideRing, m: int) -> Unit:
    """The unit inflated from [C2/C2] − [C2/1] along S → S/M."""
    L = ring.lattice
    if m not in L.maximal or L.order(L.top) != 2 * L.order(m):
        raise PreconditionError(f"{L.labels[m]} is not a maximal subgroup of index 2")
    inf = Inflation(ring, m)
    LQ = inf.source.lattice
    base = tuple(-1 if LQ.order(LQ.class_reps[c]) == 1 else 1 for c in range(LQ.class_count))
    marks = tuple(inf.apply(base))
    if marks != maximal_unit_marks(L, m):
        raise ConsistencyError(f"inflated unit for {L.labels[m]} has unexpected marks")
    return Unit(marks, ring.from_marks(marks))


@dataclass(frozen=True)
class MaximalRow:
    subgroup: int
    label: str
    unit_stable: bool
    strongly_closed: bool
    abelian: bool
    normal_in_f: bool | None


@dataclass(frozen=True)
class MaximalClassification:
    rows: tuple[MaximalRow, ...]
    all_stable: bool
    frattini: int
    frattini_strongly_closed: bool | None
    frattini_normal: bool | None


def _abelian(F: FusionSystem, h: int) -> bool:
    S = F.S
    gens = S.generators_of(F.lattice.mask(h))
    return all(S.mul(a, b) == S.mul(b, a) for a in gens for b in gens)


def classify_maximals(F: FusionSystem) -> MaximalClassification:
    """Stability of v_M against strong closure of M, for each maximal M."""
    if F.p != 2:
        raise PreconditionError(f"{F.name}: maximal units need p = 2")
    L = F.lattice
    ring = F.ring
    rows = []
    essentials = None
    for m in L.maximal:
        v = maximal_unit(ring, m)
        stable = is_stable_marks(F, v.signs)
        closed = is_strongly_closed(F, m)
        if stable != closed:
            raise ConsistencyError(
                f"{F.name}: unit of {L.labels[m]} stable={stable} but strongly closed={closed}")
        abelian = _abelian(F, m)
        if abelian and stable:
            essentials = detect_essentials(F) if essentials is None else essentials
            if set(essentials) - {m}:
                raise ConsistencyError(f"{F.name}: essential subgroups outside {L.labels[m]}")
        rows.append(MaximalRow(m, L.labels[m], stable, closed, abelian,
                               closed if abelian else None))
    all_stable = bool(rows) and all(r.unit_stable for r in rows)
    phi = L.frattini
    phi_closed = phi_normal = None
    if all_stable:
        phi_closed = is_strongly_closed(F, phi)
        if not phi_closed:
            raise ConsistencyError(f"{F.name}: Frattini subgroup is not strongly closed")
        if _abelian(F, phi):
            phi_normal = True
    return MaximalClassification(tuple(rows), all_stable, phi, phi_closed, phi_normal)


def abelian_unit_basis(F: FusionSystem) -> UnitGroup:
    """B(F)^× for abelian S: −1 and one product of maximal units per F-class of maximals."""
    L = F.lattice
    ring = F.ring
    if not F.S.is_abelian:
        raise PreconditionError(f"{F.S.name} is not abelian")
    if F.p != 2:
        return UnitGroup(ring, signs_to_bits((-1,) * ring.rank)[None, :], "abelian")
    rows = [signs_to_bits((-1,) * ring.rank)]
    for c in F.classes:
        members = [h for h in c if h in L.maximal]
        if not members:
            continue
        acc = np.zeros(ring.rank, dtype=np.bool_)
        for h in members:
            acc ^= signs_to_bits(maximal_unit(ring, h).signs)
        rows.append(acc)
    return UnitGroup(ring, np.array(rows, dtype=np.bool_), "abelian")


def ambient_check(F: FusionSystem) -> dict:
    """Compare B(F)^× with B(S)^× and F with F_S(S)."""
    ring = F.ring
    units = stable_units(F)
    full = ring.unit_group()
    equal = units.same_as(full)
    trivial = F.is_trivial()
    return {
        "units_equal_ambient": equal,
        "fusion_trivial": trivial,
        "counterexample": equal != trivial,
        "rank_stable": units.rank,
        "rank_ambient": full.rank,
    }


def unit_marks_over_f(F: FusionSystem, unit: Unit) -> tuple[int, ...]:
    return f_class_marks(F, MarkVector(unit.signs))
