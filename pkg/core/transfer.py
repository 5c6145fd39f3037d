"""
fb/core/transfer.py
───────────────────
Frobenius fusion systems F = F_S(G) seen from G.
  • restriction image Res^G_S(B(G)) against B(F)
  • the star product B(G) × B(F) → B(G) and the transfer B(F) → B(G)
  • unit diagram for a normal Sylow (restriction / tensor induction)
  • normalizer comparison N_G(S) vs G on units and control of fusion
  • genuine-set witnesses for stable elements
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from core.biset import Restriction, TensorInduction
from core.burnside import BurnsideElement, BurnsideRing, UnitGroup, signs_to_bits
from core.errors import ConsistencyError, PreconditionError, StabilityRequired
from core.fusion import FusionSystem, frobenius_fusion
from core.group import FiniteGroup, bits, mask_of, p_part, subgroup_group
from core.lattice import build_lattice, canonical_sylow
from core.stable import (
    StableLattice, f_class_marks, is_stable, out_action, out_fixed_units, stable_lattice,
    stable_units,
)
from core.zlattice import hnf_basis

log = logging.getLogger("fb.transfer")


class FrobeniusContext:
    """G, its canonical Sylow p-subgroup S and F = F_S(G), with lazily built rings."""

    def __init__(self, G: FiniteGroup, p: int, s_mask: int | None = None):
        self.G = G
        self.p = p
        self.s_mask = canonical_sylow(G, p) if s_mask is None else s_mask
        self.fusion = frobenius_fusion(G, self.s_mask, p)

    @property
    def F(self) -> FusionSystem:
        return self.fusion

    @cached_property
    def lattice(self):
        return build_lattice(self.G)

    @cached_property
    def ring(self) -> BurnsideRing:
        return BurnsideRing(self.lattice)

    @cached_property
    def s_id(self) -> int:
        return self.lattice.id_of(self.s_mask)

    @cached_property
    def restriction(self) -> Restriction:
        res = Restriction(self.ring, self.s_id)
        if res.target.table.rows != self.fusion.ring.table.rows:
            raise ConsistencyError("Sylow lattice built twice with different labelling")
        return res

    @cached_property
    def sylow_of_class(self) -> tuple[int, ...]:
        """Per G-class H: the S-subgroup id of K ∩ S for the least conjugate K with K ∩ S Sylow in K."""
        L = self.lattice
        LS = self.fusion.lattice
        emb = self.fusion.ambient[1]
        pos = {x: i for i, x in enumerate(emb)}
        out = []
        for members in L.classes:
            for k in members:
                inter = L.mask(k) & self.s_mask
                if inter.bit_count() == p_part(L.order(k), self.p):
                    out.append(LS.id_of(mask_of(pos[x] for x in bits(inter))))
                    break
        return tuple(out)

    @cached_property
    def normalizer(self) -> tuple[FiniteGroup, int]:
        """(N_G(S) as a group, mask of S inside it)."""
        n_mask = self.G.normalizer_mask(self.s_mask)
        N, emb = subgroup_group(self.G, n_mask, f"N({self.fusion.S.name})")
        pos = {x: i for i, x in enumerate(emb)}
        return N, mask_of(pos[x] for x in bits(self.s_mask))


# ══════════════════════════════════════════════════════════════════════════════
# RESTRICTION IMAGE / STAR PRODUCT / TRANSFER
# ══════════════════════════════════════════════════════════════════════════════

def restriction_image(ctx: FrobeniusContext) -> StableLattice:
    """Res^G_S(B(G)) as a lattice in B(S); equals B(F) or raises ConsistencyError."""
    F = ctx.fusion
    res = ctx.restriction
    images = [res(ctx.ring.transitive(c)).coeffs for c in range(ctx.ring.rank)]
    basis = tuple(BurnsideElement(v) for v in hnf_basis(images))
    marks = tuple(f_class_marks(F, F.ring.mark(b)) for b in basis)
    image = StableLattice(F, "restriction", basis, marks)
    if not image.same_as(stable_lattice(F)):
        raise ConsistencyError(f"{ctx.G.name}: Res^G_S(B(G)) differs from B(F)")
    log.info("%s: restriction image equals B(F) (rank %d)", ctx.G.name, image.rank)
    return image


def star_product(ctx: FrobeniusContext, a: BurnsideElement, b: BurnsideElement) -> BurnsideElement:
    """|(a∗b)^H| = |a^H| · |b^P| for P ∈ Syl_p(H) inside S."""
    F = ctx.fusion
    if not is_stable(F, b):
        raise StabilityRequired("star product needs an F-stable element of B(S)")
    ma = ctx.ring.mark(a)
    mb = F.ring.mark(b)
    LS = F.lattice
    marks = tuple(ma[h] * mb[LS.class_of[P]] for h, P in enumerate(ctx.sylow_of_class))
    if not ctx.ring.congruence_member(marks):
        raise ConsistencyError(f"{ctx.G.name}: star product fails the congruences")
    return ctx.ring.from_marks(marks)


def transfer(ctx: FrobeniusContext, b: BurnsideElement) -> BurnsideElement:
    """tr_F^G(b) = 1 ∗ b."""
    return star_product(ctx, ctx.ring.one(), b)


# ══════════════════════════════════════════════════════════════════════════════
# UNITS
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class BoucReport:
    rank_g: int
    rank_fixed: int
    restriction_iso: bool
    tensor_inverse: bool
    transfer_is_tensor: bool


def bouc_check(ctx: FrobeniusContext) -> BoucReport:
    """For S ⊴ G: Res and Ten are inverse isomorphisms B(G)^× ≅ (B(S)^×)^{Out_G(S)}."""
    if not ctx.G.is_normal(ctx.s_mask):
        raise PreconditionError(f"Sylow {ctx.p}-subgroup of {ctx.G.name} is not normal")
    F = ctx.fusion
    units_g = ctx.ring.unit_group()
    fixed = out_fixed_units(out_action(F, F.lattice.top))
    res = ctx.restriction
    ten = TensorInduction(ctx.ring, ctx.s_id)

    restricted = [tuple(res.apply(u.signs)) for u in units_g.basis]
    image = UnitGroup(F.ring, np.array([signs_to_bits(r) for r in restricted],
                                       dtype=np.bool_).reshape(-1, F.ring.rank))
    restriction_iso = image.same_as(fixed) and units_g.rank == fixed.rank
    tensor_inverse = all(tuple(ten.apply(r)) == u.signs
                         for r, u in zip(restricted, units_g.basis))
    for w in fixed.basis:
        back = tuple(ten.apply(w.signs))
        ctx.ring.from_marks(back)
        tensor_inverse = tensor_inverse and tuple(res.apply(back)) == w.signs
    transfer_is_tensor = all(
        ctx.ring.mark(transfer(ctx, w.element)).values == tuple(ten.apply(w.signs))
        for w in stable_units(F).basis
    )
    report = BoucReport(units_g.rank, fixed.rank, restriction_iso, tensor_inverse,
                        transfer_is_tensor)
    if not (restriction_iso and tensor_inverse and transfer_is_tensor):
        raise ConsistencyError(f"{ctx.G.name}: normal-Sylow unit diagram fails: {report}")
    return report


@dataclass(frozen=True)
class NormalizerReport:
    controls_fusion: bool
    restriction_image_is_stable_units: bool
    stable_units_equal_normalizer_units: bool
    rank_normalizer_units: int
    rank_stable_units: int
    abelian_sylow: bool
    notes: tuple[str, ...] = field(default=())


def normalizer_diagram(ctx: FrobeniusContext) -> NormalizerReport:
    """Compare G with N_G(S) through units of B(F), B(F') and B(N_G(S))."""
    F = ctx.fusion
    N, s_local = ctx.normalizer
    ring_n = BurnsideRing(build_lattice(N))
    s_in_n = ring_n.lattice.id_of(s_local)
    res_n = Restriction(ring_n, s_in_n)
    if res_n.target.table.rows != F.ring.table.rows:
        raise ConsistencyError("Sylow lattice built twice with different labelling")
    units_n = ring_n.unit_group()
    image = UnitGroup(F.ring, np.array(
        [signs_to_bits(res_n.apply(u.signs)) for u in units_n.basis],
        dtype=np.bool_).reshape(-1, F.ring.rank))
    f_prime = frobenius_fusion(N, s_local, ctx.p, s_lattice=F.lattice)
    stable = stable_units(F)
    stable_prime = stable_units(f_prime)
    cond_image = image.same_as(stable)
    cond_equal = stable.same_as(stable_prime)
    controls = F.same_as(f_prime)
    abelian = F.S.is_abelian
    if cond_image != cond_equal:
        raise ConsistencyError(f"{ctx.G.name}: normalizer unit conditions disagree")
    if controls and not cond_equal:
        raise ConsistencyError(f"{ctx.G.name}: N_G(S) controls fusion but units differ")
    if abelian and not controls:
        raise ConsistencyError(f"{ctx.G.name}: abelian Sylow without normalizer control")
    notes = ("split embedding of B(F)^× into B(N_G(S))^× is equivalent to the image condition",)
    return NormalizerReport(controls, cond_image, cond_equal, units_n.rank, stable.rank,
                            abelian, notes)


# ══════════════════════════════════════════════════════════════════════════════
# GENUINE WITNESSES
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class NonRealizable:
    """No G-set restricts to the element; `nodes` search nodes were explored."""
    nodes: int


def genuine_witness(ctx: FrobeniusContext, b: BurnsideElement):
    """A G-set X with Res^G_S(X) = b, or NonRealizable."""
    F = ctx.fusion
    target = list(F.ring.mark(b))
    if any(v < 0 for v in target):
        raise PreconditionError("witness search needs non-negative marks")
    res = ctx.restriction
    ring = ctx.ring
    columns = [tuple(res.apply(ring.mark(ring.transitive(c)))) for c in range(ring.rank)]
    order = sorted(range(ring.rank), key=lambda c: (-columns[c][0], c))
    counts = [0] * ring.rank
    nodes = 0

    def search(i: int, remaining: list[int]) -> bool:
        nonlocal nodes
        nodes += 1
        if i == len(order):
            return not any(remaining)
        c = order[i]
        col = columns[c]
        top = remaining[0] // col[0]
        for x in range(top, -1, -1):
            left = [r - x * v for r, v in zip(remaining, col)]
            if any(v < 0 for v in left):
                continue
            counts[c] = x
            if search(i + 1, left):
                return True
        counts[c] = 0
        return False

    if search(0, target):
        witness = BurnsideElement(tuple(counts))
        if res(witness) != b:
            raise ConsistencyError("witness does not restrict to the target element")
        log.info("%s: witness found after %d nodes", ctx.G.name, nodes)
        return witness
    log.info("%s: no witness after %d nodes", ctx.G.name, nodes)
    return NonRealizable(nodes)
