"""
fb/core/biset.py
────────────────
Biset operations between Burnside rings, computed on ghost coordinates.
  • Res^G_H, Ind^G_H, Ten^G_H (tensor induction)
  • Inf^G_{G/N}, Def^G_{G/N}, Iso along a group isomorphism
  • composites (Indinf, Defres)

Each map precomputes, per target class, which source classes feed it;
apply() then works on plain mark vectors so units and stable elements
can be pushed through without a round trip to coordinates.
"""

import logging

from core.burnside import BurnsideRing, BurnsideElement, MarkVector
from core.errors import BisetPayloadError, PreconditionError
from core.group import bits, mask_of

log = logging.getLogger("fb.biset")


class BisetMap:
    """A ghost-level map B(source) → B(target)."""

    kind = "biset"

    def __init__(self, source: BurnsideRing, target: BurnsideRing):
        self.source = source
        self.target = target

    def apply(self, v) -> MarkVector:
        v = tuple(v)
        if len(v) != self.source.rank:
            raise BisetPayloadError(
                f"{self.kind}: vector of length {len(v)} for a source with "
                f"{self.source.rank} classes")
        return MarkVector(self._apply(v))

    def _apply(self, v: tuple[int, ...]) -> tuple[int, ...]:
        raise NotImplementedError

    def __call__(self, b: BurnsideElement) -> BurnsideElement:
        return self.target.from_marks(self.apply(self.source.mark(b)))

    def then(self, other: "BisetMap") -> "Composite":
        return Composite(self, other)


def ghost_biset(kind: BisetMap, v) -> MarkVector:
    return kind.apply(v)


# ══════════════════════════════════════════════════════════════════════════════
# HELPERS
# ══════════════════════════════════════════════════════════════════════════════

def _local_class(sub_ring: BurnsideRing, embedding, g_mask: int) -> int:
    """Class index in the subgroup ring of a G-subgroup lying inside it."""
    pos = {x: i for i, x in enumerate(embedding)}
    local = mask_of(pos[x] for x in bits(g_mask))
    L = sub_ring.lattice
    return L.class_of[L.id_of(local)]


def double_cosets(ring: BurnsideRing, s_mask: int, h_mask: int) -> list[int]:
    """Least representatives g of the double cosets S g H."""
    G = ring.group
    t = G.table
    covered = 0
    reps = []
    s_elems, h_elems = list(bits(s_mask)), list(bits(h_mask))
    for g in range(G.order):
        if (covered >> g) & 1:
            continue
        reps.append(g)
        for s in s_elems:
            sg = t[s][g]
            row = t[sg]
            for h in h_elems:
                covered |= 1 << row[h]
    return reps


# ══════════════════════════════════════════════════════════════════════════════
# RESTRICTION / INDUCTION / TENSOR INDUCTION
# ══════════════════════════════════════════════════════════════════════════════

class Restriction(BisetMap):
    """Res^G_H: (Res n)_T = n_T for T ≤ H."""

    kind = "Res"

    def __init__(self, ring: BurnsideRing, h: int):
        super().__init__(ring, ring.sub_ring(h))
        L = ring.lattice
        LH = self.target.lattice
        _, emb = L.subgroup_group(h) if h != L.top else (None, tuple(range(ring.group.order)))
        self.feed = tuple(
            L.class_of[L.id_of(mask_of(emb[x] for x in LH.subgroups[LH.class_reps[t]].elements))]
            for t in range(LH.class_count)
        )

    def _apply(self, v):
        return tuple(v[c] for c in self.feed)


class _OverDoubleCosets(BisetMap):
    """Shared setup for Ind and Ten: per G-class, the H-classes met per double coset."""

    def __init__(self, ring: BurnsideRing, h: int):
        super().__init__(ring.sub_ring(h), ring)
        L = ring.lattice
        G = ring.group
        self.h_mask = L.mask(h)
        _, emb = L.subgroup_group(h) if h != L.top else (None, tuple(range(G.order)))
        self._emb = emb
        self.feed = tuple(self._classes_for(L.mask(L.class_reps[c])) for c in range(ring.rank))

    def _classes_for(self, s_mask: int) -> tuple[int, ...]:
        raise NotImplementedError


class Induction(_OverDoubleCosets):
    """Ind^G_H: (Ind n)_S = Σ n_{g⁻¹Sg} over double cosets SgH with g⁻¹Sg ≤ H."""

    kind = "Ind"

    def _classes_for(self, s_mask):
        G = self.target.group
        out = []
        for g in double_cosets(self.target, s_mask, self.h_mask):
            conj = G.conj_mask(G.inv(g), s_mask)
            if conj & ~self.h_mask == 0:
                out.append(_local_class(self.source, self._emb, conj))
        return tuple(out)

    def _apply(self, v):
        return tuple(sum(v[c] for c in cs) for cs in self.feed)


class TensorInduction(_OverDoubleCosets):
    """Ten^G_H: (Ten n)_S = Π n_{H ∩ g⁻¹Sg} over all double cosets SgH."""

    kind = "Ten"

    def _classes_for(self, s_mask):
        G = self.target.group
        return tuple(
            _local_class(self.source, self._emb, G.conj_mask(G.inv(g), s_mask) & self.h_mask)
            for g in double_cosets(self.target, s_mask, self.h_mask)
        )

    def _apply(self, v):
        out = []
        for cs in self.feed:
            acc = 1
            for c in cs:
                acc *= v[c]
            out.append(acc)
        return tuple(out)


# ══════════════════════════════════════════════════════════════════════════════
# INFLATION / DEFLATION / ISOMORPHISM
# ══════════════════════════════════════════════════════════════════════════════

class Inflation(BisetMap):
    """Inf^G_{G/N}: (Inf n)_S = n_{SN/N}."""

    kind = "Inf"

    def __init__(self, ring: BurnsideRing, n: int):
        quo, q_ring = ring.quotient_ring(n)
        super().__init__(q_ring, ring)
        L, LQ = ring.lattice, q_ring.lattice
        self.quotient = quo
        self.feed = tuple(
            LQ.class_of[LQ.id_of(quo.image_mask(L.mask(L.class_reps[c])))]
            for c in range(ring.rank)
        )

    def _apply(self, v):
        return tuple(v[c] for c in self.feed)


class Deflation(BisetMap):
    """Def^G_{G/N}: (Def n)_{X/N} = n_X."""

    kind = "Def"

    def __init__(self, ring: BurnsideRing, n: int):
        quo, q_ring = ring.quotient_ring(n)
        super().__init__(ring, q_ring)
        L, LQ = ring.lattice, q_ring.lattice
        self.quotient = quo
        self.feed = tuple(
            L.class_of[L.id_of(quo.preimage_mask(LQ.mask(LQ.class_reps[c])))]
            for c in range(q_ring.rank)
        )

    def _apply(self, v):
        return tuple(v[c] for c in self.feed)


class Isomorphism(BisetMap):
    """Iso(γ) for γ: source group → target group given on element ids."""

    kind = "Iso"

    def __init__(self, source: BurnsideRing, target: BurnsideRing, images):
        super().__init__(source, target)
        images = tuple(images)
        G, H = source.group, target.group
        if sorted(images) != list(range(H.order)) or len(images) != G.order:
            raise PreconditionError("Iso: images do not define a bijection")
        if any(images[G.mul(a, b)] != H.mul(images[a], images[b])
               for a in G.generators for b in range(G.order)):
            raise PreconditionError("Iso: images do not define a homomorphism")
        back = [0] * len(images)
        for x, y in enumerate(images):
            back[y] = x
        LS, LT = source.lattice, target.lattice
        self.feed = tuple(
            LS.class_of[LS.id_of(mask_of(back[y] for y in bits(LT.mask(LT.class_reps[c]))))]
            for c in range(target.rank)
        )

    def _apply(self, v):
        return tuple(v[c] for c in self.feed)


class Composite(BisetMap):
    """first, then second."""

    def __init__(self, first: BisetMap, second: BisetMap):
        if first.target.rank != second.source.rank:
            raise BisetPayloadError("composite: rings do not match")
        super().__init__(first.source, second.target)
        self.first, self.second = first, second
        self.kind = f"{second.kind}∘{first.kind}"

    def _apply(self, v):
        return self.second._apply(self.first._apply(v))


def _normal_in_normalizer(ring: BurnsideRing, h: int) -> tuple[BurnsideRing, int]:
    """(B(N_G(H)), id of H inside N_G(H))."""
    L = ring.lattice
    n = L.normalizer[h]
    n_ring = ring.sub_ring(n)
    if n == L.top:
        return n_ring, h
    _, emb = L.subgroup_group(n)
    pos = {x: i for i, x in enumerate(emb)}
    return n_ring, n_ring.lattice.id_of(mask_of(pos[x] for x in bits(L.mask(h))))


def indinf(ring: BurnsideRing, h: int) -> Composite:
    """Indinf^G_{N_G(H)/H} = Ind^G_{N_G(H)} ∘ Inf^{N_G(H)}_{N_G(H)/H}."""
    n_ring, local_h = _normal_in_normalizer(ring, h)
    return Composite(Inflation(n_ring, local_h), Induction(ring, ring.lattice.normalizer[h]))


def defres(ring: BurnsideRing, h: int) -> Composite:
    """Defres^{N_G(H)/H}_G = Def^{N_G(H)}_{N_G(H)/H} ∘ Res^G_{N_G(H)}."""
    n_ring, local_h = _normal_in_normalizer(ring, h)
    res = Restriction(ring, ring.lattice.normalizer[h])
    return Composite(res, Deflation(res.target, local_h))
