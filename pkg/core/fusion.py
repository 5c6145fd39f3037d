"""
fb/core/fusion.py
─────────────────
Fusion systems on a finite p-group S.
  • Frobenius systems F_S(G) and systems generated by maps between subgroups of S
  • closure as a groupoid: one transporter per F-class member plus the
    automorphism group of the class representative
  • F-conjugacy classes of subgroups and elements, strong closure
  • local data Aut_F(P) ⊇ Aut_S(P) ⊇ Inn(P), Out_F(P), essential subgroups

Maps are stored as image tuples aligned with the sorted member ids of
their source subgroup (ids are those of S as a group of its own).
"""

import logging
from dataclasses import dataclass
from functools import cached_property

from core.burnside import BurnsideRing
from core.config import ORDER_CAP
from core.errors import CapExceeded, PreconditionError, GroupError
from core.group import (
    FiniteGroup, GroupMap, Quotient, bits, mask_of, p_part, prime_factors,
    quotient, subgroup_group,
)
from core.lattice import SubgroupLattice, build_lattice, structure_name

log = logging.getLogger("fb.fusion")


class FusionSystem:
    """The fusion system on S generated by a restriction-closed set of isomorphisms."""

    def __init__(self, lattice: SubgroupLattice, p: int, edges, *, name: str = "F",
                 ambient: tuple[FiniteGroup, tuple[int, ...]] | None = None):
        S = lattice.group
        if S.order > 1 and prime_factors(S.order) != [p]:
            raise PreconditionError(f"{S.name} is not a {p}-group")
        self.lattice = lattice
        self.p = p
        self.name = name
        self.ambient = ambient
        self._essentials: tuple[int, ...] | None = None
        self._pos = [{x: i for i, x in enumerate(s.elements)} for s in lattice.subgroups]
        self._close(edges)

    # ── map arithmetic ────────────────────────────────────────────────────
    def _target(self, images) -> int:
        return self.lattice.id_of(mask_of(images))

    def _compose(self, second, first):
        """second ∘ first, where second's source is the image of first."""
        pos = self._pos[self._target(first)]
        return tuple(second[pos[y]] for y in first)

    def _inverse(self, src: int, images):
        tgt = self._target(images)
        pos = self._pos[tgt]
        out = [0] * len(images)
        for x, y in zip(self.lattice.subgroups[src].elements, images):
            out[pos[y]] = x
        return tuple(out)

    # ── closure ───────────────────────────────────────────────────────────
    def _close(self, edges):
        L = self.lattice
        n = len(L)
        adj: list[list] = [[] for _ in range(n)]
        edge_list = []
        for src, images in dict.fromkeys((s, tuple(m)) for s, m in edges):
            tgt = self._target(images)
            adj[src].append((tgt, images))
            adj[tgt].append((src, self._inverse(src, images)))
            edge_list.append((src, tgt, images))

        rep_of = [-1] * n
        transport: list[tuple[int, ...] | None] = [None] * n
        classes = []
        for s in L.subgroups:
            if rep_of[s.id] >= 0:
                continue
            rep_of[s.id] = s.id
            transport[s.id] = s.elements
            members = [s.id]
            for q in members:
                for r, phi in adj[q]:
                    if rep_of[r] < 0:
                        rep_of[r] = s.id
                        transport[r] = self._compose(phi, transport[q])
                        members.append(r)
            classes.append(tuple(sorted(members)))

        gens: dict[int, set] = {c[0]: set() for c in classes}
        for src, tgt, images in edge_list:
            rep = rep_of[src]
            there = self._compose(images, transport[src])
            loop = self._compose(self._inverse(rep, transport[tgt]), there)
            if loop != L.subgroups[rep].elements:
                gens[rep].add(loop)

        self.classes = tuple(classes)
        self.rep_of = tuple(rep_of)
        self.transport = tuple(transport)
        index = {c[0]: i for i, c in enumerate(classes)}
        self.class_of = tuple(index[rep_of[h]] for h in range(n))
        self.rep_aut = {}
        for rep, gs in gens.items():
            group = [L.subgroups[rep].elements]
            seen = set(group)
            for a in group:
                for g in gs:
                    c = self._compose(g, a)
                    if c not in seen:
                        seen.add(c)
                        group.append(c)
            self.rep_aut[rep] = tuple(sorted(group))
        log.info("fusion system %s on %s: %d F-classes (%d S-classes)",
                 self.name, L.group.name, len(classes), L.class_count)

    # ── morphisms ─────────────────────────────────────────────────────────
    @property
    def S(self) -> FiniteGroup:
        return self.lattice.group

    @cached_property
    def ring(self) -> BurnsideRing:
        """B(S) on the lattice this system lives on."""
        return BurnsideRing(self.lattice)

    def iso(self, P: int, Q: int) -> list[tuple[int, ...]]:
        """Iso_F(P, Q) as image tuples aligned with P's members."""
        if self.rep_of[P] != self.rep_of[Q]:
            return []
        rep = self.rep_of[P]
        back = self._inverse(rep, self.transport[P])
        tq = self.transport[Q]
        out = {self._compose(tq, self._compose(a, back)) for a in self.rep_aut[rep]}
        return sorted(out)

    def aut(self, P: int) -> list[tuple[int, ...]]:
        return self.iso(P, P)

    def aut_order(self, P: int) -> int:
        return len(self.rep_aut[self.rep_of[P]])

    def hom(self, P: int, Q: int) -> list[GroupMap]:
        """Hom_F(P, Q): isomorphisms onto F-conjugates of P inside Q."""
        L = self.lattice
        out = []
        for R in self.classes[self.class_of[P]]:
            if L.leq(R, Q):
                out.extend(GroupMap(P, Q, m) for m in self.iso(P, R))
        return out

    def aut_s(self, P: int) -> list[tuple[int, ...]]:
        """Aut_S(P) = {c_s|P : s ∈ N_S(P)}."""
        L, S = self.lattice, self.S
        elems = L.subgroups[P].elements
        n_mask = L.mask(L.normalizer[P])
        return sorted({tuple(S.conj(s, x) for x in elems) for s in bits(n_mask)})

    def inn(self, P: int) -> list[tuple[int, ...]]:
        S = self.S
        elems = self.lattice.subgroups[P].elements
        return sorted({tuple(S.conj(s, x) for x in elems) for s in elems})

    # ── classes ───────────────────────────────────────────────────────────
    def f_classes(self) -> tuple[tuple[int, ...], ...]:
        return self.classes

    def s_classes_in(self, f: int) -> tuple[int, ...]:
        """S-class indices making up F-class f, ascending."""
        return tuple(sorted({self.lattice.class_of[h] for h in self.classes[f]}))

    def f_class_of_s_class(self, c: int) -> int:
        return self.class_of[self.lattice.class_reps[c]]

    def element_classes(self) -> tuple[tuple[int, ...], ...]:
        """F-conjugacy classes of elements, from isomorphisms between cyclic subgroups."""
        L = self.lattice
        parent = list(range(self.S.order))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for z in L.subgroups:
            if not L.is_cyclic(z.id):
                continue
            rep = self.rep_of[z.id]
            base = L.subgroups[rep].elements
            for a in self.rep_aut[rep]:
                for x, y in zip(base, self._compose(self.transport[z.id], a)):
                    rx, ry = find(x), find(y)
                    if rx != ry:
                        parent[max(rx, ry)] = min(rx, ry)
        groups: dict[int, list[int]] = {}
        for x in range(self.S.order):
            groups.setdefault(find(x), []).append(x)
        return tuple(tuple(v) for v in sorted(groups.values()))

    def is_centric(self, P: int) -> bool:
        L = self.lattice
        return all(L.leq(L.centralizer[Q], Q) for Q in self.classes[self.class_of[P]])

    def fully_normalized(self, P: int) -> bool:
        L = self.lattice
        best = max(L.order(L.normalizer[Q]) for Q in self.classes[self.class_of[P]])
        return L.order(L.normalizer[P]) == best

    def fully_normalized_rep(self, f: int) -> int:
        """Member of F-class f with the largest normalizer in S, least id on ties."""
        L = self.lattice
        return min(self.classes[f], key=lambda q: (-L.order(L.normalizer[q]), q))

    def is_trivial(self) -> bool:
        """Whether F = F_S(S)."""
        L = self.lattice
        for c in self.classes:
            if len({L.class_of[h] for h in c}) != 1:
                return False
            if self.aut_order(c[0]) != len(self.aut_s(c[0])):
                return False
        return True

    def signature(self) -> tuple:
        """Canonical description of all morphism sets; equal iff same system on S."""
        return tuple(
            (self.rep_of[P], tuple(self.iso(self.rep_of[P], P)))
            for P in range(len(self.lattice))
        )

    def same_as(self, other: "FusionSystem") -> bool:
        return self.S.table == other.S.table and self.signature() == other.signature()


# ══════════════════════════════════════════════════════════════════════════════
# CONSTRUCTION
# ══════════════════════════════════════════════════════════════════════════════

def frobenius_fusion(G: FiniteGroup, s_mask: int, p: int, *,
                     s_lattice: SubgroupLattice | None = None,
                     name: str | None = None) -> FusionSystem:
    """F_S(G) for a Sylow p-subgroup S of G given as a mask."""
    order = s_mask.bit_count()
    if order != p_part(G.order, p) or not G.is_p_group(s_mask):
        raise PreconditionError(f"subgroup of order {order} is not a Sylow {p}-subgroup of {G.name}")
    S, emb = subgroup_group(G, s_mask, name or structure_name(G, s_mask))
    if s_lattice is not None and s_lattice.group.table != S.table:
        raise PreconditionError("supplied lattice does not belong to the Sylow subgroup")
    L = s_lattice or build_lattice(S)
    pos = {x: i for i, x in enumerate(emb)}
    edges = []
    for P in L.subgroups:
        members = [emb[x] for x in P.elements]
        seen = set()
        for g in range(G.order):
            images = [G.conj(g, x) for x in members]
            if all((s_mask >> y) & 1 for y in images):
                local = tuple(pos[y] for y in images)
                if local not in seen:
                    seen.add(local)
                    edges.append((P.id, local))
    return FusionSystem(L, p, edges, name=f"F_{L.group.name}({G.name})", ambient=(G, emb))


def _check_map(L: SubgroupLattice, P: int, images) -> tuple[int, ...]:
    """Images of the sorted members of P must define an injective homomorphism into S."""
    S = L.group
    elems = L.subgroups[P].elements
    images = tuple(int(v) for v in images)
    if (len(images) != len(elems) or len(set(images)) != len(images)
            or any(not 0 <= y < S.order for y in images)):
        raise GroupError(f"{S.name}: images of {L.labels[P]} are not an injective map into S")
    phi = dict(zip(elems, images))
    if any(phi[S.mul(a, b)] != S.mul(phi[a], phi[b]) for a in elems for b in elems):
        raise GroupError(f"{S.name}: images of {L.labels[P]} do not define a homomorphism")
    return images


def generated_fusion(L: SubgroupLattice, automorphisms=(), p: int | None = None, *,
                     maps=(), name: str | None = None) -> FusionSystem:
    """The fusion system generated by S-conjugation and the given maps.

    `automorphisms` are image lists of all of S; `maps` are (P, images)
    pairs with P a subgroup id and images aligned with P's sorted members.
    """
    S = L.group
    if p is None:
        primes = prime_factors(S.order)
        p = primes[0] if primes else 2
    gens = [(L.top, _check_map(L, L.top, a)) for a in automorphisms]
    gens += [(P, _check_map(L, P, images)) for P, images in maps]
    edges = []
    for P in L.subgroups:
        for s in range(S.order):
            edges.append((P.id, tuple(S.conj(s, x) for x in P.elements)))
    for P, images in gens:
        phi = dict(zip(L.subgroups[P].elements, images))
        for R in L.subs[P]:
            edges.append((R, tuple(phi[x] for x in L.subgroups[R].elements)))
    return FusionSystem(L, p, edges, name=name or f"F({S.name};{len(gens)})")


def trivial_fusion(L: SubgroupLattice, p: int) -> FusionSystem:
    """F_S(S)."""
    return generated_fusion(L, (), p, name=f"F_{L.group.name}({L.group.name})")


def is_strongly_closed(F: FusionSystem, q: int) -> bool:
    """No element of Q is F-conjugate to an element outside Q."""
    mask = F.lattice.mask(q)
    for cls in F.element_classes():
        inside = [(mask >> x) & 1 for x in cls]
        if any(inside) and not all(inside):
            return False
    return True


# ══════════════════════════════════════════════════════════════════════════════
# LOCAL DATA
# ══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class LocalData:
    """Automizers of P: Inn(P) ≤ Aut_S(P) ≤ Aut_F(P), and Out_F(P)."""
    subgroup: int
    maps: tuple[tuple[int, ...], ...]
    aut: FiniteGroup
    inner: frozenset[int]
    aut_s: frozenset[int]
    out: Quotient
    out_s: int
    fully_automized: bool

    @property
    def out_group(self) -> FiniteGroup:
        return self.out.group


def local_data(F: FusionSystem, P: int, *, cap: int = ORDER_CAP) -> LocalData:
    maps = tuple(F.aut(P))
    if len(maps) > cap:
        raise CapExceeded(f"Aut_F of subgroup {P}", len(maps), cap)
    index = {m: i for i, m in enumerate(maps)}
    table = tuple(tuple(index[F._compose(a, b)] for b in maps) for a in maps)
    label = F.lattice.labels[P]
    aut = FiniteGroup(f"Aut_F({label})", table)
    inner = frozenset(index[m] for m in F.inn(P))
    aut_s = frozenset(index[m] for m in F.aut_s(P))
    out = quotient(aut, mask_of(inner), f"Out_F({label})")
    out_s = out.image_mask(mask_of(aut_s))
    return LocalData(
        subgroup=P,
        maps=maps,
        aut=aut,
        inner=inner,
        aut_s=aut_s,
        out=out,
        out_s=out_s,
        fully_automized=len(aut_s) == p_part(len(maps), F.p),
    )


def has_strongly_p_embedded(X: FiniteGroup, p: int) -> bool:
    """Whether X has a proper subgroup H with p | |H| and p ∤ |H ∩ Hˣ| for x ∉ H."""
    if X.order % p:
        return False
    L = build_lattice(X)
    for s in L.subgroups:
        if s.id == L.top or s.order % p:
            continue
        if all((s.mask & X.conj_mask(x, s.mask)).bit_count() % p
               for x in range(X.order) if not (s.mask >> x) & 1):
            return True
    return False


def detect_essentials(F: FusionSystem) -> tuple[int, ...]:
    """All F-essential subgroups: proper, F-centric, Out_F(P) strongly p-embedded."""
    if F._essentials is not None:
        return F._essentials
    top = F.lattice.top
    out = []
    for c in F.classes:
        rep = c[0]
        if rep == top or not F.is_centric(rep):
            continue
        if has_strongly_p_embedded(local_data(F, rep).out_group, F.p):
            out.extend(c)
    F._essentials = tuple(sorted(out))
    log.info("%s: %d essential subgroups", F.name, len(out))
    return F._essentials
