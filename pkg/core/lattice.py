"""
fb/core/lattice.py
──────────────────
Subgroup lattice of a finite group.
  • enumeration by cyclic extension (joins with prime-power cyclic subgroups)
  • conjugacy classes, normalizers, centralizers, containment
  • maximal subgroups, Frattini subgroup, Sylow subgroups
  • Möbius function of the subgroup poset (memoized per lattice)
  • conjugation homomorphisms Hom_G(H, K)

Subgroup ids follow the total order (order, sorted member ids); the
representative of a conjugacy class is its least id.
"""

import logging
from collections import Counter
from dataclasses import dataclass

from core.config import ORDER_CAP
from core.errors import CapExceeded, PreconditionError
from core.group import (
    FiniteGroup, GroupMap, bits, subgroup_key, subgroup_group,
    prime_factors, p_part,
)

log = logging.getLogger("fb.lattice")


@dataclass(frozen=True)
class Subgroup:
    id: int
    mask: int
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)


# ══════════════════════════════════════════════════════════════════════════════
# NAMES
# ══════════════════════════════════════════════════════════════════════════════

# (order, element-order statistics) → name, for common nonabelian groups
_NONABELIAN_NAMES = {
    (6, ((1, 1), (2, 3), (3, 2))): "S3",
    (8, ((1, 1), (2, 5), (4, 2))): "D8",
    (8, ((1, 1), (2, 1), (4, 6))): "Q8",
    (10, ((1, 1), (2, 5), (5, 4))): "D10",
    (12, ((1, 1), (2, 3), (3, 8))): "A4",
    (12, ((1, 1), (2, 7), (3, 2), (6, 2))): "D12",
    (16, ((1, 1), (2, 9), (4, 2), (8, 4))): "D16",
    (16, ((1, 1), (2, 1), (4, 10), (8, 4))): "Q16",
    (16, ((1, 1), (2, 5), (4, 6), (8, 4))): "SD16",
    (20, ((1, 1), (2, 5), (4, 10), (5, 4))): "C5:C4",
    (21, ((1, 1), (3, 14), (7, 6))): "C7:C3",
    (24, ((1, 1), (2, 1), (3, 8), (4, 6), (6, 8))): "SL(2,3)",
    (24, ((1, 1), (2, 9), (3, 8), (4, 6))): "S4",
    (56, ((1, 1), (2, 7), (7, 48))): "C2^3:C7",
    (60, ((1, 1), (2, 15), (3, 20), (5, 24))): "A5",
    (120, ((1, 1), (2, 25), (3, 20), (4, 30), (5, 24), (6, 20))): "S5",
}


def abelian_invariants(orders: list[int]) -> list[int]:
    """Invariant factors (descending) of an abelian group from its element orders."""
    n = len(orders)
    per_prime = {}
    for p in prime_factors(n):
        exps, prev_logs, i = [], 0, 1
        counts = []
        while True:
            q = p ** i
            size = sum(1 for o in orders if q % o == 0)
            logs = 0
            while size > 1:
                size //= p
                logs += 1
            counts.append(logs - prev_logs)
            if logs == prev_logs:
                break
            prev_logs, i = logs, i + 1
        # counts[i-1] = number of cyclic factors of exponent ≥ i
        for e in range(len(counts) - 1, 0, -1):
            exps += [e] * (counts[e - 1] - counts[e])
        per_prime[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in per_prime.values()), default=0)
    factors = []
    for j in range(width):
        f = 1
        for p, exps in per_prime.items():
            if j < len(exps):
                f *= p ** exps[j]
        factors.append(f)
    return factors


def structure_name(G: FiniteGroup, mask: int) -> str:
    members = list(bits(mask))
    n = len(members)
    if n == 1:
        return "1"
    orders = [G.element_orders[x] for x in members]
    if max(orders) == n:
        return f"C{n}"
    gens = G.generators_of(mask)
    if all(G.mul(a, b) == G.mul(b, a) for a in gens for b in gens):
        inv = abelian_invariants(orders)
        if len(set(inv)) == 1 and prime_factors(inv[0]) == [inv[0]]:
            return "V4" if n == 4 else f"C{inv[0]}^{len(inv)}"
        return "x".join(f"C{f}" for f in inv)
    if mask == G.full_mask:
        return G.name
    stats = tuple(sorted(Counter(orders).items()))
    return _NONABELIAN_NAMES.get((n, stats), f"G{n}")


# ══════════════════════════════════════════════════════════════════════════════
# LATTICE
# ══════════════════════════════════════════════════════════════════════════════

class SubgroupLattice:
    """All subgroups of G with conjugacy, containment and local data."""

    def __init__(self, group: FiniteGroup, masks: list[int]):
        self.group = group
        masks = sorted(set(masks), key=subgroup_key)
        self.subgroups = tuple(Subgroup(i, m, tuple(bits(m))) for i, m in enumerate(masks))
        self._by_mask = {s.mask: s.id for s in self.subgroups}
        self._moebius_rows: dict[int, dict[int, int]] = {}
        self._sub_groups: dict[int, tuple] = {}
        self._sub_lattices: dict[int, "SubgroupLattice"] = {}
        self._containment()
        self._conjugacy()
        self._maximal()
        self._labels()

    # ── construction passes ───────────────────────────────────────────────
    def _containment(self):
        by_order: dict[int, list[Subgroup]] = {}
        for s in self.subgroups:
            by_order.setdefault(s.order, []).append(s)
        subs = [[] for _ in self.subgroups]
        supers = [[] for _ in self.subgroups]
        for b in self.subgroups:
            for order, group in by_order.items():
                if b.order % order:
                    continue
                for a in group:
                    if a.mask & b.mask == a.mask:
                        subs[b.id].append(a.id)
                        supers[a.id].append(b.id)
        self.subs = tuple(tuple(sorted(v)) for v in subs)
        self.supers = tuple(tuple(sorted(v)) for v in supers)
        self._super_sets = tuple(frozenset(v) for v in self.supers)

    def _conjugacy(self):
        G = self.group
        n = len(self.subgroups)
        class_of = [-1] * n
        conjugator = [0] * n
        classes = []
        for s in self.subgroups:
            if class_of[s.id] >= 0:
                continue
            c = len(classes)
            members = [s.id]
            class_of[s.id] = c
            for h in members:
                hm = self.subgroups[h].mask
                for g in G.generators:
                    k = self._by_mask[G.conj_mask(g, hm)]
                    if class_of[k] < 0:
                        class_of[k] = c
                        conjugator[k] = G.mul(g, conjugator[h])
                        members.append(k)
            classes.append(tuple(sorted(members)))
        self.class_of = tuple(class_of)
        self.classes = tuple(classes)
        self.conjugator = tuple(conjugator)
        self.class_reps = tuple(c[0] for c in classes)

        normalizer = [0] * n
        centralizer = [0] * n
        for members in classes:
            rep = self.subgroups[members[0]]
            n_mask = G.normalizer_mask(rep.mask)
            gens = G.generators_of(rep.mask)
            c_mask = 0
            for g in range(G.order):
                if all(G.mul(g, h) == G.mul(h, g) for h in gens):
                    c_mask |= 1 << g
            for h in members:
                x = conjugator[h]
                normalizer[h] = self._by_mask[G.conj_mask(x, n_mask)]
                centralizer[h] = self._by_mask[G.conj_mask(x, c_mask)]
        self.normalizer = tuple(normalizer)
        self.centralizer = tuple(centralizer)

    def _maximal(self):
        top = self.top
        self.maximal = tuple(
            s.id for s in self.subgroups
            if s.id != top and set(self.supers[s.id]) == {s.id, top}
        )
        mask = self.group.full_mask
        for m in self.maximal:
            mask &= self.subgroups[m].mask
        self.frattini = self._by_mask[mask]

    def _labels(self):
        counter: Counter = Counter()
        labels = []
        for s in self.subgroups:
            name = structure_name(self.group, s.mask)
            counter[name] += 1
            labels.append(f"{name}#{counter[name]}")
        self.labels = tuple(labels)
        self._by_label = {lab: i for i, lab in enumerate(labels)}

    # ── lookups ───────────────────────────────────────────────────────────
    def __len__(self) -> int:
        return len(self.subgroups)

    @property
    def top(self) -> int:
        return len(self.subgroups) - 1

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def id_of(self, mask: int) -> int:
        try:
            return self._by_mask[mask]
        except KeyError:
            raise PreconditionError(f"{self.group.name}: mask is not a subgroup") from None

    def by_label(self, label: str) -> int:
        if label not in self._by_label:
            raise KeyError(label)
        return self._by_label[label]

    def mask(self, h: int) -> int:
        return self.subgroups[h].mask

    def order(self, h: int) -> int:
        return self.subgroups[h].order

    def leq(self, h: int, k: int) -> bool:
        return k in self._super_sets[h]

    def class_size(self, c: int) -> int:
        return len(self.classes[c])

    def class_label(self, c: int) -> str:
        return self.labels[self.class_reps[c]]

    def rep_of(self, h: int) -> int:
        return self.class_reps[self.class_of[h]]

    def is_normal(self, h: int) -> bool:
        return len(self.classes[self.class_of[h]]) == 1

    def is_cyclic(self, h: int) -> bool:
        s = self.subgroups[h]
        return any(self.group.element_orders[x] == s.order for x in s.elements)

    def sylow(self, p: int) -> tuple[int, ...]:
        target = p_part(self.group.order, p)
        return tuple(s.id for s in self.subgroups if s.order == target)

    def conj_id(self, g: int, h: int) -> int:
        return self._by_mask[self.group.conj_mask(g, self.subgroups[h].mask)]

    def join(self, h: int, k: int) -> int:
        G = self.group
        gens = G.generators_of(self.mask(h)) + G.generators_of(self.mask(k))
        return self._by_mask[G.closure_mask(gens)]

    def meet(self, h: int, k: int) -> int:
        return self._by_mask[self.mask(h) & self.mask(k)]

    # ── derived objects ───────────────────────────────────────────────────
    def subgroup_group(self, h: int):
        """(FiniteGroup, embedding) for subgroup h, cached."""
        if h not in self._sub_groups:
            name = self.group.name if h == self.top else self.labels[h].rsplit("#", 1)[0]
            self._sub_groups[h] = subgroup_group(self.group, self.mask(h), name)
        return self._sub_groups[h]

    def sublattice(self, h: int) -> "SubgroupLattice":
        """Subgroup lattice of h as a group in its own right (cached)."""
        if h == self.top:
            return self
        if h not in self._sub_lattices:
            self._sub_lattices[h] = build_lattice(self.subgroup_group(h)[0])
        return self._sub_lattices[h]

    def moebius(self, h: int, i: int) -> int:
        """μ(H, I) on the subgroup poset; requires H ≤ I."""
        if not self.leq(h, i):
            raise PreconditionError(f"moebius: subgroup {h} is not contained in {i}")
        return self._moebius_row(h)[i]

    def _moebius_row(self, h: int) -> dict[int, int]:
        row = self._moebius_rows.get(h)
        if row is None:
            row = {h: 1}
            above = self._super_sets[h]
            for j in self.supers[h]:
                if j == h:
                    continue
                row[j] = -sum(row[k] for k in self.subs[j] if k != j and k in above)
            self._moebius_rows[h] = row
        return row


def build_lattice(G: FiniteGroup, *, cap: int = ORDER_CAP) -> SubgroupLattice:
    """Enumerate every subgroup of G by cyclic extension.

    Every subgroup is generated by its elements of prime-power order, so
    joining with prime-power cyclic subgroups from the trivial group
    reaches all of them.  The join is H·Z when Z normalizes H and the
    generated closure otherwise.
    """
    if G.order > cap:
        raise CapExceeded(f"lattice of {G.name}", G.order, cap)
    t = G.table
    orders = G.element_orders
    cyclic: dict[int, int] = {}
    for x in range(1, G.order):
        if len(prime_factors(orders[x])) == 1:
            m = G.closure_mask([x])
            cyclic.setdefault(m, x)
    zs = list(cyclic.items())

    found: dict[int, tuple[int, ...]] = {1: ()}
    queue = [1]
    for h in queue:
        gens = found[h]
        for z_mask, x in zs:
            if z_mask & ~h == 0:
                continue
            if G.conj_mask(x, h) == h:
                k = 0
                for z in bits(z_mask):
                    for a in bits(h):
                        k |= 1 << t[a][z]
            else:
                k = G.closure_mask(gens + (x,))
            if k not in found:
                found[k] = gens + (x,)
                queue.append(k)
    lattice = SubgroupLattice(G, list(found))
    log.info("lattice %s: %d subgroups in %d classes",
             G.name, len(lattice), lattice.class_count)
    return lattice


# ══════════════════════════════════════════════════════════════════════════════
# CONJUGATION MAPS & SYLOW
# ══════════════════════════════════════════════════════════════════════════════

def hom_by_conjugation(L: SubgroupLattice, h: int, k: int) -> list[GroupMap]:
    """Distinct maps c_g|H : H → K over g ∈ G with gHg⁻¹ ≤ K."""
    G = L.group
    src, dst = L.subgroups[h], L.mask(k)
    seen: dict[tuple[int, ...], None] = {}
    for g in range(G.order):
        if G.conj_mask(g, src.mask) & ~dst:
            continue
        seen.setdefault(tuple(G.conj(g, x) for x in src.elements))
    return [GroupMap(h, k, images) for images in seen]


def sylow_subgroup(G: FiniteGroup, p: int) -> int:
    """Mask of one Sylow p-subgroup, grown inside successive normalizers."""
    target = p_part(G.order, p)
    P = 1
    while P.bit_count() < target:
        N = G.normalizer_mask(P)
        for x in bits(N & ~P):
            o = G.element_orders[x]
            if p_part(o, p) == o:
                P = G.closure_mask(G.generators_of(P) + (x,))
                break
        else:
            raise PreconditionError(f"{G.name}: no p-element extends the p-subgroup")
    return P


def canonical_sylow(G: FiniteGroup, p: int) -> int:
    """The least (in subgroup order) Sylow p-subgroup of G."""
    start = sylow_subgroup(G, p)
    orbit = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in G.generators:
                c = G.conj_mask(g, m)
                if c not in orbit:
                    orbit.add(c)
                    nxt.append(c)
        frontier = nxt
    return min(orbit, key=subgroup_key)
