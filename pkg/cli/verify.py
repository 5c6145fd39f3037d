"""
fb/cli/verify.py
────────────────
Acceptance suite behind `fb verify`.

  paper-examples : worked examples and structural equalities (12 criteria)
  properties     : seeded property checks and module invariants
  all            : both

Every criterion either returns a one-line detail or raises; the report
lists criteria in index order with pass/fail and wall time.
"""

import logging
import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from cli.render import Report
from core.biset import double_cosets
from core.burnside import (
    BurnsideElement, BurnsideRing, MarksTable, UnitGroup, maximal_unit_marks, signs_to_bits,
)
from core.catalog import CATALOG_NAMES, FUSION_CATALOG, catalog
from core.config import DEFAULT_SEED, RANDOM_MARK_VECTORS, RANDOM_STABLE_SAMPLES
from core.errors import BurnsideError
from core.fusion import FusionSystem, detect_essentials, local_data, trivial_fusion
from core.group import automorphism_group, bits, mask_of
from core.lattice import build_lattice
from core.stable import (
    abelian_unit_basis, classify_maximals, is_stable_marks, is_stable_marks_local,
    maximal_unit, out_action, out_fixed_units, reeh_basis, stable_lattice, stable_units,
    trace,
)
from core.transfer import (
    FrobeniusContext, NonRealizable, bouc_check, genuine_witness, restriction_image,
    star_product, transfer,
)
from core.zlattice import same_lattice

log = logging.getLogger("fb.verify")

SUITES = ("paper-examples", "properties", "all")
FAULTS = ("marks-table",)


class CriterionFailed(BurnsideError):
    """A verify criterion found a wrong value."""


def expect(condition: bool, message: str):
    if not condition:
        raise CriterionFailed(message)


def _tampered(ring: BurnsideRing) -> BurnsideRing:
    rows = [list(r) for r in ring.table.rows]
    rows[0][0] += 1
    return BurnsideRing(ring.lattice, MarksTable(tuple(map(tuple, rows)), ring.table.labels))


class Suite:
    """Shared, cached objects for one verify run."""

    def __init__(self, seed: int = DEFAULT_SEED, fault: str | None = None):
        self.seed = seed
        self.fault = fault
        self._contexts: dict[tuple[str, int], FrobeniusContext] = {}
        self._rings: dict[str, BurnsideRing] = {}

    def rng(self, salt: int = 0) -> random.Random:
        return random.Random(self.seed * 1009 + salt)

    def context(self, name: str, p: int) -> FrobeniusContext:
        key = (name, p)
        if key not in self._contexts:
            ctx = FrobeniusContext(catalog(name), p)
            if self.fault == "marks-table":
                ctx.fusion.ring = _tampered(ctx.fusion.ring)
            self._contexts[key] = ctx
        return self._contexts[key]

    def fusion(self, name: str, p: int) -> FusionSystem:
        return self.context(name, p).fusion

    def ring(self, name: str) -> BurnsideRing:
        if name not in self._rings:
            ring = BurnsideRing(build_lattice(catalog(name)))
            self._rings[name] = _tampered(ring) if self.fault == "marks-table" else ring
        return self._rings[name]

    def catalog_systems(self):
        for name, p in FUSION_CATALOG:
            yield name, p, self.fusion(name, p)


@dataclass(frozen=True)
class Criterion:
    index: int
    title: str
    suite: str
    check: Callable[[Suite], str]


# ══════════════════════════════════════════════════════════════════════════════
# WORKED EXAMPLES
# ══════════════════════════════════════════════════════════════════════════════

def _mark_values(marks, coords):
    n = len(marks)
    return [sum(coords[i] * marks[i][q] for i in range(n)) for q in range(n)]


def check_reeh_tables(suite: Suite) -> str:
    a = reeh_basis(suite.fusion("A4", 2))
    b = reeh_basis(suite.fusion("C4", 2))
    expect(a.marks == ((4, 0, 0), (6, 2, 0), (1, 1, 1)), f"A4/V4 Reeh marks {a.marks}")
    expect(b.marks == ((4, 0, 0), (2, 2, 0), (1, 1, 1)), f"C4 Reeh marks {b.marks}")
    # α_1 ↦ β_1, α_M ↦ β_N + β_1, α_S ↦ β_T
    phi = ((1, 0, 0), (1, 1, 0), (0, 0, 1))

    def image(coords):
        return tuple(sum(coords[i] * phi[i][j] for i in range(3)) for j in range(3))

    unit = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    checked = 0
    for i in range(3):
        for j in range(i, 3):
            prod_a = [x * y for x, y in zip(a.marks[i], a.marks[j])]
            lhs = image(a.coordinates(prod_a))
            mi = _mark_values(b.marks, image(unit[i]))
            mj = _mark_values(b.marks, image(unit[j]))
            rhs = b.coordinates([x * y for x, y in zip(mi, mj)])
            expect(lhs == rhs, f"product α{i}·α{j}: {lhs} vs {rhs}")
            checked += 1
    return f"marks tables match, {checked} basis products preserved"


def check_odd_dihedral(suite: Suite) -> str:
    for name, p in (("D6", 3), ("D10", 5)):
        F = suite.fusion(name, p)
        full = [F.ring.transitive(c).coeffs for c in range(F.ring.rank)]
        expect(same_lattice(stable_lattice(F).vectors(), full), f"B(F) ≠ B(C{p}) for {name}")
        top = F.lattice.top
        trivial = trivial_fusion(F.lattice, p)
        expect(trivial.aut_order(top) == 1, f"|Aut_F'(S)| = {trivial.aut_order(top)}")
        expect(F.aut_order(top) == 2, f"|Aut_F(S)| = {F.aut_order(top)} for {name}")
    return "B(F) = B(Cp) for p = 3, 5 with |Aut_F(S)| = 2"


def check_rank_three(suite: Suite) -> str:
    f1 = suite.fusion("C2^3:C7", 2)
    f2 = suite.fusion("C2^3:F21", 2)
    expect(len(f1.classes) == 4 and len(f2.classes) == 4,
           f"F-classes {len(f1.classes)}, {len(f2.classes)}")
    expect(stable_lattice(f1).same_as(stable_lattice(f2)), "stable lattices differ")
    top = f1.lattice.top
    expect((f1.aut_order(top), f2.aut_order(top)) == (7, 21),
           f"|Aut(S)| = {f1.aut_order(top)}, {f2.aut_order(top)}")
    return "4 F-classes each, equal B(F), |Aut_F(S)| = 7, 21"


def check_rank_four(suite: Suite) -> str:
    f1 = suite.fusion("C2^4:C7", 2)
    f2 = suite.fusion("C2^4:F21", 2)
    expect((len(f1.classes), len(f2.classes)) == (13, 11),
           f"F-classes {len(f1.classes)}, {len(f2.classes)}")
    for F in (f1, f2):
        n_max = len({F.class_of[m] for m in F.lattice.maximal})
        expect(n_max == 3, f"{F.name}: {n_max} classes of maximals")
    b1, b2 = stable_lattice(f1), stable_lattice(f2)
    expect(b1.includes(b2) and not b1.same_as(b2), "B(F2) is not a proper sublattice of B(F1)")
    r1, r2 = stable_units(f1).rank, stable_units(f2).rank
    expect((r1, r2) == (4, 4), f"unit ranks {r1}, {r2}")
    return "13 vs 11 F-classes, B(F2) ⊊ B(F1), unit ranks 4 and 4"


def check_restriction_image(suite: Suite) -> str:
    pairs = (("A4", 2), ("S4", 2), ("C2^3:C7", 2), ("S5", 2))
    for name, p in pairs:
        restriction_image(suite.context(name, p))
    return f"Res(B(G)) = B(F) for {len(pairs)} groups"


def check_non_realizable(suite: Suite) -> str:
    ctx = suite.context("S5", 2)
    F = ctx.fusion
    b = F.ring.transitive(0)
    expect(is_stable_marks(F, F.ring.mark(b)), "[D8/1] is not stable")
    t = transfer(ctx, b)
    expect(ctx.restriction(t) == b, "Res(transfer([D8/1])) ≠ [D8/1]")
    found = genuine_witness(ctx, b)
    expect(isinstance(found, NonRealizable), f"unexpected witness {found}")
    return f"[D8/1] virtual only; search exhausted after {found.nodes} nodes"


def check_stable_units(suite: Suite) -> str:
    count = 0
    for _, _, F in suite.catalog_systems():
        stable_units(F, cross_check=True)
        count += 1
    return f"kernel intersection = fixed units / swept units on {count} systems"


def check_trace(suite: Suite) -> str:
    checked = 0
    for _, _, F in suite.catalog_systems():
        for P in (F.lattice.top,) + detect_essentials(F):
            if not local_data(F, P).fully_automized:
                continue
            action = out_action(F, P)
            delta = action.out_s
            fixed = out_fixed_units(action)
            odd = (action.full.bit_count() // delta.bit_count()) % 2 == 1
            for u in fixed.basis:
                # a fixed unit traces to u to the power [Γ:Δ]
                want = u.signs if odd else (1,) * len(u.signs)
                expect(trace(action, u, delta).signs == want,
                       f"{F.name}: trace of a fixed unit of {F.lattice.labels[P]} is not u^[Γ:Δ]")
            if odd:
                source = out_fixed_units(action, delta)
                images = [signs_to_bits(trace(action, u, delta).signs) for u in source.basis]
                image = UnitGroup(action.ring, np.array(images, dtype=np.bool_)
                                  .reshape(-1, action.ring.rank))
                expect(image.same_as(fixed), f"{F.name}: trace image ≠ fixed units")
            checked += 1
    return f"trace is a retraction onto fixed units at {checked} subgroups"


def check_maximal_units(suite: Suite) -> str:
    rng = suite.rng(10)
    groups = [n for n in CATALOG_NAMES
              if (o := catalog(n).order) <= 16 and o & (o - 1) == 0 and o > 1]
    for name in groups:
        ring = suite.ring(name)
        L = ring.lattice
        S = L.group
        for m in L.maximal:
            v = maximal_unit(ring, m)
            expected = tuple(
                (-1) ** (L.order(L.join(L.class_reps[c], m)) // L.order(m))
                for c in range(L.class_count))
            expect(v.signs == expected, f"{name}: marks of v_{L.labels[m]}")
        maps = automorphism_group(S).maps
        if len(maps) > 500:
            maps = rng.sample(list(maps), 500)
        for a in maps:
            moved = {}
            for c in range(L.class_count):
                h = L.class_reps[c]
                moved[c] = L.class_of[L.id_of(mask_of(a[x] for x in L.subgroups[h].elements))]
            for m in L.maximal:
                am = L.id_of(mask_of(a[x] for x in bits(L.mask(m))))
                v = maximal_unit_marks(L, m)
                acted = [0] * len(v)
                for c, s in enumerate(v):
                    acted[moved[c]] = s
                expect(tuple(acted) == maximal_unit_marks(L, am),
                       f"{name}: α·v_M ≠ v_α(M)")
    systems = 0
    for _, p, F in suite.catalog_systems():
        if p == 2:
            classify_maximals(F)
            systems += 1
    return f"{len(groups)} groups, stability ⇔ strong closure on {systems} systems"


def check_abelian_units(suite: Suite) -> str:
    checked = 0
    for name, p, F in suite.catalog_systems():
        if not F.S.is_abelian:
            continue
        units = stable_units(F)
        s = len({F.class_of[m] for m in F.lattice.maximal})
        expected = s + 1 if p == 2 else 1
        expect(units.rank == expected, f"{name}: unit rank {units.rank} ≠ {expected}")
        expect(abelian_unit_basis(F).same_as(units), f"{name}: abelian basis differs")
        ambient = F.ring.unit_group()
        if p == 2:
            expect(units.same_as(ambient) == F.is_trivial(),
                   f"{name}: B(F)^x = B(S)^x does not match triviality")
        if F.ring.rank <= 12:
            expect(F.ring.unit_group("exhaustive").same_as(ambient),
                   f"{name}: exhaustive units differ")
        checked += 1
    return f"dim B(F)^x = s + 1 on {checked} abelian systems"


def check_normal_sylow(suite: Suite) -> str:
    ranks = []
    for name in ("C2^3:C7", "C6", "C2^2:C3"):
        r = bouc_check(suite.context(name, 2))
        expect(r.rank_g == r.rank_fixed, f"{name}: ranks {r.rank_g} vs {r.rank_fixed}")
        ranks.append(f"{name}:{r.rank_g}")
    return "Res/Ten mutually inverse (" + " ".join(ranks) + ")"


def check_odd_order(suite: Suite) -> str:
    for name in ("C3", "C5", "C7", "C7:C3"):
        units = suite.ring(name).unit_group()
        expect(units.rank == 1 and units.contains_minus_one, f"{name}: unit rank {units.rank}")
    return "B(G)^x = {±1} for 4 odd-order groups"


# ══════════════════════════════════════════════════════════════════════════════
# PROPERTIES
# ══════════════════════════════════════════════════════════════════════════════

def check_local_stability(suite: Suite) -> str:
    rng = suite.rng(7)
    half = RANDOM_STABLE_SAMPLES // 2
    total = 0
    for name, p, F in suite.catalog_systems():
        ring = F.ring
        reeh = reeh_basis(F)
        vectors = [ring.mark(b) for b in reeh.basis]
        if p == 2:
            vectors += [maximal_unit(ring, m).signs for m in F.lattice.maximal]
        for _ in range(half):
            coeffs = tuple(rng.randint(-2, 2) for _ in range(ring.rank))
            vectors.append(ring.mark(BurnsideElement(coeffs)))
        for _ in range(half):
            acc = ring.zero()
            for b in reeh.basis:
                acc = acc + b.scale(rng.randint(-2, 2))
            vectors.append(ring.mark(acc))
        for v in vectors:
            expect(is_stable_marks(F, v) == is_stable_marks_local(F, v),
                   f"{name}: stability modes disagree")
        total += len(vectors)
    return f"all-subgroups and essentials-only stability agree on {total} elements"


def check_congruences(suite: Suite) -> str:
    rng = suite.rng(14)
    groups = [n for n in CATALOG_NAMES if catalog(n).order <= 24]
    for name in groups:
        ring = suite.ring(name)
        for _ in range(RANDOM_MARK_VECTORS):
            b = BurnsideElement(tuple(rng.randint(-3, 3) for _ in range(ring.rank)))
            v = list(ring.mark(b))
            if rng.random() < 0.5:
                v[rng.randrange(ring.rank)] += rng.randint(-2, 2)
            expect(ring.congruence_member(v) == ring.is_integral(v),
                   f"{name}: congruences disagree with integrality at {v}")
    signs = 0
    for name in ("V4", "C4", "C2^3", "D8", "Q8"):
        ring = suite.ring(name)
        n = ring.rank
        for code in range(1 << n):
            v = [-1 if (code >> k) & 1 else 1 for k in range(n)]
            expect(ring.congruence_member(v) == ring.is_integral(v),
                   f"{name}: congruences disagree on sign vector {v}")
            signs += 1
    return f"{len(groups)} groups × {RANDOM_MARK_VECTORS} vectors, {signs} sign vectors"


def check_mackey(suite: Suite) -> str:
    for name in ("S3", "D8", "A4", "S4"):
        ring = suite.ring(name)
        L = ring.lattice
        G = L.group
        for c1 in range(ring.rank):
            H = L.mask(L.class_reps[c1])
            for c2 in range(c1, ring.rank):
                K = L.mask(L.class_reps[c2])
                coeffs = [0] * ring.rank
                for g in double_cosets(ring, H, K):
                    coeffs[L.class_of[L.id_of(H & G.conj_mask(g, K))]] += 1
                product = ring.mul(ring.transitive(c1), ring.transitive(c2))
                expect(product.coeffs == tuple(coeffs),
                       f"{name}: [G/{L.class_label(c1)}]·[G/{L.class_label(c2)}]")
    return "ring product matches the double-coset formula"


def check_moebius(suite: Suite) -> str:
    pairs = 0
    for name in ("A4", "D8", "S4", "Q8"):
        L = build_lattice(catalog(name))
        for h in range(len(L)):
            for i in L.supers[h]:
                total = sum(L.moebius(h, k) for k in L.supers[h] if L.leq(k, i))
                expect(total == int(h == i), f"{name}: Möbius sum at ({h},{i}) = {total}")
                pairs += 1
    return f"Σ μ = δ on {pairs} intervals"


def check_automorphisms(suite: Suite) -> str:
    expected = {"V4": 6, "C4": 2, "D8": 8, "Q8": 24, "C2^3": 168, "C4xC2": 8}
    for name, order in expected.items():
        A = automorphism_group(catalog(name))
        expect(A.order == order, f"|Aut({name})| = {A.order}")
        for i in range(A.order):
            A.inverse(i)
            for j in range(A.order):
                A.compose(i, j)
    return "automorphism groups closed, orders as expected"


def check_closure(suite: Suite) -> str:
    checked = 0
    for name, p, F in suite.catalog_systems():
        if F.S.order > 8:
            continue
        edges = [(P, m) for P in range(len(F.lattice))
                 for Q in F.classes[F.class_of[P]] for m in F.iso(P, Q)]
        again = FusionSystem(F.lattice, p, edges, name=F.name)
        expect(again.same_as(F), f"{name}: closing the closure changed it")
        checked += 1
    return f"closure idempotent on {checked} systems"


def check_trace_linearity(suite: Suite) -> str:
    checked = 0
    for name, _, F in suite.catalog_systems():
        action = out_action(F, F.lattice.top)
        delta = action.out_s
        basis = out_fixed_units(action, delta).basis
        for u in basis:
            tu = trace(action, u, delta).signs
            for v in basis:
                uv = tuple(x * y for x, y in zip(u.signs, v.signs))
                tv = trace(action, v, delta).signs
                expect(trace(action, uv, delta).signs == tuple(x * y for x, y in zip(tu, tv)),
                       f"{name}: trace is not multiplicative")
                checked += 1
    return f"trace multiplicative on {checked} pairs"


def check_transfer_ring(suite: Suite) -> str:
    rng = suite.rng(20)
    for name in ("A4", "S4"):
        ctx = suite.context(name, 2)
        F = ctx.fusion
        reeh = reeh_basis(F)
        images = [transfer(ctx, b) for b in reeh.basis]
        expect(len(set(images)) == len(images), f"{name}: transfer not injective on Reeh basis")
        res = ctx.restriction
        for b, tb in zip(reeh.basis, images):
            expect(res(tb) == b, f"{name}: Res ∘ transfer ≠ id")
            for c, tc in zip(reeh.basis, images):
                bc = F.ring.mul(b, c)
                expect(transfer(ctx, bc) == ctx.ring.mul(tb, tc), f"{name}: transfer not multiplicative")
        for _ in range(10):
            a = BurnsideElement(tuple(rng.randint(-2, 2) for _ in range(ctx.ring.rank)))
            b = reeh.basis[rng.randrange(reeh.rank)]
            ab = star_product(ctx, a, b)
            expect(res(ab) == F.ring.mul(res(a), b), f"{name}: Res(a∗b) ≠ Res(a)·b")
    return "transfer injective, multiplicative and split by restriction"


def check_determinism(suite: Suite) -> str:
    from cli.app import execute

    argv = ["reeh-basis", "--fusion", "frobenius:S4:2"]
    first, second = execute(argv), execute(argv)
    expect(first == second, "two renderings of the same report differ")
    return first.strip().splitlines()[-1]


CRITERIA = (
    Criterion(1, "Reeh marks tables and ring isomorphism", "paper-examples", check_reeh_tables),
    Criterion(2, "odd dihedral: B(F) = B(Cp)", "paper-examples", check_odd_dihedral),
    Criterion(3, "rank-3 elementary abelian: equal B(F)", "paper-examples", check_rank_three),
    Criterion(4, "rank-4 elementary abelian: B(F2) ⊊ B(F1)", "paper-examples", check_rank_four),
    Criterion(5, "restriction image = B(F)", "paper-examples", check_restriction_image),
    Criterion(6, "[D8/1] stable but not realizable in S5", "paper-examples", check_non_realizable),
    Criterion(7, "stability: all subgroups vs essentials", "properties", check_local_stability),
    Criterion(8, "stable units: kernels vs fixed units vs sweep", "paper-examples", check_stable_units),
    Criterion(9, "trace retracts onto fixed units", "paper-examples", check_trace),
    Criterion(10, "maximal units and strong closure", "paper-examples", check_maximal_units),
    Criterion(11, "abelian units: dim = s + 1", "paper-examples", check_abelian_units),
    Criterion(12, "normal Sylow: Res and Ten inverse", "paper-examples", check_normal_sylow),
    Criterion(13, "odd order: units {±1}", "paper-examples", check_odd_order),
    Criterion(14, "congruences ⇔ integrality", "properties", check_congruences),
    Criterion(15, "ring product vs double cosets", "properties", check_mackey),
    Criterion(16, "Möbius identity", "properties", check_moebius),
    Criterion(17, "automorphism group closure", "properties", check_automorphisms),
    Criterion(18, "fusion closure idempotent", "properties", check_closure),
    Criterion(19, "trace multiplicative", "properties", check_trace_linearity),
    Criterion(20, "transfer is a split ring injection", "properties", check_transfer_ring),
    Criterion(21, "report determinism", "properties", check_determinism),
)


def run_suite(suite_name: str = "all", *, seed: int = DEFAULT_SEED,
              fault: str | None = None) -> Report:
    """Run the criteria of a suite in index order."""
    suite = Suite(seed, fault)
    report = Report("verify", {"suite": suite_name, "seed": str(seed)})
    if fault:
        report.inputs["inject-fault"] = fault
    table = report.table("criteria", ("index", "criterion", "status", "seconds", "detail"))
    failed = []
    for c in CRITERIA:
        if suite_name != "all" and c.suite != suite_name:
            continue
        start = time.perf_counter()
        try:
            detail = c.check(suite)
            status = "PASS"
        except BurnsideError as exc:
            detail, status = str(exc), "FAIL"
            failed.append(c.index)
        except Exception as exc:
            log.error("criterion %d crashed", c.index, exc_info=True)
            detail, status = f"{type(exc).__name__}: {exc}", "FAIL"
            failed.append(c.index)
        elapsed = time.perf_counter() - start
        log.info("criterion %d %s in %.2fs: %s", c.index, status, elapsed, detail)
        table.rows.append((c.index, c.title, status, f"{elapsed:.2f}", detail))
    report.flags["criteria"] = len(table.rows)
    report.flags["failed"] = ",".join(map(str, failed)) or "none"
    report.ok = not failed
    return report
