import pytest
from hypothesis import given, settings, strategies as st

from core.burnside import BurnsideElement, maximal_unit_marks
from core.errors import ConsistencyError, PreconditionError
from core.fusion import trivial_fusion
from core.stable import (
    abelian_unit_basis, ambient_check, classify_maximals, f_class_marks, is_stable,
    is_stable_marks, maximal_unit, out_action, out_fixed_units, reeh_basis, stable_lattice,
    stable_units, trace,
)

from conftest import fusion_of, lattice_of

SMALL_SYSTEMS = [("A4", 2), ("S4", 2), ("SL(2,3)", 2), ("C2^3:C7", 2), ("D6", 3), ("D10", 5)]


def test_reeh_marks_of_a4():
    basis = reeh_basis(fusion_of("A4", 2))
    assert basis.marks == ((4, 0, 0), (6, 2, 0), (1, 1, 1))
    assert basis.kind == "reeh"


def test_reeh_marks_of_c4():
    F = trivial_fusion(lattice_of("C4"), 2)
    assert reeh_basis(F).marks == ((4, 0, 0), (2, 2, 0), (1, 1, 1))


@pytest.mark.parametrize("name, p", SMALL_SYSTEMS)
def test_reeh_basis_spans_stable_lattice(name, p):
    F = fusion_of(name, p)
    hnf = stable_lattice(F)
    reeh = reeh_basis(F, cross_check=True)
    assert hnf.rank == reeh.rank == len(F.classes)
    assert hnf.same_as(reeh)
    assert hnf.canonical() == reeh.canonical()
    for b in reeh.basis:
        assert is_stable(F, b)
        assert hnf.contains(b)


def test_reeh_marks_are_triangular():
    basis = reeh_basis(fusion_of("S4", 2))
    R = basis.marks
    for i in range(basis.rank):
        assert R[i][i] > 0
        assert all(R[i][j] == 0 for j in range(i + 1, basis.rank))


def test_coordinates_over_reeh_basis():
    basis = reeh_basis(fusion_of("S4", 2))
    for i, row in enumerate(basis.marks):
        expected = tuple(int(i == j) for j in range(basis.rank))
        assert basis.coordinates(row) == expected
    with pytest.raises(ConsistencyError):
        basis.coordinates((1,) + (0,) * (basis.rank - 1))
    with pytest.raises(PreconditionError):
        stable_lattice(fusion_of("S4", 2)).coordinates(basis.marks[0])


def test_stable_lattice_inside_ambient():
    F = fusion_of("A4", 2)
    inner = stable_lattice(F)
    outer = stable_lattice(trivial_fusion(F.lattice, 2))
    assert outer.includes(inner)
    assert not inner.includes(outer)
    assert outer.rank == F.lattice.class_count


def test_transitive_set_not_stable():
    F = fusion_of("A4", 2)
    ring = F.ring
    c2 = F.lattice.by_label("C2#1")
    b = ring.transitive(F.lattice.class_of[c2])
    assert not is_stable(F, b)
    assert not stable_lattice(F).contains(b)
    with pytest.raises(PreconditionError):
        is_stable(F, b, mode="sometimes")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=-3, max_value=3), min_size=8, max_size=8))
def test_local_stability_matches_global(coeffs):
    F = fusion_of("S4", 2)
    b = BurnsideElement(tuple(coeffs))
    assert is_stable(F, b) == is_stable(F, b, mode="essentials")


def test_f_class_marks():
    F = fusion_of("A4", 2)
    v = F.ring.mark(F.ring.one())
    assert f_class_marks(F, v) == (1, 1, 1)


def test_stable_units_of_a4():
    F = fusion_of("A4", 2)
    units = stable_units(F)
    assert units.rank == 2
    assert units.contains_minus_one
    assert units.issubset(F.ring.unit_group())
    for signs in units.members():
        assert is_stable_marks(F, signs)
    assert units.same_as(abelian_unit_basis(F))


@pytest.mark.parametrize("name, p", SMALL_SYSTEMS)
def test_stable_units_are_stable(name, p):
    F = fusion_of(name, p)
    units = stable_units(F, cross_check=True)
    for u in units.basis:
        assert is_stable_marks(F, u.signs)
        assert F.ring.from_marks(u.signs) == u.element


@pytest.mark.parametrize("name", ["D6", "D10"])
def test_odd_prime_units(name):
    p = 3 if name == "D6" else 5
    units = stable_units(fusion_of(name, p))
    assert units.rank == 1
    assert units.contains_minus_one


def test_ambient_check():
    flags = ambient_check(fusion_of("A4", 2))
    assert flags["units_equal_ambient"] is False
    assert flags["fusion_trivial"] is False
    assert flags["counterexample"] is False
    assert (flags["rank_stable"], flags["rank_ambient"]) == (2, 4)


def test_maximal_units():
    L = lattice_of("D8")
    F = trivial_fusion(L, 2)
    for m in L.maximal:
        u = maximal_unit(F.ring, m)
        assert u.signs == maximal_unit_marks(L, m)
        assert F.ring.mark(u.element).values == u.signs
    with pytest.raises(PreconditionError):
        maximal_unit(F.ring, 0)


def test_classify_maximals_of_s4():
    F = fusion_of("S4", 2)
    result = classify_maximals(F)
    assert len(result.rows) == 3
    stable = [r for r in result.rows if r.unit_stable]
    assert len(stable) == 1
    assert stable[0].abelian and stable[0].normal_in_f
    assert not result.all_stable
    assert result.frattini_strongly_closed is None


def test_classify_maximals_all_stable_when_trivial():
    F = trivial_fusion(lattice_of("D8"), 2)
    result = classify_maximals(F)
    assert result.all_stable
    assert result.frattini_strongly_closed
    assert result.frattini_normal


def test_classify_maximals_needs_two():
    with pytest.raises(PreconditionError):
        classify_maximals(fusion_of("D6", 3))


def test_out_action_and_fixed_units():
    F = fusion_of("A4", 2)
    action = out_action(F, F.lattice.top)
    assert action.group.order == 3
    fixed = out_fixed_units(action)
    assert fixed.same_as(stable_units(F))
    assert out_fixed_units(action, gamma=1).same_as(F.ring.unit_group())


def test_trace_lands_in_fixed_units():
    F = fusion_of("A4", 2)
    action = out_action(F, F.lattice.top)
    fixed = out_fixed_units(action)
    for u in F.ring.unit_group().basis:
        t = trace(action, u, delta=1)
        assert fixed.contains(t.signs)
        assert F.ring.mark(t.element).values == t.signs
    for u in fixed.basis:
        # the trace of a fixed unit over an odd-index subgroup is the unit itself
        assert trace(action, u, delta=1).signs == u.signs


def test_trace_rejects_unfixed_units():
    F = fusion_of("A4", 2)
    action = out_action(F, F.lattice.top)
    moved = next(u for u in F.ring.unit_group().basis
                 if any(action.act(o, u.signs) != u.signs for o in range(action.group.order)))
    with pytest.raises(PreconditionError):
        trace(action, moved, delta=action.full)


def test_reeh_element_of_fused_class():
    # the three C2s of V4 are fused in A4, so α_C2 hits all of them
    F = fusion_of("A4", 2)
    alpha = reeh_basis(F).basis[F.class_of[F.lattice.by_label("C2#1")]]
    assert alpha.coeffs == (0, 1, 1, 1, 0)
    assert is_stable(F, alpha)


@pytest.mark.parametrize("name, p", [("D6", 3), ("D10", 5)])
def test_trace_over_even_index_is_trivial(name, p):
    F = fusion_of(name, p)
    action = out_action(F, F.lattice.top)
    delta = action.out_s
    assert (action.full.bit_count() // delta.bit_count()) % 2 == 0
    for u in out_fixed_units(action).basis:
        assert trace(action, u, delta).signs == (1,) * len(u.signs)
