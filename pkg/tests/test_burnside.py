import pytest
from hypothesis import given, settings, strategies as st

from core.burnside import BurnsideElement, maximal_unit_marks, unit_group
from core.errors import CapExceeded, NotIntegral, PreconditionError

from conftest import lattice_of, ring_of

A4_MARKS = (
    (12, 6, 4, 3, 1),
    (0, 2, 0, 3, 1),
    (0, 0, 1, 0, 1),
    (0, 0, 0, 3, 1),
    (0, 0, 0, 0, 1),
)


def test_marks_table_of_a4():
    ring = ring_of("A4")
    assert ring.table.rows == A4_MARKS
    assert ring.table.labels == ("1#1", "C2#1", "C3#1", "V4#1", "A4#1")


@pytest.mark.parametrize("name", ["S3", "D8", "S4", "SL(2,3)"])
def test_marks_table_is_triangular(name):
    ring = ring_of(name)
    L = ring.lattice
    M = ring.table.rows
    for h in range(ring.rank):
        assert all(M[h][k] == 0 for k in range(h))
        H = L.class_reps[h]
        assert M[h][h] == L.order(L.normalizer[H]) // L.order(H)
        assert M[0][h] == L.group.order // L.order(L.class_reps[h])


def test_product_of_transitive_sets():
    ring = ring_of("A4")
    c3 = ring.transitive(2)
    assert ring.mul(c3, c3) == BurnsideElement((1, 0, 1, 0, 0))
    assert ring.mul(ring.one(), c3) == c3
    assert ring.power(c3, 0) == ring.one()


def test_from_marks_rejects_non_integral():
    ring = ring_of("A4")
    with pytest.raises(NotIntegral) as info:
        ring.from_marks((1, 0, 0, 0, 0))
    assert info.value.class_index == 0
    assert not ring.is_integral((1, 1, 1, 1, 0))
    with pytest.raises(PreconditionError):
        ring.from_marks((1, 1))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(min_value=-12, max_value=12), min_size=4, max_size=4))
def test_congruences_match_integrality_s3(v):
    ring = ring_of("S3")
    assert ring.congruence_member(v) == ring.is_integral(v)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=-6, max_value=6), min_size=5, max_size=5))
def test_congruences_match_integrality_a4(v):
    ring = ring_of("A4")
    assert ring.congruence_member(v) == ring.is_integral(v)


@pytest.mark.parametrize("name, rank", [
    ("C2", 2), ("C3", 1), ("C4", 2), ("V4", 4), ("S3", 3), ("C7:C3", 1), ("C2^3", 8),
])
def test_unit_ranks(name, rank):
    units = ring_of(name).unit_group()
    assert units.rank == rank
    assert units.contains_minus_one


def test_units_of_s3():
    ring = ring_of("S3")
    u = ring.transitive(0) + ring.transitive(1).scale(-2) + ring.one()
    assert ring.mark(u).values == (1, -1, 1, 1)
    assert ring.mul(u, u) == ring.one()
    units = ring.unit_group()
    assert units.contains((1, -1, 1, 1))
    assert units.contains((1, 1, 1, -1))


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "A4", "C6", "D12"])
def test_search_agrees_with_exhaustive(name):
    ring = ring_of(name)
    assert unit_group(ring, "search").same_as(unit_group(ring, "exhaustive"))


@pytest.mark.parametrize("name", ["V4", "C4xC2", "C2^3", "C8"])
def test_abelian_formula_agrees_with_search(name):
    ring = ring_of(name)
    assert unit_group(ring, "abelian").same_as(unit_group(ring, "search"))


def test_unit_methods_reject_bad_input():
    with pytest.raises(PreconditionError):
        unit_group(ring_of("S3"), "abelian")
    with pytest.raises(PreconditionError):
        unit_group(ring_of("S3"), "guess")
    with pytest.raises(CapExceeded):
        unit_group(ring_of("S4"), "search", cap=5)


def test_unit_members_are_units():
    units = ring_of("D8").unit_group()
    members = list(units.members())
    assert len(members) == units.order
    ring = units.ring
    for signs in members:
        b = ring.from_marks(signs)
        assert ring.mark(ring.mul(b, b)).values == (1,) * ring.rank


def test_maximal_unit_marks():
    L = lattice_of("C4")
    m = L.maximal[0]
    assert maximal_unit_marks(L, m) == (-1, -1, 1)


def test_sub_ring_and_quotient_ring():
    ring = ring_of("S4")
    L = ring.lattice
    v4 = next(h for h in range(len(L)) if L.order(h) == 4 and L.is_normal(h))
    assert ring.sub_ring(v4).rank == 5
    Q, q_ring = ring.quotient_ring(v4)
    assert Q.group.order == 6
    assert q_ring.rank == 4
    assert ring.sub_ring(L.top) is ring
