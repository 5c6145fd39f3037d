import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from core import f2
from core.zlattice import hnf_basis, integer_kernel, lattice_contains, same_lattice


def test_integer_kernel_of_one_difference():
    kernel = integer_kernel([[1, -1, 0]], 3)
    assert len(kernel) == 2
    assert same_lattice(kernel, [(1, 1, 0), (0, 0, 1)])


def test_integer_kernel_of_empty_matrix_is_everything():
    assert same_lattice(integer_kernel([], 2), [(1, 0), (0, 1)])
    assert same_lattice(integer_kernel([[0, 0]], 2), [(1, 0), (0, 1)])


def test_integer_kernel_is_saturated():
    # 2x = 2y has the same integer kernel as x = y
    assert same_lattice(integer_kernel([[2, -2]], 2), [(1, 1)])


def test_hnf_is_canonical():
    assert hnf_basis([(2, 0), (0, 2), (1, 1)]) == hnf_basis([(1, 1), (0, 2)])
    assert hnf_basis([(0, 0)]) == ()
    assert not same_lattice([(2, 0), (0, 1)], [(1, 0), (0, 1)])


def test_lattice_contains():
    big = [(2, 0), (0, 1)]
    assert lattice_contains(big, [(4, 3)])
    assert not lattice_contains(big, [(1, 0)])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(min_value=-5, max_value=5), min_size=4, max_size=4),
                min_size=1, max_size=3))
def test_integer_kernel_annihilates(rows):
    for v in integer_kernel(rows, 4):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


bool_matrices = hnp.arrays(dtype=np.bool_, shape=st.tuples(st.integers(1, 6), st.integers(1, 8)))


@given(bool_matrices)
def test_rank_nullity(m):
    assert f2.rank(m) + f2.nullspace(m).shape[0] == m.shape[1]


@given(bool_matrices)
def test_nullspace_and_left_kernel(m):
    null = f2.nullspace(m)
    assert not ((m.astype(np.uint8) @ null.T.astype(np.uint8)) % 2).any()
    left = f2.left_kernel(m)
    assert not ((left.astype(np.uint8) @ m.astype(np.uint8)) % 2).any()


@given(bool_matrices)
def test_span_basis_is_canonical(m):
    basis = f2.span_basis(m)
    assert f2.same_span(basis, m)
    for row in m:
        assert f2.in_span(basis, row)
    assert np.array_equal(f2.span_basis(basis[::-1]), basis)


def test_combine():
    basis = f2.as_matrix([[1, 0, 1], [0, 1, 1]], 3)
    coeffs = f2.as_matrix([[1, 1]], 2)
    assert f2.combine(coeffs, basis).tolist() == [[True, True, False]]
    assert f2.combine(f2.as_matrix([], 2), basis).shape == (0, 3)
