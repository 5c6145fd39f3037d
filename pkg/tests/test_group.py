import pytest
from hypothesis import given, strategies as st
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

from core.catalog import abelian, catalog, cyclic, load_group
from core.errors import CapExceeded, DescriptorError, GroupError, PreconditionError
from core.group import (
    automorphism_group, cycle_string, from_permutations, from_table, mask_of,
    p_part, parse_cycles, prime_factors, quotient, subgroup_group,
)


def test_cyclic_table_is_accepted():
    rows = [[(a + b) % 5 for b in range(5)] for a in range(5)]
    G = from_table("C5", rows)
    assert G.order == 5
    assert G.is_abelian
    assert G.element_orders == (1, 5, 5, 5, 5)


def test_non_associative_latin_square_is_rejected():
    rows = [[0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError, match="associative"):
        from_table("loop", rows)


def test_table_without_identity_is_rejected():
    with pytest.raises(GroupError, match="identity"):
        from_table("bad", [[1, 0], [0, 1]])


def test_table_over_cap():
    rows = [[(a + b) % 6 for b in range(6)] for a in range(6)]
    with pytest.raises(CapExceeded):
        from_table("C6", rows, cap=4)


def test_parse_cycles():
    assert parse_cycles("(1 2 3)(4 5)") == (1, 2, 0, 4, 3)
    assert parse_cycles("(1,3)", degree=4) == (2, 1, 0, 3)
    assert cycle_string((1, 2, 0, 4, 3)) == "(1 2 3)(4 5)"
    assert cycle_string((0, 1)) == "()"


@pytest.mark.parametrize("text", ["(1 2", "(1 1)", "(1 2)(2 3)", "(a b)"])
def test_parse_cycles_rejects(text):
    with pytest.raises(GroupError):
        parse_cycles(text)


def test_permutation_group():
    S3 = from_permutations("S3", [parse_cycles("(1 2 3)"), parse_cycles("(1 2)")])
    assert S3.order == 6
    assert not S3.is_abelian
    assert sorted(S3.element_orders) == [1, 2, 2, 2, 3, 3]


@pytest.mark.parametrize("name, family, degree", [
    ("S4", SymmetricGroup, 4), ("A4", AlternatingGroup, 4), ("A5", AlternatingGroup, 5),
])
def test_named_permutation_groups(name, family, degree):
    G, P = catalog(name), family(degree)
    assert G.order == P.order()
    assert sorted(G.element_orders) == sorted(g.order() for g in P.generate())
    assert G.label(0) == "()"


def test_permutation_group_cap_uses_group_order():
    with pytest.raises(CapExceeded):
        from_permutations("S4", [parse_cycles("(1 2 3 4)"), parse_cycles("(1 2)")], cap=23)


def test_catalog_cap():
    with pytest.raises(CapExceeded):
        catalog("S5", cap=100)


def test_subgroup_and_quotient():
    A4 = catalog("A4")
    v4 = next(m for m in (A4.closure_mask([a, b]) for a in range(12) for b in range(12))
              if m.bit_count() == 4)
    V, emb = subgroup_group(A4, v4)
    assert V.order == 4 and V.is_abelian
    assert mask_of(emb) == v4
    Q = quotient(A4, v4)
    assert Q.group.order == 3
    assert Q.preimage_mask(1) == v4


def test_quotient_needs_normal_subgroup():
    S3 = catalog("S3")
    involution = S3.element_orders.index(2)
    with pytest.raises(PreconditionError):
        quotient(S3, S3.closure_mask([involution]))


@pytest.mark.parametrize("name, order", [
    ("V4", 6), ("C4", 2), ("D8", 8), ("Q8", 24), ("C2^3", 168), ("C4xC2", 8),
])
def test_automorphism_group_orders(name, order):
    A = automorphism_group(catalog(name))
    assert A.order == order
    assert A.maps[0] == tuple(range(catalog(name).order))


def test_automorphism_inner_part():
    A = automorphism_group(catalog("D8"))
    assert len(A.inner) == 4
    assert A.outer().group.order == 2


@given(st.integers(min_value=1, max_value=2000), st.sampled_from([2, 3, 5, 7]))
def test_p_part_splits_order(n, p):
    q = p_part(n, p)
    assert n % q == 0
    assert (n // q) % p != 0
    assert prime_factors(q) in ([], [p])


@given(st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=3))
def test_abelian_products(orders):
    G = abelian(orders)
    n = 1
    for k in orders:
        n *= k
    assert G.order == n
    assert G.is_abelian
    assert G.closure_mask(G.generators) == G.full_mask


@given(st.integers(min_value=1, max_value=24), st.data())
def test_cyclic_closure_sizes(n, data):
    G = cyclic(n)
    x = data.draw(st.integers(min_value=0, max_value=n - 1))
    assert G.closure_mask([x]).bit_count() == G.element_orders[x]


@pytest.mark.parametrize("descriptor, order", [
    ("A4", 12),
    ("catalog:D8", 8),
    ({"kind": "catalog", "name": "Q8"}, 8),
    ({"kind": "permutation", "name": "S3", "generators": ["(1 2 3)", "(1 2)"]}, 6),
    ({"kind": "permutation", "degree": 4, "generators": [[[1, 2, 3, 4]], [[1, 3]]]}, 8),
    ({"kind": "cayley", "name": "C2", "table": [[0, 1], [1, 0]]}, 2),
])
def test_load_group(descriptor, order):
    assert load_group(descriptor).order == order


@pytest.mark.parametrize("descriptor", [
    42, {"kind": "matrix"}, {"kind": "cayley", "name": "X"}, {"kind": "permutation"},
    {"kind": "permutation", "generators": [[1, 2, 3, 4]]},
])
def test_load_group_rejects(descriptor):
    with pytest.raises(DescriptorError):
        load_group(descriptor)
