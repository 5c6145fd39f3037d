import pytest

from core.biset import (
    Composite, Deflation, Induction, Inflation, Isomorphism, Restriction, TensorInduction,
    defres, double_cosets, ghost_biset, indinf,
)
from core.burnside import BurnsideRing
from core.catalog import catalog
from core.errors import BisetPayloadError, PreconditionError
from core.lattice import build_lattice

from conftest import ring_of


def _normal_v4(ring):
    L = ring.lattice
    return next(h for h in range(len(L)) if L.order(h) == 4 and L.is_normal(h))


def test_restriction_of_regular_set():
    ring = ring_of("A4")
    res = Restriction(ring, _normal_v4(ring))
    assert res(ring.transitive(0)).coeffs == (3, 0, 0, 0, 0)
    assert res(ring.one()) == res.target.one()


def test_ghost_biset_works_on_marks():
    ring = ring_of("A4")
    res = Restriction(ring, _normal_v4(ring))
    assert ghost_biset(res, ring.mark(ring.transitive(0)).values).values == (12, 0, 0, 0, 0)
    assert ghost_biset(res, (1,) * ring.rank).values == (1,) * res.target.rank


@pytest.mark.parametrize("name", ["S3", "A4", "S4"])
def test_induction_of_trivial_set(name):
    ring = ring_of(name)
    L = ring.lattice
    for c in range(ring.rank - 1):
        h = L.class_reps[c]
        ind = Induction(ring, h)
        assert ind(ind.source.one()) == ring.transitive(c)


@pytest.mark.parametrize("name", ["S3", "A4", "S4"])
def test_tensor_induction_of_point(name):
    ring = ring_of(name)
    L = ring.lattice
    for h in L.class_reps:
        ten = TensorInduction(ring, h)
        assert ten(ten.source.one()) == ring.one()


def test_tensor_induction_multiplies_over_cosets():
    ring = ring_of("S3")
    L = ring.lattice
    c3 = next(h for h in range(len(L)) if L.order(h) == 3)
    ten = TensorInduction(ring, c3)
    minus = tuple(-1 for _ in range(ten.source.rank))
    assert ten.apply(minus).values == (1, -1, 1, -1)


def test_double_cosets_of_sylow_in_s4():
    ring = ring_of("S4")
    L = ring.lattice
    d8 = L.sylow(2)[0]
    reps = double_cosets(ring, L.mask(d8), L.mask(d8))
    assert len(reps) == 2
    assert reps[0] == 0


def test_deflation_undoes_inflation():
    ring = ring_of("S4")
    v4 = _normal_v4(ring)
    inf = Inflation(ring, v4)
    back = Composite(inf, Deflation(ring, v4))
    q_ring = inf.source
    for c in range(q_ring.rank):
        v = q_ring.mark(q_ring.transitive(c))
        assert back.apply(v) == v
    assert back.kind == "Def∘Inf"


def test_indinf_and_defres_shapes():
    ring = ring_of("S4")
    L = ring.lattice
    v4 = _normal_v4(ring)
    up = indinf(ring, v4)
    down = defres(ring, v4)
    assert up.target is ring
    assert down.source is ring
    assert up.source.group.order == 6
    assert up(up.source.one()) == ring.transitive(L.class_of[L.normalizer[v4]])


def test_isomorphism_of_relabelled_groups():
    S3 = catalog("S3")
    D6 = catalog("D6")
    source, target = BurnsideRing(build_lattice(S3)), BurnsideRing(build_lattice(D6))
    r = next(x for x in range(6) if S3.element_orders[x] == 3)
    s = next(x for x in range(6) if S3.element_orders[x] == 2)
    images = [0] * 6
    for i in range(3):
        for e in range(2):
            x = S3.mul(S3.power(r, i), S3.power(s, e))
            images[x] = i + 3 * e
    iso = Isomorphism(source, target, images)
    for c in range(source.rank):
        v = source.mark(source.transitive(c))
        assert sorted(iso.apply(v).values) == sorted(v.values)
    with pytest.raises(PreconditionError):
        Isomorphism(source, target, [0, 1, 2, 3, 4, 5][::-1])


def test_payload_length_is_checked():
    ring = ring_of("A4")
    res = Restriction(ring, _normal_v4(ring))
    with pytest.raises(BisetPayloadError):
        res.apply((1, 1, 1))
