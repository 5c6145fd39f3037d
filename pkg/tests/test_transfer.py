import pytest

from core.burnside import BurnsideElement
from core.catalog import catalog
from core.errors import PreconditionError, StabilityRequired
from core.stable import reeh_basis, stable_lattice
from core.transfer import (
    FrobeniusContext, NonRealizable, bouc_check, genuine_witness, normalizer_diagram,
    restriction_image, star_product, transfer,
)

from conftest import context_of


def _alpha(ctx, label):
    F = ctx.fusion
    return reeh_basis(F).basis[F.class_of[F.lattice.by_label(label)]]


def test_context_basics(a4):
    assert a4.s_mask.bit_count() == 4
    assert a4.fusion.S.name == "V4"
    assert a4.F is a4.fusion
    assert a4.lattice.order(a4.s_id) == 4
    assert len(a4.sylow_of_class) == a4.ring.rank


def test_context_rejects_non_sylow():
    G = catalog("S4")
    with pytest.raises(PreconditionError):
        FrobeniusContext(G, 2, s_mask=1)


@pytest.mark.parametrize("name", ["A4", "S4", "SL(2,3)"])
def test_restriction_image_is_stable_lattice(name):
    ctx = context_of(name, 2)
    image = restriction_image(ctx)
    assert image.kind == "restriction"
    assert image.rank == len(ctx.fusion.classes)
    assert image.same_as(stable_lattice(ctx.fusion))
    assert image.canonical() == reeh_basis(ctx.fusion).canonical()


def test_transfer_of_alpha_over_a4(a4):
    t = transfer(a4, _alpha(a4, "C2#1"))
    assert t.coeffs == (-2, 1, 6, 0, 0)
    assert a4.ring.mark(t).values == (6, 2, 6, 0, 0)


def test_transfer_of_one_is_one(s4):
    assert transfer(s4, s4.fusion.ring.one()) == s4.ring.one()


@pytest.mark.parametrize("name", ["A4", "S4"])
def test_restriction_splits_transfer(name):
    ctx = context_of(name, 2)
    for b in reeh_basis(ctx.fusion).basis:
        assert ctx.restriction(transfer(ctx, b)) == b


def test_star_product_is_linear_in_left_factor(s4):
    b = _alpha(s4, "C2#1")
    ring = s4.ring
    a1, a2 = ring.transitive(1), ring.transitive(3)
    left = star_product(s4, a1 + a2, b)
    assert left == star_product(s4, a1, b) + star_product(s4, a2, b)


def test_star_product_needs_stable_element(a4):
    F = a4.fusion
    unstable = F.ring.transitive(F.lattice.class_of[F.lattice.by_label("C2#1")])
    with pytest.raises(StabilityRequired):
        star_product(a4, a4.ring.one(), unstable)


def test_witness_for_alpha(a4):
    found = genuine_witness(a4, _alpha(a4, "C2#1"))
    assert found == BurnsideElement((0, 1, 0, 0, 0))


def test_witness_needs_non_negative_marks(a4):
    with pytest.raises(PreconditionError):
        genuine_witness(a4, a4.fusion.ring.one().scale(-1))


@pytest.mark.slow
def test_regular_d8_set_not_realizable_in_s5():
    ctx = context_of("S5", 2)
    found = genuine_witness(ctx, ctx.fusion.ring.transitive(0))
    assert isinstance(found, NonRealizable)
    assert found.nodes > 0


@pytest.mark.parametrize("name", ["C2^2:C3", "C6", "C2^3:C7"])
def test_normal_sylow_unit_diagram(name):
    report = bouc_check(context_of(name, 2))
    assert report.rank_g == report.rank_fixed
    assert report.restriction_iso and report.tensor_inverse and report.transfer_is_tensor


def test_bouc_check_needs_normal_sylow(s4):
    with pytest.raises(PreconditionError):
        bouc_check(s4)


def test_normalizer_report_when_sylow_is_normal(a4):
    report = normalizer_diagram(a4)
    assert report.controls_fusion
    assert report.restriction_image_is_stable_units
    assert report.stable_units_equal_normalizer_units
    assert report.abelian_sylow


def test_normalizer_report_abelian_sylow():
    report = normalizer_diagram(context_of("A5", 2))
    assert report.abelian_sylow and report.controls_fusion
    assert report.stable_units_equal_normalizer_units


def test_normalizer_report_s4(s4):
    report = normalizer_diagram(s4)
    assert not report.controls_fusion
    assert not report.abelian_sylow
    assert report.restriction_image_is_stable_units == report.stable_units_equal_normalizer_units
