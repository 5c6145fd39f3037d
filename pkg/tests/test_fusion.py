import pytest

from core.errors import GroupError, PreconditionError
from core.fusion import (
    detect_essentials, frobenius_fusion, generated_fusion, has_strongly_p_embedded,
    is_strongly_closed, local_data, trivial_fusion,
)
from core.catalog import catalog
from core.group import bits, mask_of

from conftest import context_of, fusion_of, lattice_of


def _ambient_id(ctx, P):
    """Id in the G-lattice of the S-subgroup P."""
    emb = ctx.fusion.ambient[1]
    return ctx.lattice.id_of(mask_of(emb[x] for x in bits(ctx.fusion.lattice.mask(P))))


def _normal_v4_of_s4(ctx):
    LS = ctx.fusion.lattice
    return next(P for P in range(len(LS))
                if LS.order(P) == 4 and not LS.is_cyclic(P)
                and ctx.lattice.is_normal(_ambient_id(ctx, P)))


def test_a4_classes():
    F = fusion_of("A4", 2)
    assert F.S.name == "V4"
    assert len(F.classes) == 3
    assert F.lattice.class_count == 5
    assert F.s_classes_in(1) == (1, 2, 3)
    assert not F.is_trivial()
    assert len(F.element_classes()) == 2


def test_s4_classes():
    F = fusion_of("S4", 2)
    assert F.S.name == "D8"
    assert len(F.classes) == 7
    assert F.lattice.class_count == 8
    assert len(F.element_classes()) == 4


def test_sylow_normalizer_controls_abelian_case():
    F = fusion_of("A4", 2)
    top = F.lattice.top
    assert F.aut_order(top) == 3
    assert len(F.aut_s(top)) == 1
    assert len(F.inn(top)) == 1
    for P in range(len(F.lattice)):
        assert len(F.aut(P)) == F.aut_order(P)
        for Q in F.classes[F.class_of[P]]:
            assert F.iso(P, Q)


def test_generated_system_matches_frobenius():
    ctx = context_of("A4", 2)
    F = ctx.fusion
    G, emb = ctx.G, F.ambient[1]
    pos = {x: i for i, x in enumerate(emb)}
    g = G.element_orders.index(3)
    images = tuple(pos[G.conj(g, emb[x])] for x in range(F.S.order))
    E = generated_fusion(F.lattice, [images], 2)
    assert E.same_as(F)
    assert not trivial_fusion(F.lattice, 2).same_as(F)


def test_trivial_fusion():
    L = lattice_of("D8")
    F = trivial_fusion(L, 2)
    assert F.is_trivial()
    assert len(F.classes) == L.class_count
    assert detect_essentials(F) == ()


def test_fusion_needs_a_p_group():
    with pytest.raises(PreconditionError):
        trivial_fusion(lattice_of("S3"), 2)
    G = catalog("S4")
    with pytest.raises(PreconditionError):
        frobenius_fusion(G, G.full_mask, 2)


def test_generated_fusion_from_subgroup_maps():
    L = lattice_of("V4")
    c1, c2, c3 = (L.by_label(f"C2#{k}") for k in (1, 2, 3))
    F = generated_fusion(L, maps=[(c1, (0, 2))], p=2)
    assert len(F.classes) == 4
    assert F.class_of[c1] == F.class_of[c2] != F.class_of[c3]
    with pytest.raises(GroupError):
        generated_fusion(L, maps=[(c1, (0, 0))], p=2)


def test_generated_fusion_rejects_non_automorphisms():
    L = lattice_of("C4")
    with pytest.raises(GroupError):
        generated_fusion(L, [(0, 2, 1, 3)], 2)
    with pytest.raises(GroupError):
        generated_fusion(L, [(0, 1, 1, 3)], 2)


def test_essentials_of_s4():
    """Only the normal V4 of D8 is essential.

    The other V4 is not normal in S4; its Out_F is a 2-group (order 2), which has
    no strongly 2-embedded subgroup, so it is excluded although both V4s are centric.
    """
    ctx = context_of("S4", 2)
    F = ctx.fusion
    essentials = detect_essentials(F)
    assert essentials == (_normal_v4_of_s4(ctx),)
    ld = local_data(F, essentials[0])
    assert ld.out_group.order == 6
    assert F.is_centric(essentials[0])


def test_no_essentials_with_abelian_sylow():
    assert detect_essentials(fusion_of("A4", 2)) == ()
    assert detect_essentials(fusion_of("A5", 2)) == ()


def test_local_data_of_a4_sylow():
    F = fusion_of("A4", 2)
    ld = local_data(F, F.lattice.top)
    assert ld.aut.order == 3
    assert ld.out_group.order == 3
    assert ld.fully_automized


def test_strong_closure_in_s4():
    ctx = context_of("S4", 2)
    F = ctx.fusion
    L = F.lattice
    v4 = _normal_v4_of_s4(ctx)
    assert is_strongly_closed(F, v4)
    assert is_strongly_closed(F, L.top)
    c4 = next(P for P in range(len(L)) if L.order(P) == 4 and L.is_cyclic(P))
    assert not is_strongly_closed(F, c4)


def test_fully_normalized_representatives():
    F = fusion_of("S4", 2)
    for f, members in enumerate(F.classes):
        rep = F.fully_normalized_rep(f)
        assert rep in members
        assert F.fully_normalized(rep)


@pytest.mark.parametrize("name, p, expected", [
    ("S3", 2, True), ("C2", 2, False), ("C3", 2, False), ("V4", 2, False), ("S3", 3, False),
])
def test_strongly_p_embedded(name, p, expected):
    assert has_strongly_p_embedded(catalog(name), p) is expected


@pytest.mark.slow
@pytest.mark.parametrize("name, classes", [("C2^4:C7", 13), ("C2^4:F21", 11)])
def test_rank_four_systems(name, classes):
    assert len(fusion_of(name, 2).classes) == classes
