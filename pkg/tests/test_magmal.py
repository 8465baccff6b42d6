from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cloakforge import fincat as fc
from cloakforge import generators as g
from cloakforge import magmal as mg
from cloakforge.errors import LawViolation

LATTICES = g.heyting_lattices(5)


def names(C, x):
    return C.base.objects[x]


def test_cloak_on_chain3():
    C = g.chain3()
    B = C.base
    c = mg.find_cloak(C, B.obj_index("m"), B.obj_index("0"))
    assert names(C, c.hom_obj) == "0"


def test_cloak_on_terminal():
    T = mg.MagmalCategory.from_table(fc.FinCategory.terminal(), {(0, 0): 0})
    assert names(T, mg.find_cloak(T, 0, 0).hom_obj) == "*"


def test_cloak_on_diamond():
    D = g.diamond()
    B = D.base
    c = mg.find_cloak(D, B.obj_index("a"), B.obj_index("b"))
    assert names(D, c.hom_obj) == "b"


@pytest.mark.parametrize("L", [g.chain3(), g.diamond()], ids=lambda L: L.name)
def test_heyting_lattices_are_left_cloakal(L):
    assert mg.is_left_cloakal(L) == []


def test_discrete_has_missing_cloaks():
    B = fc.FinCategory.discrete(["p", "q"])
    C = mg.MagmalCategory.from_table(B, {(x, y): 0 for x in range(2) for y in range(2)})
    assert mg.is_left_cloakal(C) != []


def test_curry_inverts_evaluation():
    C = g.diamond()
    B = C.base
    for y in B.obj_ids():
        for z in B.obj_ids():
            c = C.need_cloak(y, z)
            for x in B.obj_ids():
                for f in B.hom(C.t(x, y), z):
                    h = C.curry(x, y, z, f)
                    assert B.comp(c.ev, C.tm(h, B.id(y))) == f


def test_identity_s2_left_is_identity_family():
    C = g.chain3()
    S = mg.MagmalFunctor.identity(C)
    for y in C.base.obj_ids():
        fam = mg.mate_bijection_s2(S, y)
        assert all(C.base.is_identity(m) for m in fam.values())


def test_s2_left_of_interior_operator():
    G = g.g_drop_m()
    C, B = G.C, G.base
    for y in B.obj_ids():
        fam = mg.mate_bijection_s2(G.g, y)
        for z, m in fam.items():
            assert B.src[m] == G.ob(C.cloak(y, z).hom_obj)
            assert B.dst[m] == C.cloak(G.ob(y), G.ob(z)).hom_obj


@pytest.mark.parametrize("G", [g.g_drop_m(), g.g_meet_a()], ids=lambda G: G.name)
def test_s2_bijection_round_trip(G):
    B = G.base
    for y in B.obj_ids():
        left = mg.mate_bijection_s2(G.g, y, "to_left")
        right = mg.mate_bijection_s2(G.g, y, "to_right", left)
        assert right == {x: G.g.s2[(x, y)] for x in B.obj_ids()}


@pytest.mark.parametrize("G", [g.g_drop_m(), g.g_meet_a()], ids=lambda G: G.name)
def test_interior_operators_are_magmal_comonads(G):
    assert mg.check_comonad(G) == []


def test_broken_comultiplication_is_reported():
    G = g.g_drop_m()
    B = G.base
    delta = list(G.delta)
    delta[2] = B.id(1)           # wrong endpoints at 1
    bad = mg.MagmalComonad(G.g, G.eps, delta, check=False)
    assert mg.check_comonad(bad) != []
    with pytest.raises(LawViolation):
        mg.MagmalComonad(G.g, G.eps, delta)


def test_identity_preserves_cloaks():
    C = g.diamond()
    S = mg.MagmalFunctor.identity(C)
    assert all(mg.preserves_cloak(S, y, z) for y in C.base.obj_ids() for z in C.base.obj_ids())


def test_g_meet_a_does_not_preserve_cloak_of_b_by_a():
    G = g.g_meet_a()
    B = G.base
    assert not mg.preserves_cloak(G.g, B.obj_index("a"), B.obj_index("b"))


def test_non_monotone_operator_is_rejected():
    C = g.chain3()
    with pytest.raises(LawViolation):
        mg.MagmalComonad.thin(C, [0, 2, 1])


def test_closure_dual_is_comonad_on_op():
    T = g.closure_t()
    assert mg.check_magmal(T) == []
    assert mg.check_comonad(T.dual()) == []


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(LATTICES), st.data())
def test_cloak_is_largest_x_meeting_below(L, data):
    B = L.base
    y = data.draw(st.sampled_from(B.obj_ids()))
    z = data.draw(st.sampled_from(B.obj_ids()))
    # oracle: the Heyting implication read straight off the order
    cands = [x for x in B.obj_ids() if B.leq(L.t(x, y), z)]
    top = [x for x in cands if all(B.leq(c, x) for c in cands)]
    assert L.cloak(y, z).hom_obj == top[0]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(LATTICES), st.data())
def test_lax_filter_matches_comonad_laws(L, data):
    maps = g.interior_maps(L.base)
    img = data.draw(st.sampled_from(maps))
    if g.is_lax(L, img):
        assert mg.check_comonad(mg.MagmalComonad.thin(L, img)) == []
    else:
        with pytest.raises(LawViolation):
            mg.MagmalComonad.thin(L, img)
