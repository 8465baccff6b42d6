from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cloakforge import em
from cloakforge import fincat as fc
from cloakforge import generators as g
from cloakforge import magmal as mg


def carriers(G, E):
    return [G.base.objects[c] for c, _ in E.structures]


def coalg(G, E, name):
    B = G.base
    c = B.obj_index(name)
    return next(i for i, (x, s) in enumerate(E.structures) if x == c)


def test_identity_comonad_em_is_base():
    C = g.chain3()
    E = em.build_em(mg.MagmalComonad.identity(C))
    assert fc.find_isomorphism(E.category, C.base) is not None


def test_g_drop_m_coalgebras():
    G = g.g_drop_m()
    E = em.build_em(G)
    assert carriers(G, E) == ["0", "1"]
    # the tensor is the meet restricted to {0,1}
    assert [[carriers(G, E)[E.magmal.t(i, j)] for j in range(2)] for i in range(2)] == [["0", "0"], ["0", "1"]]


def test_g_meet_a_coalgebras():
    G = g.g_meet_a()
    assert carriers(G, em.build_em(G)) == ["0", "a"]


def test_identity_monad_algebras_are_base():
    C = g.chain3()
    E = em.build_em_monad(mg.OpmagmalMonad.identity(C))
    assert fc.find_isomorphism(E.category, C.base) is not None


def test_closure_t_algebras():
    T = g.closure_t()
    assert carriers(T, em.build_em_monad(T)) == ["0", "1"]


def test_join_a_algebras_on_diamond():
    D = g.diamond()
    T = mg.OpmagmalMonad.thin(D, [1, 1, 3, 3], name="join_a")
    assert carriers(T, em.build_em_monad(T)) == ["a", "1"]


def test_cofree_cloak_identity_is_base_cloak():
    C = g.chain3()
    G = mg.MagmalComonad.identity(C)
    E = em.build_em(G)
    for yc in E.category.obj_ids():
        for z in C.base.obj_ids():
            c = em.cofree_cloak(G, E, yc, z)
            assert E.carrier(c.hom_obj) == C.cloak(E.carrier(yc), z).hom_obj


@pytest.mark.parametrize("G, y, z", [(g.g_drop_m(), "1", "m"), (g.g_meet_a(), "a", "b")],
                         ids=["g_drop_m", "g_meet_a"])
def test_cofree_cloak_carrier_is_bottom(G, y, z):
    E = em.build_em(G)
    c = em.cofree_cloak(G, E, coalg(G, E, y), G.base.obj_index(z))
    assert G.base.objects[E.carrier(c.hom_obj)] == "0"


def test_equalizer_cloak_on_g_drop_m():
    G = g.g_drop_m()
    E = em.build_em(G)
    r = em.cloak_via_equalizer(G, E, coalg(G, E, "1"), coalg(G, E, "0"))
    assert G.base.objects[E.carrier(r.cloak.hom_obj)] == "0"


def test_equalizer_cloak_identity_is_degenerate():
    C = g.chain3()
    G = mg.MagmalComonad.identity(C)
    E = em.build_em(G)
    r = em.cloak_via_equalizer(G, E, 2, 1)
    e_obj, k = r.equalizer
    assert E.category.is_identity(k)


def test_equalizer_route_agrees_with_direct_search_on_g_meet_a():
    G = g.g_meet_a()
    E = em.build_em(G)
    r = em.lemma_equalizer_check(G, E, coalg(G, E, "a"), coalg(G, E, "0"))
    assert r["agree"] and r["direct"]


def test_identity_creates_cloaks():
    C = g.chain3()
    K = mg.MagmalFunctor.identity(C)
    c = em.creation_check(K, 2, 1)
    assert c.created and c.h == C.cloak(2, 1).hom_obj


def test_und_creates_for_g_drop_m():
    G = g.g_drop_m()
    E = em.build_em(G)
    assert em.creation_check(E.und, coalg(G, E, "1"), coalg(G, E, "0")).created


def test_und_does_not_create_for_g_meet_a():
    G = g.g_meet_a()
    E = em.build_em(G)
    assert not em.creation_check(E.und, coalg(G, E, "a"), coalg(G, E, "0")).created


def test_coalgebra_fork_is_absolute_for_identity_functors():
    G = g.g_drop_m()
    E = em.build_em(G)
    for zc in E.category.obj_ids():
        assert em.fork_is_absolute(G, E, zc, [fc.identity_functor(G.base)]) == []


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(g.heyting_grid(4)))
def test_coalgebras_are_fixpoints(cell):
    # oracle: a deflationary idempotent has coalgebras exactly at its fixpoints
    L, G = cell
    E = em.build_em(G)
    fix = sorted(x for x in L.base.obj_ids() if G.ob(x) == x)
    assert sorted(E.carrier(i) for i in E.category.obj_ids()) == fix
