from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cloakforge import em
from cloakforge import fincat as fc
from cloakforge import fusion as fu
from cloakforge import generators as g
from cloakforge import magmal as mg


def coalg(G, E, name):
    c = G.base.obj_index(name)
    return next(i for i, (x, _) in enumerate(E.structures) if x == c)


def wood(G, y, z):
    B = G.base
    yi = B.obj_index(y)
    E = em.build_em(G)
    ups = E.structures[coalg(G, E, y)][1]
    return fu.wood_fusion(G, yi, ups, B.obj_index(z))


def test_identity_wood_fusion_is_identity():
    C = g.chain3()
    G = mg.MagmalComonad.identity(C)
    for y in C.base.obj_ids():
        for z in C.base.obj_ids():
            w = fu.wood_fusion(G, y, C.base.id(y), z)
            assert w.invertible and C.base.is_identity(w.mor)


def test_wood_fusion_g_drop_m():
    G = g.g_drop_m()
    w = wood(G, "1", "m")
    assert (G.base.objects[w.source], G.base.objects[w.target]) == ("0", "0")
    assert w.invertible


def test_wood_fusion_g_meet_a_strict():
    G = g.g_meet_a()
    w = wood(G, "a", "b")
    assert (G.base.objects[w.source], G.base.objects[w.target]) == ("0", "b")
    assert not w.invertible


@pytest.mark.parametrize("mode, cells", [("all-coalgebras", 6), ("cofree-only", 9)])
def test_g_drop_m_is_hopf(mode, cells):
    # two coalgebras or three cofree ones, against three objects
    r = fu.hopf_wood_check(g.g_drop_m(), mode)
    assert r.hopf and r.cells == cells


def test_identity_is_hopf():
    assert fu.hopf_wood_check(mg.MagmalComonad.identity(g.diamond())).hopf


def test_g_meet_a_is_not_hopf():
    r = fu.hopf_wood_check(g.g_meet_a())
    assert not r.hopf
    # the scan runs through coalgebras in carrier order, so (0, fix) fails first
    assert r.counterexample == ("(0,1_0)", "0")
    assert fu.hopf_wood_check(g.g_meet_a(), "cofree-only").hopf is False


def test_transported_pair_identity_on_the_nose():
    G = mg.MagmalComonad.identity(g.chain3())
    E = em.build_em(G)
    r = fu.transported_pair_check(G, E, 2, 1)
    assert r["on_the_nose"] and r["isomorphic"]


@pytest.mark.parametrize("G, y", [(g.g_drop_m(), "1"), (g.g_meet_a(), "a")], ids=["g_drop_m", "g_meet_a"])
def test_transported_pair_is_isomorphic(G, y):
    E = em.build_em(G)
    assert fu.transported_pair_check(G, E, coalg(G, E, y), coalg(G, E, "0"))["isomorphic"]


@pytest.mark.parametrize("G, y, z, expect", [(g.g_drop_m(), "1", "m", True), (g.g_meet_a(), "a", "b", False)],
                         ids=["g_drop_m", "g_meet_a"])
def test_restricted_creation(G, y, z, expect):
    E = em.build_em(G)
    r = fu.restricted_creation_check(G, E, coalg(G, E, y), G.base.obj_index(z))
    assert r["creation"] is expect and r["fusion"] is expect


def test_magcomoncloaks_g_drop_m_builds_cloaks():
    G = g.g_drop_m()
    E = em.build_em(G)
    r = fu.magcomoncloaks_check(G, E, coalg(G, E, "1"))
    assert r["fusion"] and r["creation"]
    assert r["cloaks"][E.category.objects[coalg(G, E, "0")]] == E.category.objects[coalg(G, E, "0")]


def test_magcomoncloaks_g_meet_a_fails_both_ways():
    G = g.g_meet_a()
    E = em.build_em(G)
    r = fu.magcomoncloaks_check(G, E, coalg(G, E, "a"))
    assert r["fusion"] is False and r["creation"] is False


def test_identity_comonad_cloaks_are_base_cloaks():
    C = g.chain3()
    G = mg.MagmalComonad.identity(C)
    E = em.build_em(G)
    r = fu.magcomoncloaks_check(G, E, 2)
    assert r["agree"] and len(r["cloaks"]) == 3


def alg(T, E, name):
    c = T.base.obj_index(name)
    return next(s for x, s in E.structures if x == c)


def test_t_fusion_identity():
    T = mg.OpmagmalMonad.identity(g.chain3())
    B = T.base
    assert all(fu.t_fusion(T, x, y, B.id(y)).invertible for x in B.obj_ids() for y in B.obj_ids())


def test_t_fusion_closure_on_chain3():
    T = g.closure_t()
    B = T.base
    v = fu.t_fusion(T, B.obj_index("m"), B.obj_index("1"), alg(T, em.build_em_monad(T), "1"))
    assert v.invertible and B.objects[v.source] == B.objects[v.target] == "1"


def test_t_fusion_join_a_on_diamond():
    T = mg.OpmagmalMonad.thin(g.diamond(), [1, 1, 3, 3], name="join_a")
    B = T.base
    E = em.build_em_monad(T)
    v = fu.t_fusion(T, B.obj_index("b"), B.obj_index("a"), alg(T, E, "a"))
    assert v.invertible and B.objects[v.source] == "a"
    assert fu.t_fusion_monad_morphism_check(T, B.obj_index("a"), alg(T, E, "a")) == []


def test_identity_transfer():
    C = g.chain3()
    T = mg.OpmagmalMonad.identity(C)
    tr = fu.adjoint_transfer(T, fc.identity_adjunction(C.base))
    assert tr.holds and tr.comonad.g.functor.obj_map == (0, 1, 2)


def test_closure_transfer_to_g_drop_m():
    T = g.closure_t()
    tr = fu.adjoint_transfer(T, fc.find_right_adjoint(T.functor))
    assert tr.holds
    assert tr.comonad.g.functor.obj_map == g.g_drop_m().g.functor.obj_map
    assert [v["t_fusion"] for v in tr.verdicts] == [True, True]


def test_transfer_where_both_sides_fail():
    D = g.diamond()
    # t = (0,a,1,1) keeps bottom, so it has a right adjoint (0,a,0,1)
    T = mg.OpmagmalMonad.thin(D, [0, 1, 3, 3], name="t")
    tr = fu.adjoint_transfer(T, fc.find_right_adjoint(T.functor))
    assert tr.holds
    assert tr.comonad.g.functor.obj_map == (0, 1, 0, 3)
    assert any(not v["t_fusion"] and not v["wood"] for v in tr.verdicts)


def test_trivial_monoid_is_hopf():
    assert fu.monoid_hopf(fu.FiniteMonoid.from_table([[0]]))[0]


def test_z2_fusion_permutes_pairs():
    ok, table = fu.monoid_hopf(fu.FiniteMonoid.cyclic_group(2))
    assert ok and sorted(table.values()) == sorted(table)


def test_idempotent_monoid_is_not_hopf():
    H = fu.FiniteMonoid.from_table([[0, 1], [1, 1]])
    ok, table = fu.monoid_hopf(H)
    assert not ok and table[(1, 0)] == table[(1, 1)]


def test_monoid_counts():
    assert [len(fu.all_monoids(n)) for n in range(1, 5)] == [1, 2, 7, 35]


def relabel(H, perm):
    # move the unit to 0 so the relabelled table is again in normal form
    inv = {p: i for i, p in enumerate(perm)}
    n = len(perm)
    return fu.FiniteMonoid.from_table([[inv[H.mul[(perm[a], perm[b])]] for b in range(n)] for a in range(n)])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_hopf_iff_group_under_relabelling(data):
    n = data.draw(st.integers(1, 4))
    H = data.draw(st.sampled_from(fu.all_monoids(n)))
    perm = [0] + data.draw(st.permutations(list(range(1, n))))
    K = relabel(H, perm)
    # oracle: a finite monoid is a group iff every row of its table is a permutation
    latin = all(sorted(K.mul[(a, b)] for b in K.elements) == list(K.elements) for a in K.elements)
    assert fu.monoid_hopf(K)[0] == latin == fu.is_group(K)
