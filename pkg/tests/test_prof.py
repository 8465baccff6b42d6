from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cloakforge import fincat as fc
from cloakforge import generators as g
from cloakforge import prof as pr
from cloakforge.errors import BoundaryMismatch

C3 = g.chain3()
B3 = C3.base
MONOTONE = [img for img in itertools.product(range(3), repeat=3)
            if all(B3.leq(img[a], img[b]) for a in range(3) for b in range(3) if B3.leq(a, b))]


def ob(name, C=B3):
    return C.obj_index(name)


def as_presheaf(N, k):
    """N(-, k) as a presheaf on N.cod."""
    return pr.presheaf_from_fn(N.cod, lambda x: N.val(x, k), lambda f, s: N.lact(f, k, s))


def iso(M, N):
    return pr.mod_isomorphism(M, N) is not None


def test_hom_is_a_unit_for_composition():
    M = pr.lower_star(g.g_drop_m().g.functor)
    assert iso(pr.compose(M, pr.hom_prof(B3)), M)
    assert iso(pr.compose(pr.hom_prof(B3), M), M)


def test_leq_relation_composes_to_itself():
    c2 = g.heyting_chain(2).base
    le = pr.relation_prof(c2, c2, lambda b, a: c2.leq(b, a))
    comp = pr.compose(le, le)
    assert comp.is_relation()
    support = {(b, a) for b, a in comp.cells() if comp.val(b, a)}
    assert support == pr.relational_composite(le, le) == {(b, a) for b, a in le.cells() if le.val(b, a)}


def test_lower_star_is_functorial():
    F = g.closure_t().functor
    G = g.g_drop_m().g.functor
    lhs = pr.compose(pr.lower_star(G), pr.lower_star(F))
    assert iso(lhs, pr.lower_star(fc.compose_functors(F, G)))


def test_identity_lower_and_upper_star_are_hom():
    one = fc.identity_functor(B3)
    assert iso(pr.lower_star(one), pr.hom_prof(B3))
    assert iso(pr.upper_star(one), pr.hom_prof(B3))


def test_g_drop_m_lower_star_is_relation():
    G = g.g_drop_m()
    M = pr.lower_star(G.g.functor)
    assert {(y, z) for y, z in M.cells() if M.val(y, z)} == {(y, z) for y in range(3) for z in range(3)
                                                                 if B3.leq(y, G.ob(z))}


def test_relation_is_representable_by_g_drop_m():
    G = g.g_drop_m()
    rel = pr.relation_prof(B3, B3, lambda y, z: B3.leq(y, G.ob(z)))
    F = pr.is_representable(rel)
    assert F is not None and F.obj_map == G.g.functor.obj_map


def test_composing_across_different_middles_fails():
    c2 = g.heyting_chain(2).base
    with pytest.raises(BoundaryMismatch):
        pr.compose(pr.hom_prof(c2), pr.hom_prof(B3))


def test_bar_hom_is_identity():
    F = pr.coproduct(pr.yo(B3, 1), pr.yo(B3, 2))
    assert iso(pr.bar(pr.hom_prof(B3), F), F)


def test_bar_of_g_drop_m_on_yo_top_is_terminal():
    N = pr.lower_star(g.g_drop_m().g.functor)
    assert iso(pr.bar(N, pr.yo(B3, ob("1"))), pr.terminal_presheaf(B3))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(MONOTONE), st.booleans(), st.integers(0, 2))
def test_bar_on_representables_is_evaluation(img, upper, k):
    F = fc.Functor.from_object_map(B3, B3, img)
    N = pr.upper_star(F) if upper else pr.lower_star(F)
    assert iso(pr.bar(N, pr.yo(B3, k)), as_presheaf(N, k))


def test_day_of_representables_chain3():
    Y = pr.day_convolution(C3, pr.yo(B3, ob("m")), pr.yo(B3, ob("1")))
    assert iso(Y, pr.yo(B3, ob("m")))


def test_day_with_empty_is_empty():
    Y = pr.day_convolution(C3, pr.empty_presheaf(B3), pr.terminal_presheaf(B3))
    assert Y.size() == 0


def test_day_of_representables_diamond():
    D = g.diamond()
    B = D.base
    Y = pr.day_convolution(D, pr.yo(B, ob("a", B)), pr.yo(B, ob("b", B)))
    assert iso(Y, pr.yo(B, ob("0", B)))


def test_day_yoneda_comparison_is_iso():
    for y in B3.obj_ids():
        for z in B3.obj_ids():
            assert pr.day_yoneda_check(C3, y, z).is_iso()


def test_cloak_of_empty_is_terminal():
    pc = pr.presheaf_cloak(C3, pr.empty_presheaf(B3), pr.yo(B3, 0))
    assert iso(pc.hom, pr.terminal_presheaf(B3))


def test_cloak_of_representables_at_top():
    pc = pr.presheaf_cloak(C3, pr.yo(B3, ob("m")), pr.yo(B3, ob("0")))
    assert pr.pval(pc.hom, ob("1")) == ()


def test_representable_cloaks_match_base_homs():
    D = g.diamond()
    assert all(pr.representable_cloak_iso(D, y, z) for y in D.base.obj_ids() for z in D.base.obj_ids())


def test_presheaf_cloak_universal_property():
    tests = pr.presheaf_test_set(B3, max_total=6)
    pc = pr.presheaf_cloak(C3, pr.yo(B3, ob("m")), pr.coproduct(pr.yo(B3, 0), pr.yo(B3, 2)))
    assert pr.cloak_universal_check(pc, tests) == []


def test_presheaf_test_set_respects_bound():
    ts = pr.presheaf_test_set(B3, max_total=12)
    assert ts and all(F.size() <= 12 for F in ts)
    assert all(pr.validate_profunctor(F) == [] for F in ts)


def test_rif_through_hom_is_identity():
    B = pr.lower_star(g.g_drop_m().g.functor)
    R = pr.right_lifting(pr.hom_prof(B3), B)
    assert iso(R.lift, B)


@pytest.mark.parametrize("img", [(0, 0, 2), (0, 2, 2), (1, 1, 2)])
def test_rif_through_lower_star_is_upper_star(img):
    F = fc.Functor.from_object_map(B3, B3, img)
    B = pr.hom_prof(B3)
    R = pr.right_lifting(pr.lower_star(F), B)
    assert iso(R.lift, pr.compose(B, pr.upper_star(F)))


def test_rif_of_relations_matches_brute_force():
    # oracle: rif(S,B)(a,k) holds iff S(b,a) implies B(b,k) for every b
    S = pr.relation_prof(B3, B3, lambda b, a: B3.leq(b, a))
    B = pr.lower_star(g.g_drop_m().g.functor)
    R = pr.right_lifting(S, B)
    expect = {(a, k) for a in range(3) for k in range(3)
              if all(not S.val(b, a) or B.val(b, k) for b in range(3))}
    assert {(a, k) for a, k in R.lift.cells() if R.lift.val(a, k)} == expect


def test_rif_pasting_is_bijective():
    S = pr.lower_star(g.g_drop_m().g.functor)
    R = pr.right_lifting(S, pr.hom_prof(B3))
    assert pr.pasting_bijection_check(R, pr.test_profunctors(B3, B3)) == []


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(MONOTONE), st.sampled_from(MONOTONE))
def test_composition_support_is_relational_product(f, h):
    M = pr.lower_star(fc.Functor.from_object_map(B3, B3, f))
    N = pr.upper_star(fc.Functor.from_object_map(B3, B3, h))
    P = pr.compose(M, N)
    assert {(c, a) for c, a in P.cells() if P.val(c, a)} == pr.relational_composite(M, N)
