from __future__ import annotations

import pytest

from cloakforge import em
from cloakforge import fincat as fc
from cloakforge import generators as g
from cloakforge import liftings as lf
from cloakforge import prof as pr
from cloakforge.errors import HypothesisUnsatisfied

B3 = g.chain3().base


@pytest.fixture(scope="module")
def bundles():
    return g.bundle_suite()


def test_cancellation_through_hom_is_on_the_nose():
    U = pr.lower_star(g.g_drop_m().g.functor)
    r = lf.rif_cancel_check(pr.hom_prof(B3), U, pr.hom_prof(B3), pr.test_profunctors(B3, B3))
    assert r.holds


def test_cancellation_for_relations():
    S = pr.relation_prof(B3, B3, lambda b, a: B3.leq(b, a))
    U = pr.lower_star(g.g_drop_m().g.functor)
    C = pr.lower_star(g.closure_t().functor)
    assert lf.rif_cancel_check(S, U, C, pr.test_profunctors(B3, B3)).holds


def test_suite_has_enough_admissible_bundles(bundles):
    assert len(bundles) == 24
    assert all(g.bundle_is_admissible(b) for b in bundles[:3])


def test_equalizer_descriptions_on_a_bundle(bundles):
    b = bundles[0]
    tests = pr.test_profunctors(b.B.dom, b.B.cod)
    r1 = lf.rif_with_unit_check(b.S, g.unit_into_coproduct(b.N), b.B, b.K, tests)
    r2 = lf.rif_via_codensity_check(b.S, b.U, b.B, b.K, tests)
    assert r1.holds and r2.holds


def test_unit_fork_is_an_equalizer(bundles):
    b = bundles[1]
    r = lf.rif_with_unit_check(b.S, g.unit_into_coproduct(b.N), b.B)
    assert r.part_i and r.part_ii is None


def test_pointwise_equalizer_is_an_equalizer():
    # identity against the fold onto the first summand: they agree exactly there
    H = pr.hom_prof(B3)
    M = pr.prof_coproduct(H, H)
    ident = pr.identity_mod(M)
    fold = pr.ModMorphism.from_fn(M, M, lambda b, a, x: (0, x[1]))
    E, k = lf.pointwise_equalizer(ident, fold)
    assert lf.is_equalizer_of(k, ident, fold)
    assert E.size() == H.size()


def test_cokernel_pair_of_mono():
    H = pr.hom_prof(B3)
    eta = g.unit_into_coproduct(H)
    P, i0, i1 = lf.cokernel_pair(eta)
    assert lf.is_equalizer_of(eta, i0, i1)


def test_dubuc_for_coalgebra_forgetful():
    G = g.g_drop_m()
    E = em.build_em(G)
    U = E.und.functor
    S = fc.identity_functor(E.category)
    r = lf.dubuc_check(S, U)
    assert r.verdict == "holds" and r.lhs and r.rhs


def test_dubuc_requires_right_adjoint():
    c2 = g.heyting_chain(2).base
    U = fc.constant_functor(c2, B3, 2)
    with pytest.raises(HypothesisUnsatisfied):
        lf.dubuc_check(fc.identity_functor(c2), U)


def test_dubuc_suite_never_fails():
    pairs = g.dubuc_suite()
    assert len(pairs) == 128
    for p in pairs[::8]:
        assert lf.dubuc_check(p.S, p.U).verdict != "fails"
