from __future__ import annotations

import pytest

from cloakforge import fincat as fc
from cloakforge import generators as g
from cloakforge import mnd
from cloakforge.errors import HypothesisUnsatisfied, ShapeMismatch

B3 = g.chain3().base
B2 = g.heyting_chain(2).base
CLOSURE = (0, 2, 2)


def closure3():
    return mnd.MonadObject.thin(B3, CLOSURE, name="t")


def test_identity_morphism_gives_identity_square():
    m = mnd.MonadObject.identity(B3)
    f, ems, emt = mnd.em_pseudofunctor(mnd.identity_morphism(m))
    assert f.strong
    assert f.ubar.obj_map == tuple(range(ems.category.n_obj))


def test_identity_on_closure_algebras():
    t = closure3()
    m = mnd.thin_morphism(t, t, (0, 1, 2), name="id")
    assert m.phi.is_invertible()
    f, ems, _ = mnd.em_pseudofunctor(m)
    assert [B3.objects[x] for x, _ in ems.structures] == ["0", "1"]
    assert f.ubar.obj_map == (0, 1)


def test_inclusion_into_closure_chain():
    s = mnd.MonadObject.identity(B2)
    m = mnd.thin_morphism(s, closure3(), (0, 2), name="incl")
    assert m is not None
    f, ems, emt = mnd.em_pseudofunctor(m)
    assert f.validate() == [] and f.strong
    assert [B3.objects[emt.structures[j][0]] for j in f.ubar.obj_map] == ["0", "1"]


def test_no_cell_means_no_morphism():
    # identity source, closure target, u = id needs t(x) ≤ x, which fails at m
    assert mnd.thin_morphism(mnd.MonadObject.identity(B3), closure3(), (0, 1, 2)) is None


def test_composition_needs_matching_monads():
    t = closure3()
    m = mnd.identity_morphism(t)
    n = mnd.identity_morphism(mnd.MonadObject.identity(B3))
    with pytest.raises(ShapeMismatch):
        mnd.compose_morphisms(n, m)


def test_identity_roundtrip():
    assert mnd.roundtrip_from_morphism(mnd.identity_morphism(closure3())).holds


def test_roundtrip_recovers_phi():
    s = mnd.MonadObject.identity(B2)
    m = mnd.thin_morphism(s, closure3(), (0, 2))
    assert mnd.roundtrip_from_morphism(m).holds


def test_strong_squares_come_from_morphisms():
    s = mnd.MonadObject.identity(B2)
    t = closure3()
    ems, emt = mnd.build_plain_em(s), mnd.build_plain_em(t)
    u = fc.Functor.from_object_map(B2, B3, (0, 2))
    squares = list(mnd.strong_squares(ems, emt, u))
    assert squares
    assert all(mnd.roundtrip_from_square(f, ems, emt).holds for f in squares)


def test_em_is_functorial_on_composites():
    t = closure3()
    m = mnd.thin_morphism(mnd.MonadObject.identity(B2), t, (0, 2))
    n = mnd.identity_morphism(t)
    assert mnd.em_functoriality(n, m)


def test_identity_is_doctrinal():
    r = mnd.doctrinal_mnd(mnd.identity_morphism(closure3()))
    assert r.lhs and r.rhs and r.holds


def test_constant_bottom_has_no_adjoint_anywhere():
    one = mnd.MonadObject.identity(B3)
    m = mnd.thin_morphism(one, one, (0, 0, 0))
    r = mnd.doctrinal_mnd(m)
    assert not r.lhs and not r.rhs and r.holds
    assert r.detail["u_has_left_adjoint"] is False


def test_comonad_morphism_goes_through_op():
    co = mnd.MonadObject.thin(B3, (0, 0, 2), co=True, name="g")
    r = mnd.doctrinal_mnd(mnd.identity_morphism(co))
    assert r.holds and r.detail["via"] == "op"


def test_fun_doctrinal_on_identity_square():
    f, _, _ = mnd.em_pseudofunctor(mnd.identity_morphism(closure3()))
    r = mnd.doctrinal_fun(f)
    assert r.holds and r.lhs


def test_a4_identity():
    r = mnd.lifting_a4(mnd.identity_morphism(closure3()))
    assert r.holds


def test_a5_right_adjoint_lifts():
    one = mnd.MonadObject.identity(B3)
    m = mnd.thin_morphism(one, one, (0, 0, 2), name="g_drop_m")
    r = mnd.lifting_a5(m)
    assert r.holds and r.detail["rbar_found"] and r.detail["iso"]


def test_a5_hypothesis_fires_for_non_invertible_cell():
    m = mnd.thin_morphism(closure3(), mnd.MonadObject.identity(B3), (0, 1, 2), name="unit")
    assert not m.phi.is_invertible()
    with pytest.raises(HypothesisUnsatisfied):
        mnd.lifting_a5(m)
    assert mnd.lifting_a4(m).holds


def test_fusion_cells_are_monad_morphisms():
    G = g.g_drop_m()
    assert mnd.wood_fusion_opmorphism(G, 2, G.eps[2]).kind == "comonad-opmorphism"
    T = g.closure_t()
    assert mnd.t_fusion_morphism(T, 2, T.base.id(2)).kind == "morphism"


def test_suite_size():
    assert len(g.mnd_suite()) == 40
