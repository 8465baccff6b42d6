from __future__ import annotations

import pytest

from cloakforge import generators as g
from cloakforge.claims import CLAIMS, expand, instance_kind, run_check, uses_enumeration, verify
from cloakforge.fusion import FiniteMonoid
from cloakforge.magmal import OpmagmalMonad
from cloakforge.procomonad import gamma_from


@pytest.mark.parametrize("cid", ["L2.4", "L2.5", "P3.3", "L3.5", "L3.8", "P3.9"])
def test_comonad_claims_hold_on_g_drop_m(cid):
    v = run_check(cid, g.g_drop_m())
    assert v.holds is True and v.status == "holds" and v.cells > 0


@pytest.mark.parametrize("cid", ["L2.4", "L3.8", "P3.9"])
def test_comonad_claims_hold_on_g_meet_a(cid):
    assert run_check(cid, g.g_meet_a()).holds is True


def test_theorem_on_g_meet_a_has_an_algebra_where_both_sides_fail():
    v = run_check("T5.12", gamma_from(g.g_meet_a()))
    assert v.holds is True
    both = [k for k, d in v.details["per_algebra"].items() if not d["hopf"] and d["creates"] is False]
    assert both
    assert any(not d["hopf"] for d in v.details["per_algebra"].values())


def test_theorem_on_g_drop_m_is_hopf_everywhere():
    v = run_check("T5.12", gamma_from(g.g_drop_m()))
    assert v.holds is True
    assert all(d["hopf"] and d["creates"] for d in v.details["per_algebra"].values())


def test_monoid_claim_on_a_non_group():
    # the two-element monoid with an idempotent: not a group, not Hopf, so the claim holds
    H = FiniteMonoid.from_table([[0, 1], [1, 1]])
    v = run_check("EX4", H)
    assert v.holds is True and v.details["group"] is False


def test_monoid_claim_on_a_group():
    v = run_check("EX4", g.cyclic_group(3))
    assert v.holds is True and v.details["group"] is True


def test_instance_kinds():
    assert instance_kind(g.g_drop_m()) == "comonad"
    assert instance_kind(g.closure_t()) == "monad"
    assert instance_kind(g.chain3()) == "magmal"
    assert instance_kind(g.cyclic_group(2)) == "monoid"
    assert instance_kind(gamma_from(g.g_drop_m())) == "procomonad"


def test_magmal_input_expands_to_enumerated_operators():
    cells = expand(CLAIMS["L2.4"], g.chain3(), "chain3")
    assert cells and all(instance_kind(G) == "comonad" for _, G in cells)
    assert all(n.startswith("chain3/") for n, _ in cells)
    assert uses_enumeration("L2.4", g.chain3())
    assert not uses_enumeration("L2.4", g.g_drop_m())


def test_comonad_expands_to_its_procomonad():
    [(name, P)] = expand(CLAIMS["T5.12"], g.g_drop_m(), "g")
    assert name == "g_*" and instance_kind(P) == "procomonad"


def test_claim_with_no_matching_input_expands_to_nothing():
    assert verify("EX4", g.chain3(), "chain3") == []


def test_transfer_is_not_applicable_without_adjoint():
    # x -> x or a on the diamond has no right adjoint
    T = OpmagmalMonad.thin(g.diamond(), [1, 1, 3, 3])
    assert run_check("P4.2", T).holds is None


def test_transfer_holds_with_adjoint():
    D = g.diamond()
    ob = D.base.obj_index
    T = OpmagmalMonad.thin(D, [ob("0"), ob("a"), ob("1"), ob("1")])
    assert run_check("P4.2", T).holds is True
