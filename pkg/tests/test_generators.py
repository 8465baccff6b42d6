from __future__ import annotations

import pytest

from cloakforge import dsl
from cloakforge import fincat as fc
from cloakforge import generators as g
from cloakforge.errors import UnknownRecipe
from cloakforge.fusion import is_group


def test_heyting_lattices_up_to_five():
    names = [L.name for L in g.heyting_lattices(5)]
    # distributive lattices with 1..5 elements: 1, 1, 1, 2, 3
    assert len(names) == 8
    assert {"chain1", "chain2", "chain3", "chain4", "diamond", "chain5"} <= set(names)


def test_heyting_chain_recipe_is_chain3():
    [(name, L)] = dsl.recipe_objects("heyting-chain(3)")
    assert name == "chain3"
    assert fc.find_isomorphism(L.base, g.chain3().base) is not None


def test_interior_operators_of_diamond_include_g_meet_a():
    [(_, D)] = dsl.recipe_objects("diamond")
    imgs = [G.g.functor.obj_map for _, G in dsl.recipe_objects("interior-operators(diamond)")]
    assert g.g_meet_a().g.functor.obj_map in imgs
    assert all(fc.validate_functor(fc.Functor.from_object_map(D.base, D.base, img)) == [] for img in imgs)


def test_all_monoids_of_order_two():
    ms = dsl.recipe_objects("all-monoids(2)")
    assert len(ms) == 2
    assert all(len(H.elements) == 2 for _, H in ms)
    # Z/2 and the two-element monoid with an idempotent
    assert sorted(is_group(H) for _, H in ms) == [False, True]


def test_all_monoids_up_to_four():
    assert len(dsl.recipe_objects("all-monoids(<=4)")) == 45


def test_unknown_recipe():
    with pytest.raises(UnknownRecipe):
        dsl.recipe_objects("no-such-thing(3)")


def test_grid_sizes():
    # one interior operator on heyting5_2 is not lax for the meet, so it is left out
    assert len(g.heyting_grid(5)) == 65
    assert len(g.monad_grid(5)) == 66
    assert len(g.adjoint_grid(5)) == 34


def test_interior_maps_are_deflationary_idempotent():
    for L in g.heyting_lattices(4):
        B = L.base
        for img in g.interior_maps(B):
            assert all(B.leq(img[x], x) and img[img[x]] == img[x] for x in B.obj_ids())


def test_closure_maps_are_inflationary_idempotent():
    for L in g.heyting_lattices(4):
        B = L.base
        for img in g.closure_maps(B):
            assert all(B.leq(x, img[x]) and img[img[x]] == img[x] for x in B.obj_ids())


def test_named_operators():
    assert g.g_drop_m().g.functor.obj_map == (0, 0, 2)
    assert g.g_meet_a().g.functor.obj_map == (0, 1, 0, 1)
    assert g.closure_t().functor.obj_map == (0, 2, 2)


def test_cyclic_group():
    H = g.cyclic_group(3)
    assert H.mul[(1, 2)] == 0
