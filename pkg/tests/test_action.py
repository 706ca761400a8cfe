from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from finstack import corpus
from finstack.core import (
    StructuralError, constant_functor, discrete_groupoid, functor_from, group_groupoid,
    group_set_action, identity_functor, is_faithful, point, replay,
)
from finstack.action import (
    EquivariantMorphism, FiberedAction, action_laws, action_map_equivariant, action_projection,
    check_a2_a4, check_action_on_fibers, check_equivariant, compose_equivariant,
    diagonal_action, fibers_of_strict_map, identity_equivariant, invert_action, is_1free,
    is_weakly_representable, lift_set_action, self_action, trivial_action,
)
from finstack.prequotient import canonical_gamma0

Z2 = corpus.Z2
PRES = corpus.presentations()
ACTIONS = corpus.weak_actions()


def orbits(wa) -> int:
    """Number of orbits of a strict action on the objects of its carrier."""
    parent = list(wa.X.objects)

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in wa.pairs():
        x = a if wa.is_right else b
        parent[find(x)] = find(wa.act(a, b))
    return len({find(x) for x in wa.X.objects})


# check_a2_a4 ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(ACTIONS))
def test_corpus_actions_satisfy_the_axioms(name):
    wa = ACTIONS[name]
    assert check_a2_a4(wa)
    if wa.is_right:
        assert oracles.weak_right_action_ok(wa)


def test_strict_group_acting_on_itself():
    wa = self_action(PRES["group-Z/2"])
    assert check_a2_a4(wa)
    assert all(wa.act(x, g) == x ^ g for x, g in wa.pairs())


def test_skeletal_self_action_has_nontrivial_beta():
    wa = ACTIONS["skeletal-Z2-Z2-cocycle/right-self"]
    assert check_a2_a4(wa)
    assert any(wa.X.unit[wa.X.src[b]] != b for b in wa.beta.values())


def test_mutating_one_beta_component_breaks_xghl():
    wa = ACTIONS["skeletal-Z2-Z2-cocycle/right-self"]
    X = wa.X
    beta = dict(wa.beta)
    key = (1, 1, 1)
    beta[key] = next(a for a in X.hom(X.src[beta[key]], X.tgt[beta[key]]) if a != beta[key])
    broken = dataclasses.replace(wa, beta=beta)
    v = check_a2_a4(broken)
    assert not v and v.witness.law == "xghl"
    assert replay(broken, action_laws(broken), v.witness)
    assert not oracles.weak_right_action_ok(broken)


def test_moment_breakage_is_reported_with_the_functor_prefix():
    wa = ACTIONS["pair-2/right-self"]
    mu = dataclasses.replace(wa.mu, on_objects=(1,) + wa.mu.on_objects[1:])
    v = check_a2_a4(dataclasses.replace(wa, mu=mu))
    assert not v and v.witness.law.startswith("mu:")


@pytest.mark.parametrize("name", sorted(PRES))
def test_self_actions_on_both_sides(name):
    sg = PRES[name]
    for side in ("right", "left"):
        assert check_a2_a4(self_action(sg, side))


def test_trivial_action_needs_a_single_base_point():
    with pytest.raises(StructuralError):
        trivial_action(PRES["pair-2"], point())


# diagonal actions ----------------------------------------------------------------------


def test_diagonal_of_two_translations_is_free_with_two_orbits():
    r = self_action(PRES["group-Z/2"])
    d = diagonal_action(r, r)
    assert check_a2_a4(d)
    assert d.X.n_objects == 4 and orbits(d) == 2
    assert is_faithful(action_projection(d))


def test_mixed_diagonal_inverts_the_left_factor():
    sg = PRES["group-Z/2"]
    d = diagonal_action(self_action(sg, "right"), self_action(sg, "left"))
    assert check_a2_a4(d) and d.X.n_objects == 4 and orbits(d) == 2
    for o, g in d.pairs():
        x, y = d.X.olabel(o)
        assert d.X.olabel(d.act(o, g)) == (x ^ g, y ^ g)


def test_diagonal_of_trivial_actions_is_trivial():
    sg = PRES["cm-Z2-to-point"]
    t = trivial_action(sg, discrete_groupoid(2))
    d = diagonal_action(t, t)
    assert check_a2_a4(d)
    assert all(d.act(o, g) == o for o, g in d.pairs())


def test_diagonal_needs_a_common_presentation():
    with pytest.raises(StructuralError):
        diagonal_action(self_action(PRES["group-Z/2"]), self_action(PRES["group-Z/3"]))


@pytest.mark.parametrize("name", ["cm-identity", "skeletal-Z2-Z2-cocycle", "pair-2", "cm-Z2-into-Z4"])
def test_weak_diagonals_satisfy_the_axioms(name):
    sg = PRES[name]
    d = diagonal_action(self_action(sg, "right"), self_action(sg, "left"))
    assert check_a2_a4(d) and oracles.weak_right_action_ok(d)


# action projection, 1-freeness, weak representability -------------------------------------


def test_free_swap_has_injective_projection():
    D = action_projection(ACTIONS["strict/Z/2-on-2-free"])
    assert len(set(D.on_objects)) == len(D.on_objects)
    assert len(set(D.on_arrows)) == len(D.on_arrows)


def test_trivial_z2_on_a_point_has_non_injective_projection():
    wa = ACTIONS["strict/Z/2-on-1-trivial"]
    D = action_projection(wa)
    images = {wa.XG.olabel(o): D.cod.olabel(D.on_objects[o]) for o in wa.XG.objects}
    assert images == {(0, 0): (0, 0), (0, 1): (0, 0)}


def test_bz2_on_a_point():
    wa = corpus.bz2_trivial_on_point()
    D = action_projection(wa)
    assert not is_faithful(D)
    v = is_1free(wa)
    assert not v and v.witness.ids == (0, 0, 1)
    assert not is_weakly_representable(D)


def test_strict_actions_are_1free():
    for name in corpus.set_actions():
        assert is_1free(ACTIONS[f"strict/{name}"])


def test_identity_crossed_module_self_action_is_1free():
    assert is_1free(ACTIONS["cm-identity/right-self"])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_maps_between_discrete_groupoids_are_weakly_representable(n, m, data):
    table = data.draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n))
    F = functor_from(discrete_groupoid(n), discrete_groupoid(m), lambda x: table[x], lambda f: table[f])
    assert is_weakly_representable(F)


@pytest.mark.parametrize("name", sorted(ACTIONS))
def test_freeness_implications(name):
    wa = ACTIONS[name]
    D = action_projection(wa)
    faithful = oracles.faithful(D)
    assert bool(is_faithful(D)) == faithful
    if faithful:
        assert is_1free(wa)
    if is_weakly_representable(D):
        assert faithful


# inversion ---------------------------------------------------------------------------


def test_inverting_strict_left_translation():
    left = group_set_action(corpus.Z3, 3, lambda g, x: (x + g) % 3, side="left")
    wa = lift_set_action(left, PRES["group-Z/3"])
    r = invert_action(wa)
    assert r.is_right and check_a2_a4(r)
    assert all(r.act(x, g) == (x - g) % 3 for x, g in r.pairs())


@pytest.mark.parametrize("name", sorted(n for n, wa in ACTIONS.items() if not wa.is_right))
def test_inverted_left_actions_and_double_inversion(name):
    wa = ACTIONS[name]
    r = invert_action(wa)
    assert check_a2_a4(r) and oracles.weak_right_action_ok(r)
    back = invert_action(r)
    assert not back.is_right and check_a2_a4(back)
    assert all(back.act(g, x) == wa.act(g, x) for g, x in wa.pairs())


def test_inverting_right_actions():
    for name in ("skeletal-Z3-Z3-cocycle/right-self", "strict/Z/2-swaps-pair-2"):
        left = invert_action(ACTIONS[name])
        assert not left.is_right and check_a2_a4(left)


# equivariant morphisms -------------------------------------------------------------------


def test_identity_is_equivariant():
    assert check_equivariant(identity_equivariant(ACTIONS["skeletal-Z2-Z2-cocycle/right-self"]))


@pytest.mark.parametrize("name", ["group-Z/2/right-self", "strict/Z/2-on-3-mixed",
                                  "skeletal-Z2-Z2-cocycle/right-self", "cm-Z2-into-Z4/right-self"])
def test_action_map_is_equivariant_and_composes(name):
    wa = ACTIONS[name]
    prod, em = action_map_equivariant(wa)
    assert check_a2_a4(prod) and check_equivariant(em)
    composite = compose_equivariant(identity_equivariant(prod), compose_equivariant(em, identity_equivariant(wa)))
    assert check_equivariant(composite)


def test_mutated_delta_is_rejected():
    wa = ACTIONS["skeletal-Z2-Z2-cocycle/right-self"]
    em = identity_equivariant(wa)
    delta = dict(em.delta)
    key = (1, 1)
    X = wa.X
    delta[key] = next(a for a in X.hom(X.src[delta[key]], X.tgt[delta[key]]) if a != delta[key])
    v = check_equivariant(dataclasses.replace(em, delta=delta))
    assert not v and v.witness.law in {"delta-beta", "delta-epsilon"}


def test_equivariance_is_defined_between_right_actions():
    wa = ACTIONS["group-Z/2/left-self"]
    em = EquivariantMorphism(wa, wa, identity_functor(wa.X), {})
    with pytest.raises(StructuralError):
        check_equivariant(em)


# actions on fibres --------------------------------------------------------------------


def test_strict_action_on_the_fibres_of_its_quotient_map():
    wa = ACTIONS["strict/Z/2-on-2-free"]
    fa = fibers_of_strict_map(wa, constant_functor(wa.X, point(), 0))
    assert check_action_on_fibers(fa)


def test_canonical_gamma_for_the_swap():
    fa = canonical_gamma0(ACTIONS["strict/Z/2-on-2-free"])
    assert check_action_on_fibers(fa)


def test_character_as_gamma_and_its_mutation():
    sg = PRES["group-Z/2"]
    wa = trivial_action(sg, point())
    B = group_groupoid(Z2)
    P = functor_from(point(), B, lambda x: 0, lambda f: 0)
    gamma = {(0, g): g for g in sg.G.objects}
    assert check_action_on_fibers(FiberedAction(wa, P, gamma))
    # zero is also a character; breaking the unit entry is not
    gamma[0, 0] = 1
    v = check_action_on_fibers(FiberedAction(wa, P, gamma))
    assert not v and v.witness.law == "gamma-beta"


def test_non_invariant_map_is_refused():
    wa = ACTIONS["strict/Z/2-on-2-free"]
    with pytest.raises(StructuralError):
        fibers_of_strict_map(wa, identity_functor(wa.X))
