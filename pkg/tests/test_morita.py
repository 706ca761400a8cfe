from __future__ import annotations

import dataclasses

import pytest

import oracles
from finstack import corpus
from finstack.core import (
    AxiomError, FiniteGroup, StructuralError, is_equivalence, is_representable, pair_groupoid,
    point,
)
from finstack.action import check_a2_a4
from finstack.bundles import flip_strict_bibundle, tensor_bibundles
from finstack.morita import (
    carrier_comparison_with_identity, check_bibundle, check_groupoid_rigidity,
    check_strictification, compare_with_strict_tensor, compose_bibundles, compose_stages,
    discrete_prequantization_example, fibre_bibundle, flip_bibundle, identity_bibundle,
    is_biprincipal, lift_strict_bibundle, prequantization_data, product_projection_bibundle,
    strictify_if_groupoid, subgroup, underlying_groupoid,
)

PRES = corpus.presentations()
BIBUNDLES = corpus.stacky_bibundles()
Z2, Z4 = corpus.Z2, corpus.Z4


# check_bibundle --------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(BIBUNDLES))
def test_corpus_bibundles_are_coherent(name):
    bb = BIBUNDLES[name]
    assert check_bibundle(bb)
    assert oracles.weak_right_action_ok(bb.right)


def test_mutated_tau_breaks_the_left_diagram():
    bb = BIBUNDLES["identity/cm-Z2-to-point"]
    X = bb.X
    tau = dict(bb.tau)
    key = (0, 0, 0)
    tau[key] = next(a for a in X.hom(X.src[tau[key]], X.tgt[tau[key]]) if a != tau[key])
    v = check_bibundle(dataclasses.replace(bb, tau=tau))
    assert not v and v.witness.law == "g1g1'xg2"


def test_sides_must_match():
    bb = BIBUNDLES["identity/group-Z/2"]
    with pytest.raises(StructuralError):
        check_bibundle(dataclasses.replace(bb, left=bb.right))


# biprincipality ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(n for n in BIBUNDLES if n != "fibre/discrete-2"))
def test_corpus_bibundles_are_biprincipal(name):
    v = is_biprincipal(BIBUNDLES[name])
    assert v and v.details["left"] and v.details["right"]


def test_fibre_of_a_disconnected_base_is_not_biprincipal():
    v = is_biprincipal(BIBUNDLES["fibre/discrete-2"])
    assert not v and v.witness.law == "right:epi"
    assert v.details["left"] and not v.details["right"]


def test_fibre_of_the_pair_groupoid():
    bb = fibre_bibundle(PRES["pair-2"], 0)
    assert bb.X.n_objects == 2 and bb.sg2.G.n_objects == 1
    assert check_bibundle(bb) and is_biprincipal(bb)


def test_fibre_needs_a_base_point():
    with pytest.raises(StructuralError):
        fibre_bibundle(PRES["pair-2"], 5)


# flip -----------------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(BIBUNDLES))
def test_flip_is_a_bibundle_with_swapped_sides(name):
    bb = BIBUNDLES[name]
    f = flip_bibundle(bb)
    assert check_bibundle(f)
    assert (f.sg1, f.sg2) == (bb.sg2, bb.sg1)
    assert bool(is_biprincipal(f)) == bool(is_biprincipal(bb))


@pytest.mark.parametrize("name", ["identity/skeletal-Z2-Z2-cocycle", "fibre/pair-3", "prequantization/Z/4-2Z/4"])
def test_double_flip_returns_the_actions(name):
    bb = BIBUNDLES[name]
    ff = flip_bibundle(flip_bibundle(bb))
    assert check_bibundle(ff)
    assert all(ff.left.act(g, x) == bb.left.act(g, x) for g, x in bb.left.pairs())
    assert all(ff.right.act(x, g) == bb.right.act(x, g) for x, g in bb.right.pairs())


# composition ------------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["identity/group-Z/2", "identity/pair-2", "identity/cm-Z2-into-Z4",
                                  "identity/skeletal-Z2-Z2-cocycle", "fibre/pair-2", "strict/pair-2-to-point"])
def test_composing_with_the_identity(name):
    bb = BIBUNDLES[name]
    stages = compose_stages(bb, identity_bibundle(bb.sg2))
    assert check_a2_a4(stages.middle)
    assert check_bibundle(stages.bibundle) and is_biprincipal(stages.bibundle)
    F = carrier_comparison_with_identity(bb, stages)
    assert is_equivalence(F) and oracles.equivalence(F)


def test_middle_presentations_must_agree():
    with pytest.raises(StructuralError):
        compose_stages(BIBUNDLES["identity/group-Z/2"], BIBUNDLES["identity/group-Z/3"])


def test_chain_through_the_point_matches_the_strict_tensor():
    first = corpus.strict_bibundles()["pair-2-to-point"]
    second = corpus.strict_bibundles()["point-to-pair-3"]
    composite = compose_bibundles(lift_strict_bibundle(first), lift_strict_bibundle(second))
    assert composite.X.n_objects == 6
    assert check_bibundle(composite) and is_biprincipal(composite)
    assert compare_with_strict_tensor(composite, tensor_bibundles(first, second))


def test_quotient_2group_composed_with_its_flip():
    bb = BIBUNDLES["identity/cm-Z2-into-Z4"]
    composite = compose_bibundles(bb, flip_bibundle(bb))
    assert check_bibundle(composite) and is_biprincipal(composite)


def test_fibre_composed_with_its_flip_is_biprincipal_over_the_pair_groupoid():
    bb = BIBUNDLES["fibre/pair-2"]
    composite = compose_bibundles(bb, flip_bibundle(bb))
    assert composite.sg1 is bb.sg1
    assert check_bibundle(composite) and is_biprincipal(composite)


def test_strict_unit_composed_with_a_strict_bibundle():
    unit = corpus.strict_bibundles()["unit-pair-2"]
    collapse = corpus.strict_bibundles()["pair-2-to-point"]
    composite = compose_bibundles(lift_strict_bibundle(unit), lift_strict_bibundle(collapse))
    assert compare_with_strict_tensor(composite, tensor_bibundles(unit, collapse))
    with pytest.raises(StructuralError):
        compare_with_strict_tensor(composite, flip_strict_bibundle(flip_strict_bibundle(unit)))


# strictification and rigidity -------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(corpus.strictification_cases()))
def test_strictification(name):
    bb = corpus.strictification_cases()[name]
    F = strictify_if_groupoid(bb)
    assert check_strictification(bb, F)
    assert check_groupoid_rigidity(bb)
    assert is_representable(bb.X) and is_representable(bb.sg2.G)


def test_strictification_detects_a_wrong_map():
    bb = corpus.strictification_cases()["identity/pair-2"]
    F = strictify_if_groupoid(bb)
    swapped = dataclasses.replace(F, on_objects=tuple(reversed(F.on_objects)),
                                  on_arrows=tuple(reversed(F.on_arrows)))
    assert not check_strictification(bb, swapped)


def test_projection_onto_a_product_with_a_group_is_not_biprincipal():
    bb = product_projection_bibundle(pair_groupoid(2), PRES["group-Z/2"])
    assert check_bibundle(bb)
    assert not is_biprincipal(bb)
    with pytest.raises(AxiomError):
        check_groupoid_rigidity(bb)


def test_strictification_needs_a_strict_source():
    with pytest.raises(StructuralError):
        underlying_groupoid(PRES["cm-Z2-to-point"])
    with pytest.raises(StructuralError):
        product_projection_bibundle(point(), PRES["pair-2"])


def test_underlying_groupoid_round_trips():
    K = underlying_groupoid(PRES["pair-3"])
    assert (K.n_objects, K.n_arrows) == (3, 9) and oracles.groupoid_ok(K)


# finite prequantization analogue ---------------------------------------------------------


@pytest.mark.parametrize("K,H,n", [(Z2, (0, 1), 2), (Z4, (0, 2), 2), (Z2, (0,), 2), (Z4, (0, 2), 3)])
def test_prequantization_examples(K, H, n):
    quotient, gauge, bb = prequantization_data(K, H, n)
    assert gauge.M.n_objects == n and quotient.M.n_objects == 1
    assert bb.X.n_objects == n * K.order
    assert discrete_prequantization_example(K, H, n)


def test_prequantization_needs_an_abelian_group():
    from itertools import permutations
    perms = list(permutations(range(3)))
    index = {q: i for i, q in enumerate(perms)}
    S3 = FiniteGroup(tuple(tuple(index[tuple(a[b[k]] for k in range(3))] for b in perms) for a in perms))
    with pytest.raises(StructuralError):
        prequantization_data(S3, (0,), 2)


def test_subgroups():
    H, incl = subgroup(Z4, (0, 2))
    assert H.order == 2 and incl == (0, 2)
    with pytest.raises(StructuralError, match="not closed"):
        subgroup(Z4, (0, 1))
    with pytest.raises(StructuralError, match="identity"):
        subgroup(Z4, (1, 3))
