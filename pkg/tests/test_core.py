from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from finstack import corpus
from finstack.core import (
    GROUPOID_LAWS, AxiomError, FiniteGroup, FiniteGroupoid, NatIso, StructuralError, Verdict,
    check_weak_product_comparison, comma_projections, compose_functors, constant_functor,
    discrete_groupoid, empty_groupoid, functor_from, group_groupoid, group_set_action,
    identity_functor, identity_natiso, inverse_natiso, is_equivalence, is_essentially_surjective,
    is_faithful, is_free, is_full, is_fully_faithful, is_representable, iso_comma, isotropy,
    object_inclusion, pair_groupoid, point, product_groupoid, product_projections, quasi_inverse,
    replay, restrict_groupoid, set_action_from, strict_fibred_product, translation_groupoid,
    validate_functor, validate_groupoid, validate_natiso, vertical_compose, weak_fibred_product,
)

Z2 = FiniteGroup.cyclic(2)


def point_into(G, x):
    return functor_from(point(), G, lambda o: x, lambda f: G.unit[x])


# strategies ------------------------------------------------------------------


@st.composite
def involutions(draw, max_points=5):
    n = draw(st.integers(1, max_points))
    perm = draw(st.permutations(range(n)))
    k = draw(st.integers(0, n // 2))
    swap = list(range(n))
    for i in range(k):
        a, b = perm[2 * i], perm[2 * i + 1]
        swap[a], swap[b] = b, a
    return n, tuple(swap)


def swap_action(n, swap):
    return group_set_action(Z2, n, lambda x, g: swap[x] if g else x)


@st.composite
def small_groupoids(draw):
    kind = draw(st.sampled_from(["discrete", "pair", "group", "translation", "product"]))
    if kind == "discrete":
        return discrete_groupoid(draw(st.integers(0, 4)))
    if kind == "pair":
        return pair_groupoid(draw(st.integers(1, 3)))
    if kind == "group":
        return group_groupoid(FiniteGroup.cyclic(draw(st.integers(1, 4))))
    if kind == "translation":
        return translation_groupoid(swap_action(*draw(involutions(4))))
    left = draw(st.sampled_from([pair_groupoid(2), group_groupoid(Z2), discrete_groupoid(2)]))
    right = draw(st.sampled_from([pair_groupoid(2), group_groupoid(Z2), point()]))
    return product_groupoid(left, right)


# validate_groupoid -------------------------------------------------------------


def test_discrete_three_objects_passes():
    assert validate_groupoid(discrete_groupoid(3))


def test_pair_groupoid_on_two_points():
    P = pair_groupoid(2)
    assert P.n_arrows == 4
    assert validate_groupoid(P)


def test_redirected_composition_fails_with_replayable_witness():
    P = pair_groupoid(2)
    comp = dict(P.comp)
    key = (P.arr((1, 0)), P.arr((0, 1)))  # 0 -> 1 -> 0 should be the unit at 1
    comp[key] = P.arr((1, 0))
    broken = P.with_tables(comp=comp)
    v = validate_groupoid(broken)
    assert not v
    assert v.witness.law in {"comp-endpoints", "left-unit", "right-unit", "left-inverse",
                             "right-inverse", "associativity"}
    assert replay(broken, GROUPOID_LAWS, v.witness)
    assert not oracles.groupoid_ok(broken)


def test_out_of_range_identifier_is_structural():
    with pytest.raises(StructuralError):
        FiniteGroupoid(1, (0,), (3,), {(0, 0): 0}, (0,), (0,))


def test_verdict_witness_iff_failed():
    with pytest.raises(ValueError):
        Verdict(True, Verdict.fail("x").witness)
    assert Verdict.fail("law", 1, 2).as_dict() == {"passed": False, "witness": {"law": "law", "ids": [1, 2]},
                                                   "details": {}}
    assert Verdict.ok().as_dict() == {"passed": True, "witness": None, "details": {}}


def test_empty_groupoid_is_legal_everywhere():
    E = empty_groupoid()
    assert validate_groupoid(E) and is_representable(E)
    assert is_equivalence(identity_functor(E))


@settings(max_examples=60, deadline=None)
@given(small_groupoids())
def test_constructed_groupoids_validate(G):
    assert bool(validate_groupoid(G)) == oracles.groupoid_ok(G) is True


# iso_comma ---------------------------------------------------------------------


def test_comma_of_identity_on_discrete_is_the_diagonal():
    D = discrete_groupoid(2)
    C = iso_comma(identity_functor(D), identity_functor(D))
    assert (C.n_objects, C.n_arrows) == (2, 2)
    pr1, _, _ = comma_projections(C, identity_functor(D), identity_functor(D))
    assert is_equivalence(pr1)


def test_comma_of_two_point_inclusions_into_pair():
    P = pair_groupoid(2)
    C = iso_comma(point_into(P, 0), point_into(P, 1))
    assert C.n_objects == 1 and is_representable(C)


def test_comma_of_point_into_bz2_is_a_torsor():
    B = group_groupoid(Z2)
    C = iso_comma(point_into(B, 0), point_into(B, 0))
    assert (C.n_objects, C.n_arrows) == (2, 2)
    assert validate_groupoid(C)


def test_comma_rejects_mismatched_codomains():
    with pytest.raises(StructuralError):
        iso_comma(identity_functor(point()), identity_functor(pair_groupoid(2)))


def test_comma_projections_give_a_natural_isomorphism():
    T = translation_groupoid(corpus.set_actions()["Z/2-on-3-mixed"])
    B = group_groupoid(Z2)
    F = functor_from(T, B, lambda o: 0, lambda f: T.alabel(f)[1])
    C = iso_comma(F, point_into(B, 0))
    _, _, eta = comma_projections(C, F, point_into(B, 0))
    assert validate_natiso(eta)


def _swap_comma(F, G):
    """``iso_comma(F, G) -> iso_comma(G, F)``, ``(x, a, z) -> (z, a^-1, x)``."""
    C, D = iso_comma(F, G), iso_comma(G, F)
    H = F.cod
    return functor_from(
        C, D, lambda o: D.obj((C.olabel(o)[2], H.inv[C.olabel(o)[1]], C.olabel(o)[0])),
        lambda f: D.arr((C.alabel(f)[1], C.alabel(f)[0], H.inv[C.alabel(f)[2]])))


@settings(max_examples=40, deadline=None)
@given(involutions(4), st.integers(0, 1))
def test_comma_is_symmetric_up_to_equivalence(inv, which):
    T = translation_groupoid(swap_action(*inv))
    B = group_groupoid(Z2)
    F = functor_from(T, B, lambda o: 0, lambda f: T.alabel(f)[1])
    G = point_into(B, 0) if which else identity_functor(B)
    S = _swap_comma(F, G)
    assert validate_functor(S) and is_equivalence(S) and oracles.equivalence(S)


# equivalences ------------------------------------------------------------------


def test_identity_is_an_equivalence():
    assert is_equivalence(identity_functor(pair_groupoid(3)))


def test_collapse_of_pair_groupoid_is_an_equivalence():
    F = constant_functor(pair_groupoid(2), point(), 0)
    assert is_equivalence(F) and oracles.equivalence(F)


def test_inclusion_of_one_object_into_pair_groupoid():
    F = point_into(pair_groupoid(2), 0)
    assert is_fully_faithful(F) and is_essentially_surjective(F) and is_equivalence(F)
    assert oracles.equivalence(F)


def test_collapse_of_bz2_is_full_not_faithful():
    F = constant_functor(group_groupoid(Z2), point(), 0)
    assert is_full(F)
    v = is_faithful(F)
    assert not v and v.witness.law == "faithful"


def test_missed_component_is_named():
    F = point_into(discrete_groupoid(2), 0)
    v = is_essentially_surjective(F)
    assert not v and v.witness.ids == (1,)


@settings(max_examples=40, deadline=None)
@given(small_groupoids(), st.data())
def test_equivalence_verdict_matches_hom_count_oracle(G, data):
    x = data.draw(st.integers(0, max(G.n_objects - 1, 0)))
    candidates = [identity_functor(G), constant_functor(G, point(), 0)]
    if G.n_objects:
        candidates.append(point_into(G, x))
    for F in candidates:
        assert bool(is_equivalence(F)) == oracles.equivalence(F)
        assert bool(is_faithful(F)) == oracles.faithful(F)
        assert bool(is_full(F)) == oracles.full(F)


@settings(max_examples=40, deadline=None)
@given(small_groupoids())
def test_quasi_inverse_of_an_equivalence_is_an_equivalence(G):
    if G.n_objects == 0:
        return
    F = point_into(G, 0) if oracles.equivalence(point_into(G, 0)) else identity_functor(G)
    Q = quasi_inverse(F)
    assert validate_functor(Q) and is_equivalence(Q)
    assert is_equivalence(compose_functors(F, Q))


def test_quasi_inverse_requires_an_equivalence():
    with pytest.raises(AxiomError):
        quasi_inverse(point_into(discrete_groupoid(2), 0))


# natural isomorphisms -----------------------------------------------------------


def test_natiso_operations():
    F = identity_functor(pair_groupoid(2))
    eta = identity_natiso(F)
    assert validate_natiso(eta)
    assert validate_natiso(vertical_compose(eta, inverse_natiso(eta)))


def test_natiso_component_shape_and_abelian_conjugation():
    P = pair_groupoid(2)
    G = identity_functor(P)
    v = validate_natiso(NatIso(G, G, (P.arr((1, 0)), P.unit[1])))
    assert not v and v.witness.law == "component-shape"
    # in an abelian group every element is a natural automorphism of the identity
    F = identity_functor(group_groupoid(FiniteGroup.cyclic(3)))
    assert validate_natiso(NatIso(F, F, (1,)))


# representability ---------------------------------------------------------------


def test_representability_examples():
    assert is_representable(discrete_groupoid(3))
    assert is_representable(pair_groupoid(3))
    v = is_representable(group_groupoid(Z2))
    assert not v and v.witness.ids == (0, 1)


# translation groupoids -----------------------------------------------------------


def test_swap_translation_groupoid():
    T = translation_groupoid(group_set_action(Z2, 2, lambda x, g: x ^ g))
    assert (T.n_objects, T.n_arrows) == (2, 4)
    assert len(set(T.component)) == 1 and is_representable(T)


def test_trivial_action_on_a_point_has_full_stabiliser():
    T = translation_groupoid(group_set_action(Z2, 1, lambda x, g: x))
    assert T.n_objects == 1 and len(T.automorphisms(0)) == 2


def test_trivial_group_gives_a_discrete_groupoid():
    T = translation_groupoid(group_set_action(FiniteGroup.trivial(), 3, lambda x, g: x))
    assert T.n_arrows == 3 and is_representable(T)


def test_broken_action_is_rejected():
    G = group_groupoid(Z2)
    broken = set_action_from(G, 2, (0, 0), lambda x, g: 0)
    with pytest.raises(AxiomError) as info:
        translation_groupoid(broken)
    assert info.value.verdict.witness.law == "action-unit"


def test_left_translation_groupoid():
    sa = group_set_action(FiniteGroup.cyclic(3), 3, lambda g, x: (x + g) % 3, side="left")
    T = translation_groupoid(sa)
    assert validate_groupoid(T) and is_representable(T) and T.n_arrows == 9


@settings(max_examples=60, deadline=None)
@given(involutions(5))
def test_free_iff_representable(inv):
    sa = swap_action(*inv)
    T = translation_groupoid(sa)
    free = all(inv[1][x] != x for x in range(inv[0]))
    assert is_free(sa) == free == bool(is_representable(T)) == oracles.representable(T)


# fibred products ---------------------------------------------------------------


def test_weak_product_of_point_identities_is_a_point():
    W = weak_fibred_product(identity_functor(point()), identity_functor(point()))
    assert (W.n_objects, W.n_arrows) == (1, 1)


def test_weak_product_of_points_over_bz2_is_the_group_as_a_set():
    B = group_groupoid(Z2)
    a = b = point_into(B, 0)
    W = weak_fibred_product(a, b)
    assert (W.n_objects, W.n_arrows) == (2, 2) and is_representable(W)
    assert not is_equivalence(constant_functor(W, point(), 0))
    assert check_weak_product_comparison(a, b)


def test_weak_product_over_discrete_is_the_set_product():
    D = discrete_groupoid(2)
    a = functor_from(discrete_groupoid(3), D, lambda o: o % 2, lambda f: f % 2)
    b = identity_functor(D)
    W = weak_fibred_product(a, b)
    assert W.n_objects == 3 and W.n_arrows == 3
    assert check_weak_product_comparison(a, b)


def test_strict_fibred_product_and_products():
    D, P = discrete_groupoid(2), pair_groupoid(2)
    prod = product_groupoid(D, discrete_groupoid(3))
    assert prod.n_objects == prod.n_arrows == 6
    pr1, pr2 = product_projections(D, discrete_groupoid(3), prod)
    assert validate_functor(pr1) and validate_functor(pr2)
    S = strict_fibred_product(object_inclusion(P), object_inclusion(P))
    assert S.n_objects == 2 and S.n_arrows == 2


def test_isotropy_and_restriction():
    assert isotropy(pair_groupoid(3), 1).n_arrows == 1
    T = translation_groupoid(group_set_action(Z2, 1, lambda x, g: x))
    assert isotropy(T, 0).n_arrows == 2
    R = restrict_groupoid(pair_groupoid(3), [0, 2])
    assert R.n_objects == 2 and R.n_arrows == 4 and validate_groupoid(R)
    with pytest.raises(StructuralError):
        restrict_groupoid(pair_groupoid(2), [5])
