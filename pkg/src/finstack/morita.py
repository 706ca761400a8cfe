"""Stacky bibundles: a left action of ``sg1`` and a right action of ``sg2`` on one carrier.

``tau[g1, x, g2]: g1(x g2) -> (g1 x) g2`` makes the two actions commute.  Both
actions are stored with their own orientation; the left action must preserve
the right moment and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import (
    AxiomError, FiniteGroup, FiniteGroupoid, GroupoidFunctor, Law, StructuralError, Verdict,
    check_laws, discrete_groupoid, functor_from, is_equivalence, is_representable,
    pair_groupoid, restrict_groupoid, validate_functor,
)
from .action import (
    FiberedAction, WeakAction, check_a2_a4, check_principal_bundle, diagonal_action,
    fibers_of_strict_map, invert_action, lift_set_action, make_action, self_action,
)
from .bundles import StrictBibundle
from .prequotient import PrequotientGroupoid, check_principal, prequotient
from .weakgroupoid import (
    CrossedModuleData, StackyGroupoidPresentation, from_crossed_module, isotropy_2group,
    product_presentation, strict_presentation,
)


@dataclass(frozen=True)
class StackyBibundle:
    left: WeakAction
    right: WeakAction
    tau: Mapping[tuple[int, int, int], int]
    name: str = ""

    __hash__ = None

    @property
    def sg1(self) -> StackyGroupoidPresentation:
        return self.left.sg

    @property
    def sg2(self) -> StackyGroupoidPresentation:
        return self.right.sg

    @property
    def X(self) -> FiniteGroupoid:
        return self.left.X

    def triples(self) -> Iterable[tuple[int, int, int]]:
        """``(g1, x, g2)`` with ``s(g1) = mu1(x)`` and ``t(g2) = mu2(x)``."""
        sg1, sg2 = self.sg1, self.sg2
        by_src: dict[int, list[int]] = {}
        for g1 in sg1.G.objects:
            by_src.setdefault(sg1.src(g1), []).append(g1)
        by_tgt: dict[int, list[int]] = {}
        for g2 in sg2.G.objects:
            by_tgt.setdefault(sg2.trg(g2), []).append(g2)
        for x in self.X.objects:
            for g1 in by_src.get(self.left.moment(x), ()):
                for g2 in by_tgt.get(self.right.moment(x), ()):
                    yield g1, x, g2


def make_bibundle(left: WeakAction, right: WeakAction, tau, name: str = "") -> StackyBibundle:
    """``tau(g1, x, g2)`` is tabulated over all triples."""
    shell = StackyBibundle(left, right, {}, name)
    return StackyBibundle(left, right, {trip: tau(*trip) for trip in shell.triples()}, name)


# ---------------------------------------------------------------------------
# coherence


def _has(X, f, x, y):
    return X.src[f] == x and X.tgt[f] == y


def _left_keeps_right_moment(bb, ids):
    g1, x = ids
    return bb.right.moment(bb.left.act(g1, x)) == bb.right.moment(x)


def _right_keeps_left_moment(bb, ids):
    x, g2 = ids
    return bb.left.moment(bb.right.act(x, g2)) == bb.left.moment(x)


def _tau_shape(bb, ids):
    g1, x, g2 = ids
    L, R = bb.left, bb.right
    return _has(bb.X, bb.tau[ids], L.act(g1, R.act(x, g2)), R.act(L.act(g1, x), g2))


def _tau_arrow_cases(bb):
    G1, G2, X = bb.sg1.G, bb.sg2.G, bb.X
    for g1, x, g2 in bb.triples():
        for j1 in G1.arrows_from(g1):
            for b in X.arrows_from(x):
                for j2 in G2.arrows_from(g2):
                    yield j1, b, j2


def _tau_natural(bb, ids):
    j1, b, j2 = ids
    L, R, X = bb.left, bb.right, bb.X
    G1, G2 = bb.sg1.G, bb.sg2.G
    src = (G1.src[j1], X.src[b], G2.src[j2])
    tgt = (G1.tgt[j1], X.tgt[b], G2.tgt[j2])
    return (X.comp[bb.tau[tgt], L.act_arr(j1, R.act_arr(b, j2))]
            == X.comp[R.act_arr(L.act_arr(j1, b), j2), bb.tau[src]])


def _left_quads(bb):
    sg1 = bb.sg1
    for g1p, x, g2 in bb.triples():
        for g1 in sg1.G.objects:
            if sg1.src(g1) == sg1.trg(g1p):
                yield g1, g1p, x, g2


def _right_quads(bb):
    sg2 = bb.sg2
    for g1, x, g2 in bb.triples():
        for g2p in sg2.G.objects:
            if sg2.trg(g2p) == sg2.src(g2):
                yield g1, x, g2, g2p


def _g1g1xg2(bb, ids):
    g1, g1p, x, g2 = ids
    L, R, X = bb.left, bb.right, bb.X
    sg1, sg2 = bb.sg1, bb.sg2
    lhs = X.comp[bb.tau[sg1.mul(g1, g1p), x, g2], X.inv[L.beta[g1, g1p, R.act(x, g2)]]]
    rhs = X.compose(R.act_arr(X.inv[L.beta[g1, g1p, x]], sg2.idt(g2)),
                    bb.tau[g1, L.act(g1p, x), g2],
                    L.act_arr(sg1.idt(g1), bb.tau[g1p, x, g2]))
    return lhs == rhs


def _g1xg2g2(bb, ids):
    g1, x, g2, g2p = ids
    L, R, X = bb.left, bb.right, bb.X
    sg1, sg2 = bb.sg1, bb.sg2
    lhs = X.comp[R.beta[L.act(g1, x), g2, g2p], bb.tau[g1, x, sg2.mul(g2, g2p)]]
    rhs = X.compose(R.act_arr(bb.tau[g1, x, g2], sg2.idt(g2p)),
                    bb.tau[g1, R.act(x, g2), g2p],
                    L.act_arr(sg1.idt(g1), R.beta[x, g2, g2p]))
    return lhs == rhs


def _1xg2(bb, ids):
    x, g2 = ids
    L, R, X = bb.left, bb.right, bb.X
    one = L.unit_at(x)
    lhs = X.comp[R.act_arr(L.epsilon[x], bb.sg2.idt(g2)), bb.tau[one, x, g2]]
    return lhs == L.epsilon[R.act(x, g2)]


def _g1x1(bb, ids):
    g1, x = ids
    L, R, X = bb.left, bb.right, bb.X
    one = R.unit_at(x)
    lhs = X.comp[R.epsilon[L.act(g1, x)], bb.tau[g1, x, one]]
    return lhs == L.act_arr(bb.sg1.idt(g1), R.epsilon[x])


BIBUNDLE_LAWS: tuple[Law, ...] = (
    Law("left-fibres", lambda bb: iter(bb.left.pairs()), _left_keeps_right_moment),
    Law("right-fibres", lambda bb: iter(bb.right.pairs()), _right_keeps_left_moment),
    Law("tau-shape", lambda bb: iter(bb.triples()), _tau_shape),
    Law("tau-natural", _tau_arrow_cases, _tau_natural),
    Law("g1g1'xg2", _left_quads, _g1g1xg2),
    Law("g1xg2g2'", _right_quads, _g1xg2g2),
    Law("1xg2", lambda bb: iter(bb.right.pairs()), _1xg2),
    Law("g1x1", lambda bb: iter(bb.left.pairs()), _g1x1),
)


def check_bibundle(bb: StackyBibundle) -> Verdict:
    """Both actions, the fibre conditions, ``tau`` shape and naturality, then the four diagrams."""
    if bb.left.is_right or not bb.right.is_right:
        raise StructuralError("a bibundle needs a left action and a right action")
    if bb.left.X != bb.right.X:
        raise StructuralError("the two actions live on different carriers")
    for side, wa in (("left", bb.left), ("right", bb.right)):
        v = check_a2_a4(wa)
        if not v:
            return Verdict.fail(f"{side}:{v.witness.law}", *v.witness.ids)
    return check_laws(bb, BIBUNDLE_LAWS)


# ---------------------------------------------------------------------------
# principality


def right_bundle(bb: StackyBibundle) -> FiberedAction:
    """The right action on the fibres of the left moment."""
    return fibers_of_strict_map(bb.right, bb.left.mu)


def left_bundle(bb: StackyBibundle) -> FiberedAction:
    """The left action on the fibres of the right moment."""
    return fibers_of_strict_map(bb.left, bb.right.mu)


def is_biprincipal(bb: StackyBibundle) -> Verdict:
    """Principal over ``M1`` for the right action and over ``M2`` for the left action.

    The failing side is named in the witness law; ``details`` carries both verdicts
    and the principality of each action over its own prequotient.
    """
    right = check_principal_bundle(right_bundle(bb))
    left = check_principal_bundle(left_bundle(bb))
    details = {"right": bool(right), "left": bool(left),
               "right_over_quotient": bool(check_principal(bb.right)),
               "left_over_quotient": bool(check_principal(bb.left))}
    for side, v in (("right", right), ("left", left)):
        if not v:
            return Verdict(False, Verdict.fail(f"{side}:{v.witness.law}", *v.witness.ids).witness, details)
    return Verdict.ok(**details)


# ---------------------------------------------------------------------------
# constructions


def identity_bibundle(sg: StackyGroupoidPresentation) -> StackyBibundle:
    """``G`` with left and right multiplication and ``tau = alpha``."""
    return make_bibundle(self_action(sg, "left"), self_action(sg, "right"),
                         lambda g1, x, g2: sg.alpha[g1, x, g2], name=f"id({sg.name})")


def flip_bibundle(bb: StackyBibundle) -> StackyBibundle:
    """Both actions inverted; ``tau'(g2, x, g1) = tau(g1^-1, x, g2^-1)^-1``."""
    X = bb.X
    left, right = invert_action(bb.right), invert_action(bb.left)
    inv1, inv2 = bb.sg1.inv, bb.sg2.inv
    return make_bibundle(left, right, lambda g2, x, g1: X.inv[bb.tau[inv1(g1), x, inv2(g2)]],
                         name=f"flip({bb.name})")


def lift_strict_bibundle(sb: StrictBibundle) -> StackyBibundle:
    """A strict bibundle on a set as a stacky bibundle on the discrete groupoid, with ``tau`` units."""
    sg1, sg2 = strict_presentation(sb.G), strict_presentation(sb.H)
    left = lift_set_action(sb.left_action(), sg1)
    right = lift_set_action(sb.right_action(), sg2)
    X = left.X
    return make_bibundle(left, right, lambda g1, x, g2: X.unit[left.act(g1, right.act(x, g2))],
                         name="strict")


@dataclass(frozen=True)
class Composite:
    """The stages of a composition: the middle diagonal action, its prequotient and the result."""

    middle: WeakAction
    quotient: PrequotientGroupoid
    bibundle: StackyBibundle


def compose_stages(bb1: StackyBibundle, bb2: StackyBibundle) -> Composite:
    """``(X x_M Y) // G`` with the outer actions descended to classes.

    ``j1 . [g, (b1, b2)] = [g, ((j1 . b1) o tau1^-1, b2)]`` and
    ``[g, (b1, b2)] . j2 = [g, (b1, (b2 . j2) o tau2(g^-1, y, g2))]``; the new ``tau`` is a unit.
    """
    sg = bb1.sg2
    if bb2.sg1 is not sg and bb2.sg1 != sg:
        raise StructuralError("the middle presentations differ")
    middle = diagonal_action(bb1.right, bb2.left)
    pre = prequotient(middle)
    W, Z = middle.X, pre.carrier
    X, Y = bb1.X, bb2.X
    L1, R2 = bb1.left, bb2.right
    q = pre.q

    def split(o):
        return W.olabel(o)

    def splita(f):
        return W.alabel(f)

    def left_arr(j1, c):
        o, g, b = pre.representative(c)
        x, _ = split(o)
        b1, b2 = splita(b)
        c1 = X.comp[L1.act_arr(j1, b1), X.inv[bb1.tau[bb1.sg1.G.src[j1], x, g]]]
        return pre.cls(W.obj((L1.act(bb1.sg1.G.src[j1], x), split(o)[1])), g, W.arr((c1, b2)))

    def right_arr(c, j2):
        o, g, b = pre.representative(c)
        _, y = split(o)
        b1, b2 = splita(b)
        g2 = bb2.sg2.G.src[j2]
        c2 = Y.comp[R2.act_arr(b2, j2), bb2.tau[sg.inv(g), y, g2]]
        return pre.cls(W.obj((split(o)[0], R2.act(y, g2))), g, W.arr((b1, c2)))

    left = make_action(
        bb1.sg1, Z, moment=lambda o: L1.moment(split(o)[0]),
        act=lambda g1, o: W.obj((L1.act(g1, split(o)[0]), split(o)[1])),
        act_arr=left_arr,
        beta=lambda h, g, o: q.ar(W.arr((L1.beta[h, g, split(o)[0]], Y.unit[split(o)[1]]))),
        epsilon=lambda o: q.ar(W.arr((L1.epsilon[split(o)[0]], Y.unit[split(o)[1]]))),
        side="left", name=f"{bb1.name}*{bb2.name}-left")
    right = make_action(
        bb2.sg2, Z, moment=lambda o: R2.moment(split(o)[1]),
        act=lambda o, g2: W.obj((split(o)[0], R2.act(split(o)[1], g2))),
        act_arr=right_arr,
        beta=lambda o, g, h: q.ar(W.arr((X.unit[split(o)[0]], R2.beta[split(o)[1], g, h]))),
        epsilon=lambda o: q.ar(W.arr((X.unit[split(o)[0]], R2.epsilon[split(o)[1]]))),
        side="right", name=f"{bb1.name}*{bb2.name}-right")
    bb = make_bibundle(left, right, lambda g1, o, g2: Z.unit[left.act(g1, right.act(o, g2))],
                       name=f"{bb1.name}*{bb2.name}")
    return Composite(middle, pre, bb)


def compose_bibundles(bb1: StackyBibundle, bb2: StackyBibundle) -> StackyBibundle:
    return compose_stages(bb1, bb2).bibundle


def carrier_comparison_with_identity(bb: StackyBibundle, composite: Composite) -> GroupoidFunctor:
    """For ``bb * id``: the carrier ``(X x_M G) // G`` mapped to ``X`` by the right action."""
    pre, middle = composite.quotient, composite.middle
    W = middle.X
    R = bb.right
    X = bb.X
    values = []
    for grp in pre.members:
        images = set()
        for o, g, b in grp:
            x, y = W.olabel(o)
            b1, b2 = W.alabel(b)
            # [g, (b1, b2)] with b1: xg -> x', b2: g^-1 y -> y'; image x y -> x' y'
            gamma = X.comp[R.beta[x, g, middle.sg.mul(middle.sg.inv(g), y)],
                           R.act_arr(X.unit[x], _unit_move(middle.sg, g, y))]
            images.add(X.comp[R.act_arr(b1, b2), gamma])
        if len(images) != 1:
            raise AxiomError(Verdict.fail("carrier-comparison", *grp[0]))
        values.append(images.pop())
    return GroupoidFunctor(pre.carrier, X, tuple(R.act(*W.olabel(o)) for o in W.objects), tuple(values))


def _unit_move(sg, g, y):
    """``y -> g(g^-1 y)`` in ``G``: ``alpha^-1 o (iota_r(g)^-1 . id) o lam^-1``."""
    G = sg.G
    return G.compose(G.inv[sg.alpha[g, sg.inv(g), y]], sg.mul_arr(G.inv[sg.iota_r[g]], sg.idt(y)),
                     G.inv[sg.lam[y]])


def compare_with_strict_tensor(composite: StackyBibundle, tensor: StrictBibundle) -> Verdict:
    """The composite of two lifted strict bibundles against their strict tensor product.

    Each tensor point is labelled by a pair of carrier points; its class in the composite
    carrier gives a functor onto the discrete tensor, which must be an equivalence
    matching both moments and both actions.
    """
    Z = composite.X
    cls = Z.component
    labels = tensor.point_labels or ()
    if len(labels) != tensor.n_points or not all(isinstance(lab, tuple) and len(lab) == 2 for lab in labels):
        raise StructuralError("tensor points must be labelled by pairs of points")
    by_class: dict[int, int] = {}
    for p in tensor.points:
        c = cls[Z.obj(tuple(labels[p]))]
        if c in by_class:
            return Verdict.fail("tensor-injective", by_class[c], p)
        by_class[c] = p
    missing = [o for o in Z.objects if cls[o] not in by_class]
    if missing:
        return Verdict.fail("tensor-surjective", missing[0])
    ob = tuple(by_class[cls[o]] for o in Z.objects)
    T = discrete_groupoid(tensor.n_points)
    F = GroupoidFunctor(Z, T, ob, tuple(T.unit[ob[Z.src[f]]] for f in Z.arrows))
    v = validate_functor(F)
    if not v:
        return Verdict.fail(f"functor:{v.witness.law}", *v.witness.ids)
    v = is_equivalence(F)
    if not v:
        return Verdict.fail(f"equivalence:{v.witness.law}", *v.witness.ids)
    L, R = composite.left, composite.right
    for o in Z.objects:
        if tensor.a[ob[o]] != L.moment(o) or tensor.b[ob[o]] != R.moment(o):
            return Verdict.fail("moments", o)
    for g, o in L.pairs():
        if tensor.left[g, ob[o]] != ob[L.act(g, o)]:
            return Verdict.fail("left-equivariant", g, o)
    for o, h in R.pairs():
        if tensor.right[ob[o], h] != ob[R.act(o, h)]:
            return Verdict.fail("right-equivariant", o, h)
    return Verdict.ok()


def bibundle_through_strict_map(K: FiniteGroupoid, sg2: StackyGroupoidPresentation,
                                to_arrow) -> StackyBibundle:
    """``K`` on its own arrows by composition; ``sg2`` acts by ``k . g = k o to_arrow(g)``.

    ``to_arrow`` must be constant on components of ``sg2.G`` and multiplicative, so every
    structure cell is a unit; ``check_bibundle`` rejects anything else.
    """
    sg1 = strict_presentation(K, name=getattr(K, "name", ""))
    X = sg1.G
    left = make_action(sg1, X, moment=lambda k: K.tgt[k], act=lambda g, k: K.comp[g, k],
                       act_arr=lambda j, b: X.unit[K.comp[X.src[j], X.src[b]]],
                       beta=lambda h, g, k: X.unit[K.comp[K.comp[h, g], k]],
                       epsilon=lambda k: X.unit[k], side="left", name="K-left")

    def on(k, g):
        image = to_arrow(g)
        if K.tgt[image] != K.src[k]:
            raise StructuralError(f"{g} maps to {image}, not composable with {k}")
        return K.comp[k, image]

    right = make_action(sg2, X, moment=lambda k: K.src[k], act=on,
                        act_arr=lambda b, j: X.unit[on(X.src[b], sg2.G.src[j])],
                        beta=lambda k, g, h: X.unit[on(k, sg2.mul(g, h))],
                        epsilon=lambda k: X.unit[on(k, sg2.one(K.src[k]))],
                        side="right", name=f"{sg2.name}-right")
    return make_bibundle(left, right, lambda g, k, h: X.unit[on(K.comp[g, k], h)],
                         name=f"K-{sg2.name}")


def product_projection_bibundle(K: FiniteGroupoid, sg: StackyGroupoidPresentation) -> StackyBibundle:
    """``K`` against ``K x sg`` for a one-point ``sg``, acting through the first factor."""
    if sg.M.n_objects != 1:
        raise StructuralError("the second factor must live over one point")
    product = product_presentation(strict_presentation(K), sg)
    return bibundle_through_strict_map(K, product, lambda g: product.G.olabel(g)[0])


# ---------------------------------------------------------------------------
# rigidity for ordinary groupoids


def underlying_groupoid(sg: StackyGroupoidPresentation) -> FiniteGroupoid:
    """The groupoid presented by a strict presentation; raises if ``sg`` is not strict."""
    G = sg.G
    if G.n_arrows != G.n_objects:
        raise StructuralError("the presentation has non-unit 2-cells, so it is not a groupoid")
    comp = {(g, h): sg.mul(g, h) for g, h in sg.pairs()}
    return FiniteGroupoid(sg.M.n_objects, tuple(sg.src(g) for g in G.objects),
                          tuple(sg.trg(g) for g in G.objects), comp,
                          tuple(sg.inv(g) for g in G.objects), tuple(sg.one(p) for p in sg.base))


def strictify_if_groupoid(bb: StackyBibundle) -> GroupoidFunctor:
    """``F(g) = 1_{t g} . g`` from ``G2`` to the arrows of ``K``, for a ``K``-``G2`` bibundle on ``K``.

    Needs a strict ``sg1`` presenting ``K``, a discrete carrier whose objects are the arrows of
    ``K`` with ``K`` acting by composition, left moment ``t`` and right moment ``s``.
    """
    K = underlying_groupoid(bb.sg1)
    X = bb.X
    v = is_representable(X)
    if not v:
        raise StructuralError(f"carrier not representable: {v.witness}")
    if X.n_objects != K.n_arrows or X.n_arrows != X.n_objects:
        raise StructuralError("the carrier must be the discrete groupoid on the arrows of K")
    for k, x in bb.left.pairs():
        if bb.left.act(k, x) != K.comp[k, x]:
            raise StructuralError(f"K does not act on the carrier by composition at {(k, x)}")
    for x in X.objects:
        if bb.left.moment(x) != K.tgt[x] or bb.right.moment(x) != K.src[x]:
            raise StructuralError(f"moments at {x} are not target and source")
    sg2 = bb.sg2
    target = discrete_groupoid(K.n_arrows)

    def on_object(g):
        return bb.right.act(K.unit[sg2.trg(g)], g)

    return functor_from(sg2.G, target, on_object, lambda j: on_object(sg2.G.src[j]))


def check_strictification(bb: StackyBibundle, F: GroupoidFunctor) -> Verdict:
    """``F`` preserves source, target, units and products exactly and is an equivalence."""
    K = underlying_groupoid(bb.sg1)
    sg2 = bb.sg2
    v = validate_functor(F)
    if not v:
        return Verdict.fail(f"F:{v.witness.law}", *v.witness.ids)
    for g in sg2.G.objects:
        if K.src[F.ob(g)] != sg2.src(g):
            return Verdict.fail("source", g)
        if K.tgt[F.ob(g)] != sg2.trg(g):
            return Verdict.fail("target", g)
        if F.ob(sg2.inv(g)) != K.inv[F.ob(g)]:
            return Verdict.fail("inverse", g)
    for p in sg2.base:
        if F.ob(sg2.one(p)) != K.unit[p]:
            return Verdict.fail("unit", p)
    for g1, g2 in sg2.pairs():
        if F.ob(sg2.mul(g1, g2)) != K.comp[F.ob(g1), F.ob(g2)]:
            return Verdict.fail("multiplication", g1, g2)
    v = is_equivalence(F)
    if not v:
        return Verdict.fail(f"equivalence:{v.witness.law}", *v.witness.ids)
    return Verdict.ok()


def check_groupoid_rigidity(bb: StackyBibundle) -> Verdict:
    """A biprincipal bibundle out of a strict presentation has a representable carrier and target."""
    underlying_groupoid(bb.sg1)
    v = is_biprincipal(bb)
    if not v:
        raise AxiomError(v)
    v = is_representable(bb.X)
    if not v:
        return Verdict.fail("carrier-representable", *v.witness.ids)
    v = is_representable(bb.sg2.G)
    if not v:
        return Verdict.fail("target-representable", *v.witness.ids)
    return Verdict.ok()


# ---------------------------------------------------------------------------
# transitive examples


def fibre_bibundle(sg: StackyGroupoidPresentation, x: int) -> StackyBibundle:
    """``s^-1(x)`` as a ``G``-``G_x`` bibundle: left and right multiplication, ``tau = alpha``."""
    if x not in sg.base:
        raise StructuralError(f"base point {x} absent")
    iso = isotropy_2group(sg, x)
    H = iso.G
    fibre = restrict_groupoid(sg.G, [g for g in sg.G.objects if sg.src(g) == x])

    def o(g):
        return fibre.olabel(g)

    def a(f):
        return fibre.alabel(f)

    def io(k):
        return H.olabel(k)

    def ia(k):
        return H.alabel(k)

    G = sg.G
    left = make_action(
        sg, fibre, moment=lambda g: sg.trg(o(g)),
        act=lambda h, g: fibre.obj(sg.mul(h, o(g))),
        act_arr=lambda j, b: fibre.arr(sg.mul_arr(j, a(b))),
        beta=lambda l, h, g: fibre.arr(G.inv[sg.alpha[l, h, o(g)]]),
        epsilon=lambda g: fibre.arr(sg.lam[o(g)]), side="left", name=f"s^-1({x})-left")
    right = make_action(
        iso, fibre, moment=lambda g: 0,
        act=lambda g, k: fibre.obj(sg.mul(o(g), io(k))),
        act_arr=lambda b, j: fibre.arr(sg.mul_arr(a(b), ia(j))),
        beta=lambda g, k, l: fibre.arr(sg.alpha[o(g), io(k), io(l)]),
        epsilon=lambda g: fibre.arr(sg.rho[o(g)]), side="right", name=f"s^-1({x})-right")
    return make_bibundle(left, right, lambda h, g, k: fibre.arr(sg.alpha[h, o(g), io(k)]),
                         name=f"s^-1({x})")


def subgroup(K: FiniteGroup, elements: Sequence[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
    """The subgroup on ``elements`` (relabelled densely, identity first) and its inclusion."""
    elems = sorted(set(elements))
    if not elems or elems[0] != 0:
        raise StructuralError("a subgroup must contain the identity")
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for a in elems:
        row = []
        for b in elems:
            c = K.mul(a, b)
            if c not in index:
                raise StructuralError(f"not closed under multiplication: {a}*{b}={c}")
            row.append(index[c])
        table.append(tuple(row))
    return FiniteGroup(tuple(table), f"H<{K.name}"), tuple(elems)


def prequantization_data(K: FiniteGroup, H_elements: Sequence[int], n: int):
    """The finite stand-in for a prequantization: ``[K/H]``, ``pair(n) x [K/H]`` and ``s^-1(0)``.

    A finite analogue with ``K`` playing the circle and ``H`` the period group; not a
    reproduction of the smooth example.
    """
    if not K.is_abelian:
        raise StructuralError("K must be abelian")
    H, incl = subgroup(K, H_elements)
    quotient_2group = from_crossed_module(CrossedModuleData(H, K, incl))
    gauge = product_presentation(strict_presentation(pair_groupoid(n), name=f"pair({n})"), quotient_2group)
    return quotient_2group, gauge, fibre_bibundle(gauge, 0)


def discrete_prequantization_example(K: FiniteGroup, H_elements: Sequence[int], n: int) -> Verdict:
    """Finite analogue: ``pair(n) x [K/H]`` is Morita equivalent to ``[K/H]`` through ``s^-1(0)``."""
    _, _, bb = prequantization_data(K, H_elements, n)
    v = check_bibundle(bb)
    if not v:
        return Verdict.fail(f"bibundle:{v.witness.law}", *v.witness.ids)
    return is_biprincipal(bb)
