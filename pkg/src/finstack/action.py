"""Weak actions of stacky groupoid presentations on finite groupoids.

Right actions act on ``XG = {(x, g) : mu(x) = t(g)}`` and carry

* ``beta[x, g, h]: x(gh) -> (xg)h``
* ``epsilon[x]: x.1 -> x``

Left actions act on ``GX = {(g, x) : s(g) = mu(x)}`` and carry

* ``beta[h, g, x]: (hg)x -> h(gx)``
* ``epsilon[x]: 1.x -> x``

``wa.act(a, b)`` and ``wa.act_arr(a, b)`` take their arguments in the order
of the fibred product labels: ``(x, g)`` for right and ``(g, x)`` for left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .core import (
    AxiomError, FiniteGroupoid, GroupoidFunctor, Law, SetAction, StructuralError, Verdict,
    check_laws, compose_functors, functor_from, is_equivalence, is_essentially_surjective,
    is_representable, iso_comma, object_inclusion, product_groupoid,
    strict_fibred_product, validate_functor, validate_set_action,
)
from .weakgroupoid import (
    StackyGroupoidPresentation, derive_all_theta, derive_chi, strict_presentation,
)


@dataclass(frozen=True)
class WeakAction:
    sg: StackyGroupoidPresentation
    X: FiniteGroupoid
    mu: GroupoidFunctor
    act_functor: GroupoidFunctor
    beta: Mapping[tuple[int, int, int], int]
    epsilon: tuple[int, ...]
    side: str = "right"
    name: str = ""

    __hash__ = None

    @property
    def XG(self) -> FiniteGroupoid:
        return self.act_functor.dom

    @property
    def is_right(self) -> bool:
        return self.side == "right"

    def moment(self, x: int) -> int:
        return self.mu.on_objects[x]

    def act(self, a: int, b: int) -> int:
        return self.act_functor.on_objects[self.XG.obj((a, b))]

    def act_arr(self, a: int, b: int) -> int:
        return self.act_functor.on_arrows[self.XG.arr((a, b))]

    def pairs(self) -> Iterable[tuple[int, int]]:
        return (self.XG.olabel(o) for o in self.XG.objects)

    def triples(self) -> Iterable[tuple[int, int, int]]:
        """``(x, g, h)`` for right actions, ``(h, g, x)`` for left actions."""
        sg = self.sg
        if self.is_right:
            for x, g in self.pairs():
                for h in sg.G.objects:
                    if sg.src(g) == sg.trg(h):
                        yield x, g, h
        else:
            for g, x in self.pairs():
                for h in sg.G.objects:
                    if sg.src(h) == sg.trg(g):
                        yield h, g, x

    def unit_at(self, x: int) -> int:
        return self.sg.one(self.moment(x))


def make_action(sg: StackyGroupoidPresentation, X: FiniteGroupoid, *, moment: Callable[[int], int],
                act: Callable[[int, int], int], act_arr: Callable[[int, int], int],
                beta: Callable, epsilon: Callable[[int], int], side: str = "right",
                name: str = "") -> WeakAction:
    """Tabulate an action from callables; argument order follows the fibred product labels."""
    if side not in ("right", "left"):
        raise StructuralError("side must be 'right' or 'left'")
    mu = GroupoidFunctor(X, sg.M, tuple(moment(x) for x in X.objects),
                         tuple(moment(X.src[f]) for f in X.arrows))
    XG = strict_fibred_product(mu, sg.t) if side == "right" else strict_fibred_product(sg.s, mu)
    act_functor = GroupoidFunctor(XG, X, tuple(act(*XG.olabel(o)) for o in XG.objects),
                                  tuple(act_arr(*XG.alabel(f)) for f in XG.arrows))
    shell = WeakAction(sg, X, mu, act_functor, {}, (), side, name)
    return WeakAction(sg, X, mu, act_functor, {trip: beta(*trip) for trip in shell.triples()},
                      tuple(epsilon(x) for x in X.objects), side, name)


# ---------------------------------------------------------------------------
# validation


def _structure(wa, ids):
    return True


def _a2_holds(wa, ids):
    a, b = ids
    sg = wa.sg
    if wa.is_right:
        return wa.moment(wa.act(a, b)) == sg.src(b)
    return wa.moment(wa.act(a, b)) == sg.trg(a)


def _has(G, f, x, y):
    return G.src[f] == x and G.tgt[f] == y


def _beta_shape(wa, ids):
    sg = wa.sg
    if wa.is_right:
        x, g, h = ids
        return _has(wa.X, wa.beta[ids], wa.act(x, sg.mul(g, h)), wa.act(wa.act(x, g), h))
    h, g, x = ids
    return _has(wa.X, wa.beta[ids], wa.act(sg.mul(h, g), x), wa.act(h, wa.act(g, x)))


def _epsilon_shape(wa, ids):
    (x,) = ids
    one = wa.unit_at(x)
    source = wa.act(x, one) if wa.is_right else wa.act(one, x)
    return _has(wa.X, wa.epsilon[x], source, x)


def _beta_arrow_cases(wa):
    G, X = wa.sg.G, wa.X
    for trip in wa.triples():
        if wa.is_right:
            x, g, h = trip
            for b in X.arrows_from(x):
                for j in G.arrows_from(g):
                    for k in G.arrows_from(h):
                        yield b, j, k
        else:
            h, g, x = trip
            for k in G.arrows_from(h):
                for j in G.arrows_from(g):
                    for b in X.arrows_from(x):
                        yield k, j, b


def _beta_natural(wa, ids):
    sg, X, G = wa.sg, wa.X, wa.sg.G
    if wa.is_right:
        b, j, k = ids
        src = (X.src[b], G.src[j], G.src[k])
        tgt = (X.tgt[b], G.tgt[j], G.tgt[k])
        return (X.comp[wa.beta[tgt], wa.act_arr(b, sg.mul_arr(j, k))]
                == X.comp[wa.act_arr(wa.act_arr(b, j), k), wa.beta[src]])
    k, j, b = ids
    src = (G.src[k], G.src[j], X.src[b])
    tgt = (G.tgt[k], G.tgt[j], X.tgt[b])
    return (X.comp[wa.beta[tgt], wa.act_arr(sg.mul_arr(k, j), b)]
            == X.comp[wa.act_arr(k, wa.act_arr(j, b)), wa.beta[src]])


def _epsilon_natural(wa, ids):
    (b,) = ids
    X = wa.X
    one = wa.sg.idt(wa.unit_at(X.src[b]))
    moved = wa.act_arr(b, one) if wa.is_right else wa.act_arr(one, b)
    return X.comp[wa.epsilon[X.tgt[b]], moved] == X.comp[b, wa.epsilon[X.src[b]]]


def _right_quadruples(wa):
    sg = wa.sg
    for x, g, h in wa.triples():
        for l in sg.G.objects:
            if sg.src(h) == sg.trg(l):
                yield x, g, h, l


def _left_quadruples(wa):
    sg = wa.sg
    for h, g, x in wa.triples():
        for l in sg.G.objects:
            if sg.src(l) == sg.trg(h):
                yield l, h, g, x


def _xghl(wa, ids):
    x, g, h, l = ids
    sg, X, be = wa.sg, wa.X, wa.beta
    xg, hl, gh = wa.act(x, g), sg.mul(h, l), sg.mul(g, h)
    lhs = X.compose(be[xg, h, l], be[x, g, hl])
    rhs = X.compose(wa.act_arr(be[x, g, h], sg.idt(l)), be[x, gh, l],
                    wa.act_arr(X.unit[x], sg.alpha[g, h, l]))
    return lhs == rhs


def _x1g(wa, ids):
    x, g = ids
    sg, X = wa.sg, wa.X
    one = wa.unit_at(x)
    lhs = X.compose(wa.act_arr(wa.epsilon[x], sg.idt(g)), wa.beta[x, one, g])
    return lhs == wa.act_arr(X.unit[x], sg.lam[g])


def _xg1(wa, ids):
    x, g = ids
    sg, X = wa.sg, wa.X
    one = sg.one(sg.src(g))
    lhs = X.compose(wa.epsilon[wa.act(x, g)], wa.beta[x, g, one])
    return lhs == wa.act_arr(X.unit[x], sg.rho[g])


def _lhgx(wa, ids):
    l, h, g, x = ids
    sg, X, be = wa.sg, wa.X, wa.beta
    lhs = X.compose(be[l, h, wa.act(g, x)], be[sg.mul(l, h), g, x],
                    wa.act_arr(sg.alpha[l, h, g], X.unit[x]))
    rhs = X.compose(wa.act_arr(sg.idt(l), be[h, g, x]), be[l, sg.mul(h, g), x])
    return lhs == rhs


def _g1x(wa, ids):
    g, x = ids
    sg, X = wa.sg, wa.X
    one = sg.one(sg.src(g))
    lhs = X.compose(wa.act_arr(sg.idt(g), wa.epsilon[x]), wa.beta[g, one, x])
    return lhs == wa.act_arr(sg.rho[g], X.unit[x])


def _1gx(wa, ids):
    g, x = ids
    sg, X = wa.sg, wa.X
    one = sg.one(sg.trg(g))
    lhs = X.compose(wa.epsilon[wa.act(g, x)], wa.beta[one, g, x])
    return lhs == wa.act_arr(sg.lam[g], X.unit[x])


_COMMON_LAWS: tuple[Law, ...] = (
    Law("a2", lambda wa: iter(wa.pairs()), _a2_holds),
    Law("beta-shape", lambda wa: iter(wa.triples()), _beta_shape),
    Law("epsilon-shape", lambda wa: ((x,) for x in wa.X.objects), _epsilon_shape),
    Law("beta-natural", _beta_arrow_cases, _beta_natural),
    Law("epsilon-natural", lambda wa: ((b,) for b in wa.X.arrows), _epsilon_natural),
)

RIGHT_ACTION_LAWS: tuple[Law, ...] = _COMMON_LAWS + (
    Law("xghl", _right_quadruples, _xghl),
    Law("x1g", lambda wa: iter(wa.pairs()), _x1g),
    Law("xg1", lambda wa: iter(wa.pairs()), _xg1),
)

LEFT_ACTION_LAWS: tuple[Law, ...] = _COMMON_LAWS + (
    Law("lhgx", _left_quadruples, _lhgx),
    Law("g1x", lambda wa: iter(wa.pairs()), _g1x),
    Law("1gx", lambda wa: iter(wa.pairs()), _1gx),
)


def action_laws(wa: WeakAction) -> tuple[Law, ...]:
    return RIGHT_ACTION_LAWS if wa.is_right else LEFT_ACTION_LAWS


def check_a2_a4(wa: WeakAction) -> Verdict:
    """Functoriality of moment and action, the strict moment identity, 2-cell shapes, then coherence."""
    for label, F in (("mu", wa.mu), ("act", wa.act_functor)):
        v = validate_functor(F)
        if not v:
            return Verdict.fail(f"{label}:{v.witness.law}", *v.witness.ids)
    return check_laws(wa, action_laws(wa))


# ---------------------------------------------------------------------------
# constructions


def self_action(sg: StackyGroupoidPresentation, side: str = "right") -> WeakAction:
    """Multiplication on ``G``: moment ``s`` on the right, ``t`` on the left."""
    if side == "right":
        return make_action(sg, sg.G, moment=sg.src, act=sg.mul, act_arr=sg.mul_arr,
                           beta=lambda x, g, h: sg.alpha[x, g, h], epsilon=lambda x: sg.rho[x],
                           side="right", name=f"{sg.name}-right-self")
    return make_action(sg, sg.G, moment=sg.trg, act=sg.mul, act_arr=sg.mul_arr,
                       beta=lambda h, g, x: sg.G.inv[sg.alpha[h, g, x]], epsilon=lambda x: sg.lam[x],
                       side="left", name=f"{sg.name}-left-self")


def trivial_action(sg: StackyGroupoidPresentation, X: FiniteGroupoid, base_point: int = 0,
                   side: str = "right") -> WeakAction:
    """Everything acts as the identity; needs every object of ``G`` to be a loop at ``base_point``."""
    if any(sg.src(g) != base_point or sg.trg(g) != base_point for g in sg.G.objects):
        raise StructuralError("a trivial action needs all of G over a single base point")
    if side == "right":
        act, act_arr = (lambda x, g: x), (lambda b, j: b)
    else:
        act, act_arr = (lambda g, x: x), (lambda j, b: b)
    return make_action(sg, X, moment=lambda x: base_point, act=act, act_arr=act_arr,
                       beta=lambda *trip: X.unit[trip[0] if side == "right" else trip[2]],
                       epsilon=lambda x: X.unit[x], side=side, name=f"{sg.name}-trivial")


def lift_set_action(sa: SetAction, sg: StackyGroupoidPresentation | None = None) -> WeakAction:
    """A strict action of a groupoid on a set, as a weak action on the discrete groupoid of the set."""
    v = validate_set_action(sa)
    if not v:
        raise AxiomError(v)
    from .core import discrete_groupoid
    sg = sg or strict_presentation(sa.G)
    X = discrete_groupoid(sa.n_points)
    G = sg.G
    if sa.side == "right":
        act = lambda x, g: sa(x, g)
        act_arr = lambda b, j: X.unit[sa(X.src[b], G.src[j])]
        beta = lambda x, g, h: X.unit[sa(sa(x, g), h)]
    else:
        act = lambda g, x: sa(x, g)
        act_arr = lambda j, b: X.unit[sa(X.src[b], G.src[j])]
        beta = lambda h, g, x: X.unit[sa(sa(x, g), h)]
    return make_action(sg, X, moment=lambda x: sa.moment[x], act=act,
                       act_arr=act_arr, beta=beta, epsilon=lambda x: X.unit[x], side=sa.side,
                       name="strict-set-action")


def strict_group_action(sg: StackyGroupoidPresentation, X: FiniteGroupoid,
                        on_objects: Callable[[int, int], int], on_arrows: Callable[[int, int], int],
                        side: str = "right") -> WeakAction:
    """Strict action of a strict presentation over a point by groupoid automorphisms.

    ``on_objects(x, g)`` and ``on_arrows(b, g)`` give ``x.g`` and ``b.g`` (or ``g.x``, ``g.b``).
    """
    if side == "right":
        act = on_objects
        act_arr = lambda b, j: on_arrows(b, sg.G.src[j])
        beta = lambda x, g, h: X.unit[on_objects(on_objects(x, g), h)]
    else:
        act = lambda g, x: on_objects(x, g)
        act_arr = lambda j, b: on_arrows(b, sg.G.src[j])
        beta = lambda h, g, x: X.unit[on_objects(on_objects(x, g), h)]
    return make_action(sg, X, moment=lambda x: 0, act=act, act_arr=act_arr, beta=beta,
                       epsilon=lambda x: X.unit[x], side=side, name="strict-groupoid-action")


def diagonal_action(wa1: WeakAction, wa2: WeakAction) -> WeakAction:
    """Diagonal right action on ``X1 x_M X2``; a left factor is first turned into a right one."""
    if wa1.sg is not wa2.sg and wa1.sg != wa2.sg:
        raise StructuralError("diagonal action needs a common presentation")
    if not wa1.is_right:
        wa1 = invert_action(wa1)
    if not wa2.is_right:
        wa2 = invert_action(wa2)
    X = strict_fibred_product(wa1.mu, wa2.mu)

    def lab(o):
        return X.olabel(o)

    def alab(f):
        return X.alabel(f)

    return make_action(
        wa1.sg, X, moment=lambda o: wa1.moment(lab(o)[0]),
        act=lambda o, g: X.obj((wa1.act(lab(o)[0], g), wa2.act(lab(o)[1], g))),
        act_arr=lambda f, j: X.arr((wa1.act_arr(alab(f)[0], j), wa2.act_arr(alab(f)[1], j))),
        beta=lambda o, g, h: X.arr((wa1.beta[lab(o)[0], g, h], wa2.beta[lab(o)[1], g, h])),
        epsilon=lambda o: X.arr((wa1.epsilon[lab(o)[0]], wa2.epsilon[lab(o)[1]])),
        name=f"({wa1.name})x({wa2.name})")


def action_on_product(wa: WeakAction) -> WeakAction:
    """``G`` acting on the ``G`` factor of ``X x_M G``: ``(x, g).h = (x, gh)``."""
    if not wa.is_right:
        raise StructuralError("expects a right action")
    sg, XG = wa.sg, wa.XG

    def lab(o):
        return XG.olabel(o)

    def alab(f):
        return XG.alabel(f)

    return make_action(
        sg, XG, moment=lambda o: sg.src(lab(o)[1]),
        act=lambda o, h: XG.obj((lab(o)[0], sg.mul(lab(o)[1], h))),
        act_arr=lambda f, k: XG.arr((alab(f)[0], sg.mul_arr(alab(f)[1], k))),
        beta=lambda o, h, k: XG.arr((wa.X.unit[lab(o)[0]], sg.alpha[lab(o)[1], h, k])),
        epsilon=lambda o: XG.arr((wa.X.unit[lab(o)[0]], sg.rho[lab(o)[1]])),
        name=f"{wa.name}-on-product")


# ---------------------------------------------------------------------------
# inversion


def invert_action(wa: WeakAction) -> WeakAction:
    """Left actions become right actions via ``x.g := g^-1 x`` and vice versa.

    The associativity cell uses the derived ``theta`` and the unit cell uses ``chi``.
    """
    sg = wa.sg
    theta, chi = derive_all_theta(sg), derive_chi(sg)
    X, inv, inv_arr = wa.X, sg.inv, sg.inv_arr
    if not wa.is_right:
        return make_action(
            sg, X, moment=wa.moment,
            act=lambda x, g: wa.act(inv(g), x),
            act_arr=lambda b, j: wa.act_arr(inv_arr(j), b),
            beta=lambda x, g, h: X.compose(wa.beta[inv(h), inv(g), x], wa.act_arr(theta[g, h], X.unit[x])),
            epsilon=lambda x: X.compose(wa.epsilon[x], wa.act_arr(chi[wa.moment(x)], X.unit[x])),
            side="right", name=f"inverse({wa.name})")
    return make_action(
        sg, X, moment=wa.moment,
        act=lambda g, x: wa.act(x, inv(g)),
        act_arr=lambda j, b: wa.act_arr(b, inv_arr(j)),
        beta=lambda h, g, x: X.compose(wa.beta[x, inv(g), inv(h)], wa.act_arr(X.unit[x], theta[h, g])),
        epsilon=lambda x: X.compose(wa.epsilon[x], wa.act_arr(X.unit[x], chi[wa.moment(x)])),
        side="left", name=f"inverse({wa.name})")


# ---------------------------------------------------------------------------
# freeness and the action-projection map


def action_projection(wa: WeakAction) -> GroupoidFunctor:
    """``(x, g) -> (x, xg)`` for right actions and ``(g, x) -> (gx, x)`` for left ones, into ``X x X``."""
    X, XG = wa.X, wa.XG
    XX = product_groupoid(X, X)
    if wa.is_right:
        return functor_from(XG, XX, lambda o: XX.obj((XG.olabel(o)[0], wa.act(*XG.olabel(o)))),
                            lambda f: XX.arr((XG.alabel(f)[0], wa.act_arr(*XG.alabel(f)))))
    return functor_from(XG, XX, lambda o: XX.obj((wa.act(*XG.olabel(o)), XG.olabel(o)[1])),
                        lambda f: XX.arr((wa.act_arr(*XG.alabel(f)), XG.alabel(f)[1])))


def is_1free(wa: WeakAction) -> Verdict:
    """Acting on a fixed object is injective on parallel arrows of ``G``; witness ``(x, j, j')``."""
    sg, X = wa.sg, wa.X
    G = sg.G
    anchor = sg.trg if wa.is_right else sg.src
    for x in X.objects:
        ux = X.unit[x]
        for g in G.objects:
            if anchor(g) != wa.moment(x):
                continue
            for gbar in G.objects:
                seen = {}
                for j in G.hom(g, gbar):
                    img = wa.act_arr(ux, j) if wa.is_right else wa.act_arr(j, ux)
                    if img in seen:
                        return Verdict.fail("1-free", x, seen[img], j)
                    seen[img] = j
    return Verdict.ok()


def is_weakly_representable(F: GroupoidFunctor) -> Verdict:
    """The comma of ``F`` against the object inclusion of its codomain has trivial automorphisms."""
    C = iso_comma(F, object_inclusion(F.cod))
    v = is_representable(C)
    if v:
        return v
    x, f = v.witness.ids
    return Verdict.fail("weakly-representable", C.olabel(x), C.alabel(f))


# ---------------------------------------------------------------------------
# equivariant morphisms


@dataclass(frozen=True)
class EquivariantMorphism:
    """``F: X1 -> X2`` between right actions with ``delta[x, g]: F(x).g -> F(x.g)``."""

    source: WeakAction
    target: WeakAction
    F: GroupoidFunctor
    delta: Mapping[tuple[int, int], int]

    __hash__ = None


def _em_moment(em, ids):
    (x,) = ids
    return em.target.moment(em.F.ob(x)) == em.source.moment(x)


def _em_delta_shape(em, ids):
    x, g = ids
    F, s, t = em.F, em.source, em.target
    return _has(t.X, em.delta[x, g], t.act(F.ob(x), g), F.ob(s.act(x, g)))


def _em_delta_natural(em, ids):
    (f,) = ids
    F, s, t = em.F, em.source, em.target
    XG = s.XG
    b, j = XG.alabel(f)
    src, tgt = XG.olabel(XG.src[f]), XG.olabel(XG.tgt[f])
    return (t.X.comp[em.delta[tgt], t.act_arr(F.ar(b), j)]
            == t.X.comp[F.ar(s.act_arr(b, j)), em.delta[src]])


def _em_dbb(em, ids):
    x, g1, g2 = ids
    F, s, t, d = em.F, em.source, em.target, em.delta
    sg = s.sg
    lhs = t.X.compose(d[s.act(x, g1), g2], t.act_arr(d[x, g1], sg.idt(g2)), t.beta[F.ob(x), g1, g2])
    rhs = t.X.compose(F.ar(s.beta[x, g1, g2]), d[x, sg.mul(g1, g2)])
    return lhs == rhs


def _em_dee(em, ids):
    (x,) = ids
    F, s, t = em.F, em.source, em.target
    one = s.unit_at(x)
    return t.X.compose(F.ar(s.epsilon[x]), em.delta[x, one]) == t.epsilon[F.ob(x)]


EQUIVARIANT_LAWS: tuple[Law, ...] = (
    Law("moment", lambda em: ((x,) for x in em.source.X.objects), _em_moment),
    Law("delta-shape", lambda em: iter(em.source.pairs()), _em_delta_shape),
    Law("delta-natural", lambda em: ((f,) for f in em.source.XG.arrows), _em_delta_natural),
    Law("delta-beta", lambda em: iter(em.source.triples()), _em_dbb),
    Law("delta-epsilon", lambda em: ((x,) for x in em.source.X.objects), _em_dee),
)


def check_equivariant(em: EquivariantMorphism) -> Verdict:
    if not (em.source.is_right and em.target.is_right):
        raise StructuralError("equivariant morphisms are between right actions")
    v = validate_functor(em.F)
    if not v:
        return Verdict.fail(f"F:{v.witness.law}", *v.witness.ids)
    return check_laws(em, EQUIVARIANT_LAWS)


def identity_equivariant(wa: WeakAction) -> EquivariantMorphism:
    F = functor_from(wa.X, wa.X, lambda x: x, lambda f: f)
    return EquivariantMorphism(wa, wa, F, {(x, g): wa.X.unit[wa.act(x, g)] for x, g in wa.pairs()})


def compose_equivariant(em1: EquivariantMorphism, em2: EquivariantMorphism) -> EquivariantMorphism:
    """``em2 o em1`` with ``delta[x, g] = F2(delta1[x, g]) o delta2[F1 x, g]``."""
    if em1.target.X != em2.source.X:
        raise StructuralError("equivariant morphisms are not composable")
    F1, F2 = em1.F, em2.F
    X3 = em2.target.X
    delta = {(x, g): X3.comp[F2.ar(em1.delta[x, g]), em2.delta[F1.ob(x), g]] for x, g in em1.source.pairs()}
    return EquivariantMorphism(em1.source, em2.target, compose_functors(F2, F1), delta)


def action_map_equivariant(wa: WeakAction) -> tuple[WeakAction, EquivariantMorphism]:
    """The action functor ``X x_M G -> X`` as an equivariant map, with ``delta = beta^-1``."""
    prod = action_on_product(wa)
    XG, X = wa.XG, wa.X
    delta = {}
    for o, h in prod.pairs():
        x, g = XG.olabel(o)
        delta[o, h] = X.inv[wa.beta[x, g, h]]
    return prod, EquivariantMorphism(prod, wa, wa.act_functor, delta)


# ---------------------------------------------------------------------------
# actions on the fibres of a functor


@dataclass(frozen=True)
class FiberedAction:
    """An action together with ``P: X -> S`` and ``gamma``: ``P(x) -> P(xg)`` (right) or ``P(x) -> P(gx)`` (left)."""

    action: WeakAction
    P: GroupoidFunctor
    gamma: Mapping[tuple[int, int], int]

    __hash__ = None


def _fa_moved(fa, a, b):
    """Object moved by the action, given fibred product labels."""
    return fa.action.act(a, b)


def _fa_start(fa, a, b):
    return a if fa.action.is_right else b


def _fa_gamma_shape(fa, ids):
    a, b = ids
    S = fa.P.cod
    return _has(S, fa.gamma[a, b], fa.P.ob(_fa_start(fa, a, b)), fa.P.ob(_fa_moved(fa, a, b)))


def _fa_gamma_natural(fa, ids):
    (f,) = ids
    wa, P, S = fa.action, fa.P, fa.P.cod
    XG = wa.XG
    a, b = XG.alabel(f)
    moved_arrow = wa.act_arr(a, b)
    x_arrow = a if wa.is_right else b
    src, tgt = XG.olabel(XG.src[f]), XG.olabel(XG.tgt[f])
    return S.comp[fa.gamma[tgt], P.ar(x_arrow)] == S.comp[P.ar(moved_arrow), fa.gamma[src]]


def _fa_gamma_beta(fa, ids):
    wa, P, S, ga = fa.action, fa.P, fa.P.cod, fa.gamma
    sg = wa.sg
    if wa.is_right:
        x, g, h = ids
        lhs = S.compose(ga[wa.act(x, g), h], ga[x, g])
        rhs = S.compose(P.ar(wa.beta[x, g, h]), ga[x, sg.mul(g, h)])
    else:
        h, g, x = ids
        lhs = S.compose(ga[h, wa.act(g, x)], ga[g, x])
        rhs = S.compose(P.ar(wa.beta[h, g, x]), ga[sg.mul(h, g), x])
    return lhs == rhs


def _fa_gamma_epsilon(fa, ids):
    (x,) = ids
    wa, P, S = fa.action, fa.P, fa.P.cod
    one = wa.unit_at(x)
    key = (x, one) if wa.is_right else (one, x)
    return S.compose(P.ar(wa.epsilon[x]), fa.gamma[key]) == S.unit[P.ob(x)]


FIBERED_LAWS: tuple[Law, ...] = (
    Law("gamma-shape", lambda fa: iter(fa.action.pairs()), _fa_gamma_shape),
    Law("gamma-natural", lambda fa: ((f,) for f in fa.action.XG.arrows), _fa_gamma_natural),
    Law("gamma-beta", lambda fa: iter(fa.action.triples()), _fa_gamma_beta),
    Law("gamma-epsilon", lambda fa: ((x,) for x in fa.action.X.objects), _fa_gamma_epsilon),
)


def check_action_on_fibers(fa: FiberedAction) -> Verdict:
    v = validate_functor(fa.P)
    if not v:
        return Verdict.fail(f"P:{v.witness.law}", *v.witness.ids)
    return check_laws(fa, FIBERED_LAWS)


def fibers_of_strict_map(wa: WeakAction, P: GroupoidFunctor) -> FiberedAction:
    """``gamma`` made of units; needs ``P`` constant along the action on objects."""
    S = P.cod
    gamma = {}
    for a, b in wa.pairs():
        start, end = P.ob(_fa_start_wa(wa, a, b)), P.ob(wa.act(a, b))
        if start != end:
            raise StructuralError(f"P is not invariant under the action at {(a, b)}")
        gamma[a, b] = S.unit[start]
    return FiberedAction(wa, P, gamma)


def _fa_start_wa(wa, a, b):
    return a if wa.is_right else b


def moment_bundle(wa: WeakAction) -> FiberedAction:
    """The action on the fibres of its own moment map is not meaningful; this is the map to ``M``
    of the *other* side.  Provided for actions whose moment is invariant, e.g. trivial actions."""
    return fibers_of_strict_map(wa, wa.mu)


def principal_comparison(fa: FiberedAction) -> GroupoidFunctor:
    """``XG -> iso_comma(P, P)``: ``(x, g) -> (x, gamma, xg)`` (left: ``(g, x) -> (x, gamma, gx)``)."""
    wa, P = fa.action, fa.P
    C = iso_comma(P, P)
    XG = wa.XG

    def on_object(o):
        a, b = XG.olabel(o)
        return C.obj((_fa_start(fa, a, b), fa.gamma[a, b], wa.act(a, b)))

    def on_arrow(f):
        a, b = XG.alabel(f)
        x_arrow = a if wa.is_right else b
        src = XG.olabel(XG.src[f])
        return C.arr((x_arrow, wa.act_arr(a, b), fa.gamma[src]))

    return functor_from(XG, C, on_object, on_arrow)


def check_principal_bundle(fa: FiberedAction) -> Verdict:
    """``P`` essentially surjective, ``gamma`` coherent, and the comparison to ``iso_comma(P, P)`` an equivalence."""
    v = is_essentially_surjective(fa.P)
    if not v:
        return Verdict.fail("epi", *v.witness.ids)
    v = check_action_on_fibers(fa)
    if not v:
        return Verdict.fail(f"fibers:{v.witness.law}", *v.witness.ids)
    Q = principal_comparison(fa)
    v = validate_functor(Q)
    if not v:
        return Verdict.fail(f"comparison:{v.witness.law}", *v.witness.ids)
    v = is_equivalence(Q)
    if not v:
        return Verdict.fail(f"comparison:{v.witness.law}", *v.witness.ids)
    return Verdict.ok()


def invert_fibered(fa: FiberedAction) -> FiberedAction:
    """Same ``P``; ``gamma'(x, g) = gamma(g^-1, x)`` (and mirrored for right actions)."""
    wa = fa.action
    inverse = invert_action(wa)
    inv = wa.sg.inv
    if wa.is_right:
        gamma = {(g, x): fa.gamma[x, inv(g)] for g, x in inverse.pairs()}
    else:
        gamma = {(x, g): fa.gamma[inv(g), x] for x, g in inverse.pairs()}
    return FiberedAction(inverse, fa.P, gamma)


def canonical_gamma0(wa: WeakAction) -> FiberedAction:
    """The action on the fibres of the prequotient projection (see :mod:`finstack.prequotient`)."""
    from .prequotient import canonical_gamma0 as build
    return build(wa)
