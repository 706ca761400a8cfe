"""The prequotient ``X // G`` of a right weak action, and what can be built from it.

An arrow ``[g, b]: x -> y`` of the prequotient is a class of pairs with
``t(g) = mu(x)`` and ``b: xg -> y``.  Two pairs are identified when some
``j: g -> g'`` carries one to the other, ``(g, b) ~ (g', b o (id_x . j)^-1)``.
Over the point site the pullbacks in the composition formula are identities, so

    [h, c] o [g, b] = [gh, c o (b . id_h) o beta(x, g, h)]

and the identity at ``x`` is ``[1, epsilon(x)]``.  Left actions are inverted first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from networkx.utils import UnionFind

from .core import (
    AxiomError, FiniteGroupoid, GroupoidFunctor, NatIso, StructuralError, Verdict,
    functor_from, is_equivalence, is_essentially_surjective, is_faithful, is_full,
    validate_functor, validate_natiso,
)
from .action import (
    EquivariantMorphism, FiberedAction, WeakAction, action_projection, check_a2_a4,
    check_action_on_fibers, check_equivariant, diagonal_action, invert_action, is_1free,
    is_weakly_representable, make_action, principal_comparison, self_action,
)
from .weakgroupoid import StackyGroupoidPresentation


class InvariantViolation(RuntimeError):
    """Two computations that must agree did not; always a bug, never a verdict."""


@dataclass(frozen=True)
class PrequotientGroupoid:
    action: WeakAction
    carrier: FiniteGroupoid
    q: GroupoidFunctor
    members: tuple[tuple[tuple[int, int, int], ...], ...]
    class_of: Mapping[tuple[int, int, int], int] = field(repr=False)

    __hash__ = None

    def representative(self, c: int) -> tuple[int, int, int]:
        """``(x, g, b)``, lexicographically least in its class."""
        return self.members[c][0]

    def cls(self, x: int, g: int, b: int) -> int:
        return self.class_of[x, g, b]


def _right(wa: WeakAction) -> WeakAction:
    return wa if wa.is_right else invert_action(wa)


def _pairs(wa: WeakAction):
    X = wa.X
    for x, g in wa.pairs():
        for b in X.arrows_from(wa.act(x, g)):
            yield x, g, b


def _classes(wa: WeakAction):
    X, G = wa.X, wa.sg.G
    elements = list(_pairs(wa))
    uf = UnionFind(elements)
    for x, g, b in elements:
        ux = X.unit[x]
        for j in G.arrows_from(g):
            moved = X.comp[b, X.inv[wa.act_arr(ux, j)]]
            uf.union((x, g, b), (x, G.tgt[j], moved))
    groups = sorted(tuple(sorted(s)) for s in uf.to_sets())
    return tuple(groups)


def _compose_triples(wa: WeakAction, first, second):
    """``second o first`` on representatives; ``first = (x, g, b)``, ``second = (y, h, c)``."""
    x, g, b = first
    _, h, c = second
    X, sg = wa.X, wa.sg
    return x, sg.mul(g, h), X.compose(c, wa.act_arr(b, sg.idt(h)), wa.beta[x, g, h])


def _identity_triple(wa: WeakAction, x: int):
    return x, wa.unit_at(x), wa.epsilon[x]


def prequotient(wa: WeakAction) -> PrequotientGroupoid:
    """Enumerate all pairs, identify them, and tabulate the class groupoid.

    Raises :class:`AxiomError` when composition depends on the chosen representatives.
    """
    wa = _right(wa)
    X = wa.X
    groups = _classes(wa)
    class_of = {m: c for c, grp in enumerate(groups) for m in grp}
    v = _independence(wa, groups, class_of)
    if not v:
        raise AxiomError(v)
    reps = [grp[0] for grp in groups]
    src = tuple(r[0] for r in reps)
    tgt = tuple(X.tgt[r[2]] for r in reps)
    by_src: dict[int, list[int]] = {}
    for c, s in enumerate(src):
        by_src.setdefault(s, []).append(c)
    comp = {}
    for c1, r1 in enumerate(reps):
        for c2 in by_src.get(tgt[c1], ()):
            comp[c2, c1] = class_of[_compose_triples(wa, r1, reps[c2])]
    unit = tuple(class_of[_identity_triple(wa, x)] for x in X.objects)
    inv = []
    for c, r in enumerate(reps):
        found = [d for d in by_src.get(tgt[c], ()) if comp[d, c] == unit[src[c]]]
        if len(found) != 1:
            raise AxiomError(Verdict.fail("inverse", *r))
        inv.append(found[0])
    carrier = FiniteGroupoid(X.n_objects, src, tgt, comp, tuple(inv), unit,
                             object_labels=X.object_labels, arrow_labels=tuple(reps))
    q = functor_from(X, carrier, lambda x: x,
                     lambda b: class_of[X.src[b], wa.unit_at(X.src[b]), X.comp[b, wa.epsilon[X.src[b]]]])
    return PrequotientGroupoid(wa, carrier, q, groups, class_of)


def _independence(wa: WeakAction, groups, class_of) -> Verdict:
    X = wa.X
    by_src: dict[int, list[int]] = {}
    for c, grp in enumerate(groups):
        by_src.setdefault(grp[0][0], []).append(c)
    for c1, grp1 in enumerate(groups):
        y = X.tgt[grp1[0][2]]
        for c2 in by_src.get(y, ()):
            grp2 = groups[c2]
            expected = class_of[_compose_triples(wa, grp1[0], grp2[0])]
            for m1, m2 in [(m, grp2[0]) for m in grp1] + [(grp1[0], m) for m in grp2]:
                if class_of[_compose_triples(wa, m1, m2)] != expected:
                    return Verdict.fail("class-independence", m1, m2)
    return Verdict.ok()


def check_prestack_wellformed(wa: WeakAction) -> Verdict:
    """Composition lands in one class whichever members represent the two factors.

    Witness ``(first, second)`` member triples whose composite leaves the expected class.
    """
    wa = _right(wa)
    groups = _classes(wa)
    v = _independence(wa, groups, {m: c for c, grp in enumerate(groups) for m in grp})
    if not v:
        return v
    return Verdict.ok(one_free=bool(is_1free(wa)))


def canonical_gamma0(wa: WeakAction, pre: PrequotientGroupoid | None = None) -> FiberedAction:
    """``gamma0(x, g) = [g, id_xg]`` on the fibres of ``q``."""
    wa = _right(wa)
    pre = pre or prequotient(wa)
    X = wa.X
    gamma = {(x, g): pre.cls(x, g, X.unit[wa.act(x, g)]) for x, g in wa.pairs()}
    return FiberedAction(pre.action, pre.q, gamma)


# ---------------------------------------------------------------------------
# universal property and induced maps


def universal_map(pre: PrequotientGroupoid, fa: FiberedAction) -> tuple[GroupoidFunctor, NatIso]:
    """``Phi[g, b] = P(b) o gamma(x, g)`` with ``phi = id`` so that ``Phi o q = P`` strictly.

    Checks that every member of a class gives the same arrow and that ``Phi o q = P``.
    """
    v = check_action_on_fibers(fa)
    if not v:
        raise AxiomError(v)
    wa, P, S = pre.action, fa.P, fa.P.cod
    if fa.action.X != wa.X or not fa.action.is_right:
        raise StructuralError("the fibred action must be the prequotient's right action")
    values = []
    for grp in pre.members:
        images = {S.comp[P.ar(b), fa.gamma[x, g]] for x, g, b in grp}
        if len(images) != 1:
            raise InvariantViolation(f"Phi depends on the representative in class {grp[0]}")
        values.append(images.pop())
    Phi = GroupoidFunctor(pre.carrier, S, P.on_objects, tuple(values))
    for f in wa.X.arrows:
        if Phi.ar(pre.q.ar(f)) != P.ar(f):
            raise InvariantViolation(f"Phi o q differs from P at arrow {f}")
    phi = NatIso(_compose(Phi, pre.q), P, tuple(S.unit[P.ob(x)] for x in wa.X.objects))
    return Phi, phi


def _compose(second: GroupoidFunctor, first: GroupoidFunctor) -> GroupoidFunctor:
    return GroupoidFunctor(first.dom, second.cod, tuple(second.ob(x) for x in first.on_objects),
                           tuple(second.ar(f) for f in first.on_arrows))


def check_phi_gamma(pre: PrequotientGroupoid, fa: FiberedAction, Phi: GroupoidFunctor, phi: NatIso) -> Verdict:
    """``gamma o phi_x = phi_xg o Phi[g, id_xg]`` for every ``(x, g)``."""
    wa, S = pre.action, fa.P.cod
    for x, g in wa.pairs():
        xg = wa.act(x, g)
        lhs = S.comp[fa.gamma[x, g], phi[x]]
        rhs = S.comp[phi[xg], Phi.ar(pre.cls(x, g, wa.X.unit[xg]))]
        if lhs != rhs:
            return Verdict.fail("phi-gamma", x, g)
    return Verdict.ok()


def comparison_to_other(pre: PrequotientGroupoid, fa: FiberedAction, Phi: GroupoidFunctor, phi: NatIso,
                        fa_bar: FiberedAction, Phi_bar: GroupoidFunctor, phi_bar: NatIso,
                        rho: NatIso) -> NatIso:
    """The unique ``psi: Phi -> Phi_bar`` with ``phi_bar o psi = rho o phi``, found by search.

    Checks both pairs satisfy the ``phi``-``gamma`` square, ``rho`` intertwines the two
    ``gamma``, ``psi`` is unique at each object and natural.
    """
    wa, S = pre.action, fa.P.cod
    for x, g in wa.pairs():
        if S.comp[fa_bar.gamma[x, g], rho[x]] != S.comp[rho[wa.act(x, g)], fa.gamma[x, g]]:
            raise AxiomError(Verdict.fail("rho-gamma", x, g))
    for label, data in (("phi-gamma", (fa, Phi, phi)), ("phi-bar-gamma", (fa_bar, Phi_bar, phi_bar))):
        v = check_phi_gamma(pre, *data)
        if not v:
            raise AxiomError(Verdict.fail(label, *v.witness.ids))
    components = []
    for x in wa.X.objects:
        want = S.comp[rho[x], phi[x]]
        found = [a for a in S.hom(Phi.ob(x), Phi_bar.ob(x)) if S.comp[phi_bar[x], a] == want]
        if len(found) != 1:
            raise InvariantViolation(f"{len(found)} candidates for psi at {x}")
        components.append(found[0])
    psi = NatIso(Phi, Phi_bar, tuple(components))
    v = validate_natiso(psi)
    if not v:
        raise InvariantViolation(f"psi is not natural: {v.witness}")
    return psi


def induced_on_quotients(em: EquivariantMorphism, pre1: PrequotientGroupoid | None = None,
                         pre2: PrequotientGroupoid | None = None) -> GroupoidFunctor:
    """``Phi[g, b] = [g, F(b) o delta(x, g)]``; checked to satisfy ``Phi o q1 = q2 o F``."""
    v = check_equivariant(em)
    if not v:
        raise AxiomError(v)
    pre1 = pre1 or prequotient(em.source)
    pre2 = pre2 or prequotient(em.target)
    F, X2 = em.F, em.target.X
    values = []
    for grp in pre1.members:
        images = {pre2.cls(F.ob(x), g, X2.comp[F.ar(b), em.delta[x, g]]) for x, g, b in grp}
        if len(images) != 1:
            raise InvariantViolation(f"induced map depends on the representative in class {grp[0]}")
        values.append(images.pop())
    Phi = GroupoidFunctor(pre1.carrier, pre2.carrier, F.on_objects, tuple(values))
    for f in em.source.X.arrows:
        if Phi.ar(pre1.q.ar(f)) != pre2.q.ar(F.ar(f)):
            raise InvariantViolation(f"Phi o q1 differs from q2 o F at arrow {f}")
    return Phi


def check_induced_gamma(em: EquivariantMorphism, Phi: GroupoidFunctor, pre1: PrequotientGroupoid,
                        pre2: PrequotientGroupoid) -> Verdict:
    """``q2(delta(x, g)) o gamma0_2(Fx, g) = Phi(gamma0_1(x, g))`` for all ``(x, g)``."""
    F, s, t = em.F, em.source, em.target
    Q2 = pre2.carrier
    for x, g in s.pairs():
        fx = F.ob(x)
        gamma2 = pre2.cls(fx, g, t.X.unit[t.act(fx, g)])
        gamma1 = pre1.cls(x, g, s.X.unit[s.act(x, g)])
        if Q2.comp[pre2.q.ar(em.delta[x, g]), gamma2] != Phi.ar(gamma1):
            return Verdict.fail("phi-gamma-delta", x, g)
    return Verdict.ok()


# ---------------------------------------------------------------------------
# principality


def action_proj_comparison(pre: PrequotientGroupoid) -> GroupoidFunctor:
    """``(x, g) -> (x, [g, id_xg], xg)`` into ``iso_comma(q, q)``."""
    return principal_comparison(canonical_gamma0(pre.action, pre))


def comparison_report(pre: PrequotientGroupoid) -> dict[str, bool]:
    """Fullness, essential surjectivity and faithfulness of the comparison, next to faithfulness of Delta."""
    Q = action_proj_comparison(pre)
    return {"full": bool(is_full(Q)), "essentially_surjective": bool(is_essentially_surjective(Q)),
            "faithful": bool(is_faithful(Q)),
            "delta_faithful": bool(is_faithful(action_projection(pre.action)))}


def check_principal(wa: WeakAction) -> Verdict:
    """Principality over the prequotient, cross-checked against weak representability of Delta.

    Disagreement raises :class:`InvariantViolation`.
    """
    wa = _right(wa)
    pre = prequotient(wa)
    fa = canonical_gamma0(wa, pre)
    verdict = None
    v = is_essentially_surjective(pre.q)
    if not v:
        verdict = Verdict.fail("epi", *v.witness.ids)
    if verdict is None:
        v = check_action_on_fibers(fa)
        if not v:
            verdict = Verdict.fail(f"fibers:{v.witness.law}", *v.witness.ids)
    if verdict is None:
        Q = principal_comparison(fa)
        v = validate_functor(Q)
        if v:
            v = is_equivalence(Q)
        if not v:
            verdict = Verdict.fail(f"comparison:{v.witness.law}", *v.witness.ids)
    wr = is_weakly_representable(action_projection(wa))
    if bool(wr) != (verdict is None):
        raise InvariantViolation(
            f"principality ({verdict is None}) and weak representability ({bool(wr)}) disagree")
    details = {"weakly_representable": bool(wr), "agree": True}
    if verdict is None:
        return Verdict.ok(**details)
    return Verdict(False, verdict.witness, details)


# ---------------------------------------------------------------------------
# identification of the quotient of X x_M G


def product_action(wa: WeakAction) -> WeakAction:
    """``(x, g).h = (xh, h^-1 g)`` on ``X x_M G``: the diagonal of ``wa`` and the inverted left self-action."""
    return diagonal_action(_right(wa), self_action(wa.sg, "left"))


def action_map_fibers(wa: WeakAction) -> FiberedAction:
    """``G`` acting on the fibres of ``act: X x_M G -> X``.

    ``gamma((x, g), h): xg -> (xh)(h^-1 g)`` is
    ``beta(x, h, h^-1 g) o id_x.(alpha^-1 o (iota_r(h)^-1 . id_g) o lam_g^-1)``.
    """
    wa = _right(wa)
    sg, X = wa.sg, wa.X
    diag = product_action(wa)
    Y = diag.X
    G = sg.G
    P = functor_from(Y, X, lambda o: wa.act(*Y.olabel(o)), lambda f: wa.act_arr(*Y.alabel(f)))
    gamma = {}
    for o, h in diag.pairs():
        x, g = Y.olabel(o)
        hinv = sg.inv(h)
        hinv_g = sg.mul(hinv, g)
        inner = G.compose(G.inv[sg.alpha[h, hinv, g]], sg.mul_arr(G.inv[sg.iota_r[h]], sg.idt(g)),
                          G.inv[sg.lam[g]])
        gamma[o, h] = X.comp[wa.beta[x, h, hinv_g], wa.act_arr(X.unit[x], inner)]
    return FiberedAction(diag, P, gamma)


def identify_product_quotient(wa: WeakAction) -> Verdict:
    """The map ``(X x_M G) // G -> X`` induced by the action is an equivalence."""
    fa = action_map_fibers(wa)
    pre = prequotient(fa.action)
    Phi, _ = universal_map(pre, fa)
    v = is_equivalence(Phi)
    if not v:
        return Verdict.fail(f"identification:{v.witness.law}", *v.witness.ids)
    return Verdict.ok()


# ---------------------------------------------------------------------------
# quotient in stages


def first_factor_action(wa: WeakAction, sg1: StackyGroupoidPresentation,
                        sg2: StackyGroupoidPresentation) -> WeakAction:
    """``x.g1 = x.(g1, 1)`` for an action of ``sg1 x sg2``."""
    sg, X = wa.sg, wa.X
    G = sg.G
    n2 = sg2.M.n_objects

    def one2(x):
        return sg2.one(wa.moment(x) % n2)

    def lift(g1, x):
        return G.obj((g1, one2(x)))

    return make_action(
        sg1, X, moment=lambda x: wa.moment(x) // n2,
        act=lambda x, g1: wa.act(x, lift(g1, x)),
        act_arr=lambda b, j1: wa.act_arr(b, G.arr((j1, sg2.idt(one2(X.src[b]))))),
        beta=lambda x, g1, h1: X.comp[
            wa.beta[x, lift(g1, x), lift(h1, x)],
            wa.act_arr(X.unit[x], G.arr((sg1.idt(sg1.mul(g1, h1)), sg2.G.inv[sg2.lam[one2(x)]])))],
        epsilon=lambda x: wa.epsilon[x], name=f"{wa.name}|first")


def _xi(wa, sg1, sg2, x, g1, g2):
    """``xi1: x(g1, g2) -> (x(1, g2))(g1, 1)`` and ``xi2: x(g1, g2) -> (x(g1, 1))(1, g2)``."""
    sg, X = wa.sg, wa.X
    G = sg.G
    one1 = sg1.one(sg1.trg(g1))
    one1s = sg1.one(sg1.src(g1))
    one2 = sg2.one(sg2.src(g2))
    one2t = sg2.one(sg2.trg(g2))
    ux = X.unit[x]
    xi1 = X.comp[wa.beta[x, G.obj((one1, g2)), G.obj((g1, one2))],
                 wa.act_arr(ux, G.arr((sg1.G.inv[sg1.lam[g1]], sg2.G.inv[sg2.rho[g2]])))]
    xi2 = X.comp[wa.beta[x, G.obj((g1, one2t)), G.obj((one1s, g2))],
                 wa.act_arr(ux, G.arr((sg1.G.inv[sg1.rho[g1]], sg2.G.inv[sg2.lam[g2]])))]
    return xi1, xi2


def second_factor_action(wa: WeakAction, sg1: StackyGroupoidPresentation,
                         sg2: StackyGroupoidPresentation, pre1: PrequotientGroupoid) -> WeakAction:
    """The induced action of ``sg2`` on ``X // sg1``: ``[g1, b].j2 = [g1, (b . (1, j2)) o xi2 o xi1^-1]``."""
    sg, X = wa.sg, wa.X
    G = sg.G
    Y = pre1.carrier
    n2 = sg2.M.n_objects

    def one1(x):
        return sg1.one(wa.moment(x) // n2)

    def lift(g2, x):
        return G.obj((one1(x), g2))

    def act_arr(c, j2):
        x, g1, b = pre1.representative(c)
        g2 = sg2.G.src[j2]
        xi1, xi2 = _xi(wa, sg1, sg2, x, g1, g2)
        moved = wa.act_arr(b, G.arr((sg1.idt(sg1.one(sg1.src(g1))), j2)))
        return pre1.cls(wa.act(x, lift(g2, x)), g1, X.compose(moved, xi2, X.inv[xi1]))

    return make_action(
        sg2, Y, moment=lambda x: wa.moment(x) % n2,
        act=lambda x, g2: wa.act(x, lift(g2, x)),
        act_arr=act_arr,
        beta=lambda x, g2, h2: pre1.q.ar(X.comp[
            wa.beta[x, lift(g2, x), lift(h2, x)],
            wa.act_arr(X.unit[x], G.arr((sg1.G.inv[sg1.lam[one1(x)]], sg2.idt(sg2.mul(g2, h2)))))]),
        epsilon=lambda x: pre1.q.ar(wa.epsilon[x]), name=f"{wa.name}|second")


def quotient_in_stages(wa: WeakAction, sg1: StackyGroupoidPresentation,
                       sg2: StackyGroupoidPresentation) -> Verdict:
    """``(X // G1) // G2 -> X // (G1 x G2)``, ``[g2, [g1, b]] -> [(g1, g2), b o xi1]``, is an equivalence."""
    wa = _right(wa)
    G = wa.sg.G
    act1 = first_factor_action(wa, sg1, sg2)
    v = check_a2_a4(act1)
    if not v:
        return Verdict.fail(f"first-action:{v.witness.law}", *v.witness.ids)
    pre1 = prequotient(act1)
    act2 = second_factor_action(wa, sg1, sg2, pre1)
    v = check_a2_a4(act2)
    if not v:
        return Verdict.fail(f"second-action:{v.witness.law}", *v.witness.ids)
    pre2 = prequotient(act2)
    whole = prequotient(wa)
    X = wa.X
    values = []
    for grp in pre2.members:
        images = set()
        for x, g2, c in grp:
            _, g1, b = pre1.representative(c)
            xi1, _ = _xi(wa, sg1, sg2, x, g1, g2)
            images.add(whole.cls(x, G.obj((g1, g2)), X.comp[b, xi1]))
        if len(images) != 1:
            return Verdict.fail("comparison-well-defined", *grp[0])
        values.append(images.pop())
    Phi = GroupoidFunctor(pre2.carrier, whole.carrier, tuple(X.objects), tuple(values))
    v = validate_functor(Phi)
    if not v:
        return Verdict.fail(f"comparison:{v.witness.law}", *v.witness.ids)
    v = is_equivalence(Phi)
    if not v:
        return Verdict.fail(f"comparison:{v.witness.law}", *v.witness.ids)
    return Verdict.ok(stages=pre2.carrier.n_arrows, whole=whole.carrier.n_arrows)
