"""Strict bundle theory: principal set bundles, bibundles, tensor products, gauge groupoids.

A ``G``-``H`` bibundle is a finite set with a left ``G`` action along ``a`` and
a right ``H`` action along ``b`` that commute.  Right principal means the ``H``
action is principal over ``a``; left principal means the ``G`` action is
principal over ``b``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

from networkx.utils import UnionFind

from .core import (
    AxiomError, FiniteGroupoid, GroupoidFunctor, SetAction, StructuralError, Verdict,
    build_groupoid, functor_from, is_equivalence, iso_comma, object_inclusion,
    strict_fibred_product, translation_groupoid, validate_functor,
    validate_set_action,
)


def is_principal_set_bundle(sa: SetAction, r: Sequence[int], n_base: int) -> Verdict:
    """``r`` surjective and ``(z, g) -> (z, zg)`` a bijection onto ``X x_S X``.

    For left actions the map is ``(g, z) -> (gz, z)``.  Raises :class:`AxiomError`
    if the action does not preserve the fibres of ``r``.
    """
    v = validate_set_action(sa)
    if not v:
        raise AxiomError(v)
    if len(r) != sa.n_points:
        raise StructuralError("r needs one value per point")
    for z, g in sa.acting_pairs():
        if r[sa(z, g)] != r[z]:
            raise AxiomError(Verdict.fail("fiber", z, g))
    hit = set(r)
    for s in range(n_base):
        if s not in hit:
            return Verdict.fail("surjective", s)
    seen: dict[tuple[int, int], int] = {}
    for z, g in sa.acting_pairs():
        pair = (z, sa(z, g)) if sa.side == "right" else (sa(z, g), z)
        if pair in seen:
            return Verdict.fail("injective", z, seen[pair], g)
        seen[pair] = g
    for z in sa.points:
        for w in sa.points:
            if r[z] == r[w] and (z, w) not in seen:
                return Verdict.fail("onto-pairs", z, w)
    return Verdict.ok()


@dataclass(frozen=True)
class StrictBibundle:
    """``left[g, p]`` is defined when ``a[p] == src g``; ``right[p, h]`` when ``b[p] == tgt h``."""

    G: FiniteGroupoid
    H: FiniteGroupoid
    n_points: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    left: Mapping[tuple[int, int], int]
    right: Mapping[tuple[int, int], int]
    point_labels: tuple[Hashable, ...] | None = field(default=None, compare=False)

    __hash__ = None

    @property
    def points(self) -> range:
        return range(self.n_points)

    def left_action(self) -> SetAction:
        return SetAction(self.G, self.n_points, self.a, self.left, "left")

    def right_action(self) -> SetAction:
        return SetAction(self.H, self.n_points, self.b, self.right, "right")

    def point(self, label) -> int:
        return self.point_labels.index(label)


def make_bibundle(G: FiniteGroupoid, H: FiniteGroupoid, points: Sequence[Hashable], a, b,
                  left, right) -> StrictBibundle:
    """Tabulate from labels: ``a``, ``b`` on labels; ``left(g, p)`` and ``right(p, h)`` return labels."""
    points = list(points)
    index = {p: i for i, p in enumerate(points)}
    av = tuple(a(p) for p in points)
    bv = tuple(b(p) for p in points)
    left_table = {(g, i): index[left(g, p)] for i, p in enumerate(points)
                  for g in G.arrows_from(av[i])}
    right_table = {(i, h): index[right(p, h)] for i, p in enumerate(points)
                   for h in H.arrows_into(bv[i])}
    return StrictBibundle(G, H, len(points), av, bv, left_table, right_table, tuple(points))


def validate_bibundle(bb: StrictBibundle) -> Verdict:
    """Both actions valid, each preserves the other's moment, and they commute."""
    for side, sa in (("left", bb.left_action()), ("right", bb.right_action())):
        v = validate_set_action(sa)
        if not v:
            return Verdict.fail(f"{side}:{v.witness.law}", *v.witness.ids)
    for (g, p), q in bb.left.items():
        if bb.b[q] != bb.b[p]:
            return Verdict.fail("left-preserves-b", g, p)
    for (p, h), q in bb.right.items():
        if bb.a[q] != bb.a[p]:
            return Verdict.fail("right-preserves-a", p, h)
    for (g, p), q in bb.left.items():
        for h in bb.H.arrows_into(bb.b[p]):
            if bb.right[q, h] != bb.left[g, bb.right[p, h]]:
                return Verdict.fail("commute", g, p, h)
    return Verdict.ok()


def is_right_principal(bb: StrictBibundle) -> Verdict:
    return is_principal_set_bundle(bb.right_action(), bb.a, bb.G.n_objects)


def is_left_principal(bb: StrictBibundle) -> Verdict:
    return is_principal_set_bundle(bb.left_action(), bb.b, bb.H.n_objects)


def is_biprincipal_strict(bb: StrictBibundle) -> Verdict:
    """Both principality verdicts; the failing side is named in the witness."""
    for side, check in (("right", is_right_principal), ("left", is_left_principal)):
        v = check(bb)
        if not v:
            return Verdict.fail(f"{side}:{v.witness.law}", *v.witness.ids)
    return Verdict.ok()


def bibundle_from_morphism(phi: GroupoidFunctor) -> StrictBibundle:
    """Points ``(x, h)`` with ``phi(x) = t(h)``; ``g(x, h) = (t g, phi(g) h)`` and ``(x, h)h' = (x, hh')``."""
    v = validate_functor(phi)
    if not v:
        raise AxiomError(v)
    G, H = phi.dom, phi.cod
    points = [(x, h) for x in G.objects for h in H.arrows_into(phi.ob(x))]
    return make_bibundle(
        G, H, points, a=lambda p: p[0], b=lambda p: H.src[p[1]],
        left=lambda g, p: (G.tgt[g], H.comp[phi.ar(g), p[1]]),
        right=lambda p, h: (p[0], H.comp[p[1], h]))


def unit_bibundle(G: FiniteGroupoid) -> StrictBibundle:
    """``G`` acting on its own arrows from both sides."""
    return make_bibundle(G, G, list(G.arrows), a=lambda f: G.tgt[f], b=lambda f: G.src[f],
                         left=lambda g, f: G.comp[g, f], right=lambda f, h: G.comp[f, h])


def flip_strict_bibundle(bb: StrictBibundle) -> StrictBibundle:
    """The ``H``-``G`` bibundle on the same set: ``h.p = p h^-1`` and ``p.g = g^-1 p``."""
    G, H = bb.G, bb.H
    return StrictBibundle(H, G, bb.n_points, bb.b, bb.a,
                          {(H.inv[h], p): q for (p, h), q in bb.right.items()},
                          {(p, G.inv[g]): q for (g, p), q in bb.left.items()}, bb.point_labels)


def tensor_bibundles(P: StrictBibundle, Q: StrictBibundle) -> StrictBibundle:
    """Orbits of ``P x_{H0} Q`` under ``(z, w)h = (zh, h^-1 w)``; labels are least orbit members."""
    if P.H != Q.G:
        raise StructuralError("the middle groupoids differ")
    H = P.H
    pairs = [(z, w) for z in P.points for w in Q.points if P.b[z] == Q.a[w]]
    uf = UnionFind(pairs)
    for z, w in pairs:
        for h in H.arrows_into(P.b[z]):
            uf.union((z, w), (P.right[z, h], Q.left[H.inv[h], w]))
    orbits = sorted(tuple(sorted(s)) for s in uf.to_sets())
    rep = {m: orb[0] for orb in orbits for m in orb}
    return make_bibundle(
        P.G, Q.H, [orb[0] for orb in orbits],
        a=lambda p: P.a[p[0]], b=lambda p: Q.b[p[1]],
        left=lambda g, p: rep[P.left[g, p[0]], p[1]],
        right=lambda p, k: rep[p[0], Q.right[p[1], k]])


def is_weak_equivalence(phi: GroupoidFunctor) -> Verdict:
    """(1) ``(x, h) -> s(h)`` onto ``H0`` over ``phi0(x) = t(h)``; (2) ``G -> (G0 x G0) x H`` bijective."""
    G, H = phi.dom, phi.cod
    reached = {H.src[h] for x in G.objects for h in H.arrows_into(phi.ob(x))}
    for y in H.objects:
        if y not in reached:
            return Verdict.fail("surjective", y)
    image = {}
    for g in G.arrows:
        key = (G.src[g], G.tgt[g], phi.ar(g))
        if key in image:
            return Verdict.fail("cartesian-injective", image[key], g)
        image[key] = g
    for x in G.objects:
        for y in G.objects:
            for h in H.hom(phi.ob(x), phi.ob(y)):
                if (x, y, h) not in image:
                    return Verdict.fail("cartesian-surjective", x, y, h)
    return Verdict.ok()


def gauge_groupoid(sa: SetAction, r: Sequence[int], n_base: int) -> FiniteGroupoid:
    """Orbits ``[x, y]: r(y) -> r(x)`` of pairs over the same moment, under the diagonal action.

    Composition translates the second pair so its first entry matches, using that the
    action is principal over ``r``.
    """
    v = is_principal_set_bundle(sa, r, n_base)
    if not v:
        raise AxiomError(v)
    pairs = [(x, y) for x in sa.points for y in sa.points if sa.moment[x] == sa.moment[y]]
    uf = UnionFind(pairs)
    moves = defaultdict(list)
    for z, g in sa.acting_pairs():
        moves[z].append(g)
    for x, y in pairs:
        for g in moves[x]:
            uf.union((x, y), (sa(x, g), sa(y, g)))
    orbits = sorted(tuple(sorted(s)) for s in uf.to_sets())
    rep = {m: orb[0] for orb in orbits for m in orb}
    division = {}
    for z, g in sa.acting_pairs():
        division[z, sa(z, g)] = g

    def compose(f, k):
        x, y = f
        y2, z = k
        g = division[y2, y]
        return rep[x, sa(z, g)]

    return build_groupoid(
        range(n_base), [orb[0] for orb in orbits],
        src=lambda f: r[f[1]], tgt=lambda f: r[f[0]], compose=compose,
        inverse=lambda f: rep[f[1], f[0]], unit=lambda s: rep[next((x, x) for x in sa.points if r[x] == s)])


def find_bibundle_isomorphism(P: StrictBibundle, Q: StrictBibundle) -> tuple[int, ...] | None:
    """An equivariant bijection ``P -> Q`` preserving both moments, by backtracking.

    Fixing the image of one point determines it on the whole orbit of the two actions,
    so candidates are pruned by moment fibres and propagated along orbits.
    """
    if P.n_points != Q.n_points or P.G != Q.G or P.H != Q.H:
        return None
    G, H = P.G, P.H

    def neighbours(bb, p):
        for g in G.arrows_from(bb.a[p]):
            yield ("l", g), bb.left[g, p]
        for h in H.arrows_into(bb.b[p]):
            yield ("r", h), bb.right[p, h]

    def step(bb, p, move):
        kind, x = move
        return bb.left[x, p] if kind == "l" else bb.right[p, x]

    def propagate(assign, used, p, q):
        stack = [(p, q)]
        new = []
        while stack:
            p, q = stack.pop()
            if p in assign:
                if assign[p] != q:
                    undo(assign, used, new)
                    return None
                continue
            if q in used or P.a[p] != Q.a[q] or P.b[p] != Q.b[q]:
                undo(assign, used, new)
                return None
            assign[p] = q
            used.add(q)
            new.append(p)
            for move, p2 in neighbours(P, p):
                stack.append((p2, step(Q, q, move)))
        return new

    def undo(assign, used, added):
        for p in added:
            used.discard(assign.pop(p))

    def search(assign, used):
        free = next((p for p in P.points if p not in assign), None)
        if free is None:
            return tuple(assign[p] for p in P.points)
        for q in Q.points:
            if q in used:
                continue
            added = propagate(assign, used, free, q)
            if added is None:
                continue
            found = search(assign, used)
            if found is not None:
                return found
            undo(assign, used, added)
        return None

    return search({}, set())


# ---------------------------------------------------------------------------
# named cross-checks


def projection_bibundle(X: FiniteGroupoid, G: FiniteGroupoid, mX: Sequence[int],
                        mG: Sequence[int]) -> tuple[StrictBibundle, GroupoidFunctor]:
    """For ``X, G`` over a set through object maps ``mX``, ``mG`` (constant on components):
    the bibundle ``G0 x_M X`` of the projection ``X x_M G -> X`` and the projection itself.

    Points ``(g0, x)`` with ``x`` an arrow of ``X``; ``(x, g)(g0, x') = (t g, x x')`` and
    ``(g0, x')x = (g0, x'x)``.
    """
    from .core import discrete_groupoid
    base = discrete_groupoid(max(list(mX) + list(mG), default=-1) + 1)
    to_base_x = functor_from(X, base, lambda x: mX[x], lambda f: mX[X.src[f]])
    to_base_g = functor_from(G, base, lambda g: mG[g], lambda f: mG[G.src[f]])
    for F in (to_base_x, to_base_g):
        v = validate_functor(F)
        if not v:
            raise AxiomError(v)
    XG = strict_fibred_product(to_base_x, to_base_g)
    proj = functor_from(XG, X, lambda o: XG.olabel(o)[0], lambda f: XG.alabel(f)[0])
    points = [(g0, x) for g0 in G.objects for x in X.arrows if mG[g0] == mX[X.tgt[x]]]
    bb = make_bibundle(
        XG, X, points,
        a=lambda p: XG.obj((X.tgt[p[1]], p[0])), b=lambda p: X.src[p[1]],
        left=lambda f, p: (G.tgt[XG.alabel(f)[1]], X.comp[XG.alabel(f)[0], p[1]]),
        right=lambda p, x: (p[0], X.comp[p[1], x]))
    return bb, proj


def paired_bibundle(E1: StrictBibundle, E2: StrictBibundle, mY: Sequence[int],
                    mZ: Sequence[int]) -> StrictBibundle:
    """``E1 x_{X0} E2`` as an ``X``-``(Y x_M Z)`` bibundle, acting diagonally on the left."""
    if E1.G != E2.G:
        raise StructuralError("both bibundles need the same left groupoid")
    X, Y, Z = E1.G, E1.H, E2.H
    from .core import discrete_groupoid
    base = discrete_groupoid(max(list(mY) + list(mZ), default=-1) + 1)
    fy = functor_from(Y, base, lambda y: mY[y], lambda f: mY[Y.src[f]])
    fz = functor_from(Z, base, lambda z: mZ[z], lambda f: mZ[Z.src[f]])
    YZ = strict_fibred_product(fy, fz)
    points = [(e1, e2) for e1 in E1.points for e2 in E2.points if E1.a[e1] == E2.a[e2]]
    for e1, e2 in points:
        if mY[E1.b[e1]] != mZ[E2.b[e2]]:
            raise AxiomError(Verdict.fail("paired-moments", e1, e2))
    return make_bibundle(
        X, YZ, points, a=lambda p: E1.a[p[0]], b=lambda p: YZ.obj((E1.b[p[0]], E2.b[p[1]])),
        left=lambda g, p: (E1.left[g, p[0]], E2.left[g, p[1]]),
        right=lambda p, f: (E1.right[p[0], YZ.alabel(f)[0]], E2.right[p[1], YZ.alabel(f)[1]]))


def check_bibundle_pullback(phi: GroupoidFunctor) -> Verdict:
    """The translation groupoid of ``X`` on the bibundle of ``phi`` is equivalent to ``iso_comma(phi, H0 -> H)``.

    ``(x0, h) -> (x0, h^-1, s h)`` on objects and ``(g, (x0, h)) -> (g, id, h^-1)`` on arrows.
    """
    bb = bibundle_from_morphism(phi)
    T = translation_groupoid(bb.left_action())
    incl = object_inclusion(phi.cod)
    C = iso_comma(phi, incl)
    H = phi.cod

    def on_object(p):
        x0, h = bb.point_labels[p]
        return C.obj((x0, H.inv[h], H.src[h]))

    def on_arrow(f):
        g, p = T.alabel(f)
        x0, h = bb.point_labels[p]
        return C.arr((g, H.src[h], H.inv[h]))

    F = functor_from(T, C, on_object, on_arrow)
    v = validate_functor(F)
    if not v:
        return Verdict.fail(f"comparison:{v.witness.law}", *v.witness.ids)
    return is_equivalence(F)
