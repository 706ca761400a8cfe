"""Weak groupoid objects in finite groupoids.

A presentation consists of a discrete base ``M``, a groupoid ``G`` whose
*objects* play the role of the arrows of the stacky groupoid, structure
functors ``s, t: G -> M``, ``u: M -> G``, ``i: G -> G`` and a multiplication
``m`` defined on the strict fibred product ``G2 = {(g, h) : s(g) = t(h)}``,
together with component tables for the structure isomorphisms:

* ``alpha[g, h, k]: g(hk) -> (gh)k``
* ``lam[g]: 1.g -> g`` and ``rho[g]: g.1 -> g``
* ``iota_l[g]: g^-1 g -> 1`` and ``iota_r[g]: g g^-1 -> 1``

Juxtaposition means ``m`` on objects; ``sg.mul_arr(a, b)`` is ``m`` on arrows.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping

from .core import (
    AxiomError, FiniteGroup, FiniteGroupoid, GroupoidFunctor, Law, StructuralError, Verdict,
    build_groupoid, check_laws, constant_functor, discrete_groupoid, group_groupoid,
    is_homomorphism, iso_comma, point, product_groupoid, restrict_groupoid,
    strict_fibred_product, validate_functor, validate_group,
)


class ThetaError(ValueError):
    """No arrow, or more than one, satisfies the defining equation of theta."""


@dataclass(frozen=True)
class StackyGroupoidPresentation:
    M: FiniteGroupoid
    G: FiniteGroupoid
    s: GroupoidFunctor
    t: GroupoidFunctor
    u: GroupoidFunctor
    i: GroupoidFunctor
    m: GroupoidFunctor
    alpha: Mapping[tuple[int, int, int], int]
    lam: tuple[int, ...]
    rho: tuple[int, ...]
    iota_l: tuple[int, ...]
    iota_r: tuple[int, ...]
    name: str = ""

    __hash__ = None

    @property
    def G2(self) -> FiniteGroupoid:
        return self.m.dom

    @property
    def base(self) -> range:
        return self.M.objects

    def src(self, g: int) -> int:
        return self.s.on_objects[g]

    def trg(self, g: int) -> int:
        return self.t.on_objects[g]

    def one(self, p: int) -> int:
        return self.u.on_objects[p]

    def idt(self, g: int) -> int:
        return self.G.unit[g]

    def inv(self, g: int) -> int:
        return self.i.on_objects[g]

    def inv_arr(self, a: int) -> int:
        return self.i.on_arrows[a]

    def mul(self, g: int, h: int) -> int:
        return self.m.on_objects[self.G2.obj((g, h))]

    def mul_arr(self, a: int, b: int) -> int:
        return self.m.on_arrows[self.G2.arr((a, b))]

    def pairs(self) -> Iterable[tuple[int, int]]:
        return (self.G2.olabel(o) for o in self.G2.objects)

    def triples(self) -> Iterable[tuple[int, int, int]]:
        G = self.G
        for g, h in self.pairs():
            for k in G.objects:
                if self.src(h) == self.trg(k):
                    yield g, h, k

    def quadruples(self) -> Iterable[tuple[int, int, int, int]]:
        for k, g, h in self.triples():
            for l in self.G.objects:
                if self.src(h) == self.trg(l):
                    yield k, g, h, l


def assemble(n_base: int, G: FiniteGroupoid, *, s_obj: Callable, t_obj: Callable, u_obj: Callable,
             i_obj: Callable, i_arr: Callable, m_obj: Callable, m_arr: Callable,
             alpha: Callable, lam: Callable, rho: Callable, iota_l: Callable, iota_r: Callable,
             name: str = "") -> StackyGroupoidPresentation:
    """Build a presentation from callables on object and arrow identifiers of ``G``."""
    M = discrete_groupoid(n_base)
    s = GroupoidFunctor(G, M, tuple(s_obj(g) for g in G.objects), tuple(s_obj(G.src[f]) for f in G.arrows))
    t = GroupoidFunctor(G, M, tuple(t_obj(g) for g in G.objects), tuple(t_obj(G.src[f]) for f in G.arrows))
    u = GroupoidFunctor(M, G, tuple(u_obj(p) for p in M.objects), tuple(G.unit[u_obj(p)] for p in M.objects))
    i = GroupoidFunctor(G, G, tuple(i_obj(g) for g in G.objects), tuple(i_arr(f) for f in G.arrows))
    G2 = strict_fibred_product(s, t)
    m = GroupoidFunctor(G2, G, tuple(m_obj(*G2.olabel(o)) for o in G2.objects),
                        tuple(m_arr(*G2.alabel(f)) for f in G2.arrows))
    sg = StackyGroupoidPresentation(M, G, s, t, u, i, m, {}, (), (), (), (), name)
    return StackyGroupoidPresentation(
        M, G, s, t, u, i, m,
        {trip: alpha(*trip) for trip in sg.triples()},
        tuple(lam(g) for g in G.objects), tuple(rho(g) for g in G.objects),
        tuple(iota_l(g) for g in G.objects), tuple(iota_r(g) for g in G.objects), name)


# ---------------------------------------------------------------------------
# constructions


def strict_presentation(K: FiniteGroupoid, name: str = "") -> StackyGroupoidPresentation:
    """An ordinary groupoid: ``G`` is discrete on the arrows of ``K`` and every 2-cell is a unit."""
    G = discrete_groupoid(K.n_arrows)
    return assemble(
        K.n_objects, G,
        s_obj=lambda g: K.src[g], t_obj=lambda g: K.tgt[g], u_obj=lambda p: K.unit[p],
        i_obj=lambda g: K.inv[g], i_arr=lambda f: K.inv[f],
        m_obj=lambda g, h: K.comp[g, h], m_arr=lambda a, b: K.comp[a, b],
        alpha=lambda g, h, k: K.comp[K.comp[g, h], k], lam=lambda g: g, rho=lambda g: g,
        iota_l=lambda g: K.unit[K.src[g]], iota_r=lambda g: K.unit[K.tgt[g]],
        name=name or "strict")


def group_presentation(grp: FiniteGroup) -> StackyGroupoidPresentation:
    """A finite group as a strict presentation over a point."""
    return strict_presentation(group_groupoid(grp), grp.name)


@dataclass(frozen=True)
class CrossedModuleData:
    """Homomorphism ``phi: A -> K`` of finite abelian groups."""

    A: FiniteGroup
    K: FiniteGroup
    phi: tuple[int, ...]

    __hash__ = None


def validate_crossed_module(cm: CrossedModuleData) -> Verdict:
    for label, grp in (("A", cm.A), ("K", cm.K)):
        v = validate_group(grp)
        if not v:
            return Verdict.fail(f"{label}-{v.witness.law}", *v.witness.ids)
        if not grp.is_abelian:
            return Verdict.fail(f"{label}-abelian")
    return is_homomorphism(cm.phi, cm.A, cm.K)


def from_crossed_module(cm: CrossedModuleData) -> StackyGroupoidPresentation:
    """Translation groupoid of ``A`` on ``K`` (``k -> k + phi(a)``) with the direct-product 2-group structure.

    Arrow labels are ``(k, a)``, an arrow ``k -> k + phi(a)``.
    """
    v = validate_crossed_module(cm)
    if not v:
        raise AxiomError(v)
    A, K, phi = cm.A, cm.K, cm.phi

    def shift(k, a):
        return K.mul(k, phi[a])

    G = build_groupoid(
        K.elements, [(k, a) for k in K.elements for a in A.elements],
        src=lambda f: f[0], tgt=lambda f: shift(*f),
        compose=lambda f, g: (g[0], A.mul(g[1], f[1])),
        inverse=lambda f: (shift(*f), A.inv(f[1])), unit=lambda k: (k, 0))

    def lab(f):
        return G.alabel(f)

    return assemble(
        1, G,
        s_obj=lambda g: 0, t_obj=lambda g: 0, u_obj=lambda p: 0,
        i_obj=K.inv, i_arr=lambda f: G.arr((K.inv(lab(f)[0]), A.inv(lab(f)[1]))),
        m_obj=K.mul,
        m_arr=lambda a, b: G.arr((K.mul(lab(a)[0], lab(b)[0]), A.mul(lab(a)[1], lab(b)[1]))),
        alpha=lambda g, h, k: G.unit[K.mul(K.mul(g, h), k)],
        lam=lambda g: G.unit[g], rho=lambda g: G.unit[g],
        iota_l=lambda g: G.unit[0], iota_r=lambda g: G.unit[0],
        name=f"[{K.name}/{A.name}]")


def crossed_module_homotopy(cm: CrossedModuleData) -> tuple[int, int]:
    """Orders of ``coker phi`` and ``ker phi``."""
    image = set(cm.phi)
    return cm.K.order // len(image), sum(1 for a in cm.A.elements if cm.phi[a] == 0)


@dataclass(frozen=True)
class Skeletal2GroupData:
    """Skeletal 2-group: objects ``pi1``, automorphisms ``pi2``, associator ``omega``.

    ``act[g][a]`` is the action of ``g`` on ``a``; ``omega[g, h, k]`` lies in ``pi2``.
    """

    pi1: FiniteGroup
    pi2: FiniteGroup
    act: tuple[tuple[int, ...], ...]
    omega: Mapping[tuple[int, int, int], int]

    __hash__ = None

    @classmethod
    def trivial_action(cls, pi1: FiniteGroup, pi2: FiniteGroup, omega) -> "Skeletal2GroupData":
        act = tuple(tuple(pi2.elements) for _ in pi1.elements)
        return cls(pi1, pi2, act, dict(omega))


def validate_skeletal(sk: Skeletal2GroupData) -> Verdict:
    v = validate_group(sk.pi1) and validate_group(sk.pi2)
    if not v:
        return v
    if not sk.pi2.is_abelian:
        return Verdict.fail("pi2-abelian")
    n1, n2 = sk.pi1.order, sk.pi2.order
    if len(sk.act) != n1 or any(len(row) != n2 for row in sk.act):
        raise StructuralError("action table has the wrong shape")
    for g in sk.pi1.elements:
        if sorted(sk.act[g]) != list(sk.pi2.elements) or not is_homomorphism(sk.act[g], sk.pi2, sk.pi2):
            return Verdict.fail("act-automorphism", g)
    for g, h, a in product(sk.pi1.elements, sk.pi1.elements, sk.pi2.elements):
        if sk.act[sk.pi1.mul(g, h)][a] != sk.act[g][sk.act[h][a]]:
            return Verdict.fail("act-homomorphism", g, h, a)
    for trip in product(sk.pi1.elements, repeat=3):
        if trip not in sk.omega or not 0 <= sk.omega[trip] < n2:
            raise StructuralError(f"omega{trip} missing or out of range")
    return Verdict.ok()


def is_normalized(sk: Skeletal2GroupData) -> bool:
    return all(v == 0 for (g, h, k), v in sk.omega.items() if 0 in (g, h, k))


def from_skeletal(sk: Skeletal2GroupData) -> StackyGroupoidPresentation:
    """Objects ``pi1``; arrow ``(g, a)`` is the automorphism ``a`` of ``g`` (id ``g * |pi2| + a``).

    ``m((g, a), (h, b)) = (gh, a + g.b)`` and ``alpha[g, h, k] = omega(g, h, k)``.
    Unitors are read off ``omega`` (``lam[g] = omega(1, 1, g)``, ``rho[g] = -omega(g, 1, 1)``),
    so non-normalized candidates are accepted too.
    """
    v = validate_skeletal(sk)
    if not v:
        raise AxiomError(v)
    P1, P2, act, om = sk.pi1, sk.pi2, sk.act, sk.omega
    n2 = P2.order

    def arrow(g, a):
        return g * n2 + a

    G = build_groupoid(
        P1.elements, [(g, a) for g in P1.elements for a in P2.elements],
        src=lambda f: f[0], tgt=lambda f: f[0], compose=lambda f, h: (f[0], P2.mul(f[1], h[1])),
        inverse=lambda f: (f[0], P2.inv(f[1])), unit=lambda g: (g, 0))

    def lam(g):
        return om[0, 0, g]

    def rho(g):
        return P2.inv(om[g, 0, 0])

    return assemble(
        1, G,
        s_obj=lambda g: 0, t_obj=lambda g: 0, u_obj=lambda p: 0,
        i_obj=P1.inv,
        i_arr=lambda f: arrow(P1.inv(f // n2), P2.inv(act[P1.inv(f // n2)][f % n2])),
        m_obj=P1.mul,
        m_arr=lambda a, b: arrow(P1.mul(a // n2, b // n2), P2.mul(a % n2, act[a // n2][b % n2])),
        alpha=lambda g, h, k: arrow(P1.mul(P1.mul(g, h), k), om[g, h, k]),
        lam=lambda g: arrow(g, lam(g)), rho=lambda g: arrow(g, rho(g)),
        iota_l=lambda g: arrow(0, 0),
        iota_r=lambda g: arrow(0, P2.mul(P2.mul(rho(g), P2.inv(lam(g))), P2.inv(om[g, P1.inv(g), g]))),
        name=f"skeletal({P1.name},{P2.name})")


def product_presentation(sg1: StackyGroupoidPresentation,
                         sg2: StackyGroupoidPresentation) -> StackyGroupoidPresentation:
    """Componentwise product; base point ``(p1, p2)`` is ``p1 * |M2| + p2``."""
    n2 = sg2.M.n_objects
    G = product_groupoid(sg1.G, sg2.G)

    def parts(g):
        return G.olabel(g)

    def aparts(f):
        return G.alabel(f)

    def both(f1, f2, *xs):
        return G.obj((f1(*(parts(x)[0] for x in xs)), f2(*(parts(x)[1] for x in xs))))

    def both_arr(f1, f2, *xs):
        return G.arr((f1(*(aparts(x)[0] for x in xs)), f2(*(aparts(x)[1] for x in xs))))

    def obj_cell(c1, c2):
        return lambda *gs: G.arr((c1(*(parts(g)[0] for g in gs)), c2(*(parts(g)[1] for g in gs))))

    return assemble(
        sg1.M.n_objects * n2, G,
        s_obj=lambda g: sg1.src(parts(g)[0]) * n2 + sg2.src(parts(g)[1]),
        t_obj=lambda g: sg1.trg(parts(g)[0]) * n2 + sg2.trg(parts(g)[1]),
        u_obj=lambda p: G.obj((sg1.one(p // n2), sg2.one(p % n2))),
        i_obj=lambda g: both(sg1.inv, sg2.inv, g),
        i_arr=lambda f: both_arr(sg1.inv_arr, sg2.inv_arr, f),
        m_obj=lambda g, h: both(sg1.mul, sg2.mul, g, h),
        m_arr=lambda a, b: both_arr(sg1.mul_arr, sg2.mul_arr, a, b),
        alpha=obj_cell(lambda *x: sg1.alpha[x], lambda *x: sg2.alpha[x]),
        lam=obj_cell(lambda g: sg1.lam[g], lambda g: sg2.lam[g]),
        rho=obj_cell(lambda g: sg1.rho[g], lambda g: sg2.rho[g]),
        iota_l=obj_cell(lambda g: sg1.iota_l[g], lambda g: sg2.iota_l[g]),
        iota_r=obj_cell(lambda g: sg1.iota_r[g], lambda g: sg2.iota_r[g]),
        name=f"{sg1.name}x{sg2.name}")


def isotropy_2group(sg: StackyGroupoidPresentation, x: int) -> StackyGroupoidPresentation:
    """Restriction of all structure to the objects with source and target ``x``."""
    if x not in sg.base:
        raise StructuralError(f"base point {x} absent")
    keep = [g for g in sg.G.objects if sg.src(g) == x == sg.trg(g)]
    H = restrict_groupoid(sg.G, keep)

    def o(g):
        return H.olabel(g)

    def a(f):
        return H.alabel(f)

    return assemble(
        1, H,
        s_obj=lambda g: 0, t_obj=lambda g: 0, u_obj=lambda p: H.obj(sg.one(x)),
        i_obj=lambda g: H.obj(sg.inv(o(g))), i_arr=lambda f: H.arr(sg.inv_arr(a(f))),
        m_obj=lambda g, h: H.obj(sg.mul(o(g), o(h))),
        m_arr=lambda f, k: H.arr(sg.mul_arr(a(f), a(k))),
        alpha=lambda g, h, k: H.arr(sg.alpha[o(g), o(h), o(k)]),
        lam=lambda g: H.arr(sg.lam[o(g)]), rho=lambda g: H.arr(sg.rho[o(g)]),
        iota_l=lambda g: H.arr(sg.iota_l[o(g)]), iota_r=lambda g: H.arr(sg.iota_r[o(g)]),
        name=f"{sg.name}@{x}")


def s_fibre(sg: StackyGroupoidPresentation, x: int) -> FiniteGroupoid:
    """Comma of the inclusion of the base point ``x`` against the source functor."""
    if x not in sg.base:
        raise StructuralError(f"base point {x} absent")
    return iso_comma(constant_functor(point(), sg.M, x), sg.s)


# ---------------------------------------------------------------------------
# structural checks


def validate_presentation(sg: StackyGroupoidPresentation) -> Verdict:
    """Every structure functor is a functor and the base is discrete."""
    M = sg.M
    if M.n_arrows != M.n_objects or any(M.src[f] != M.tgt[f] for f in M.arrows):
        return Verdict.fail("base-discrete")
    for label, F in (("s", sg.s), ("t", sg.t), ("u", sg.u), ("i", sg.i), ("m", sg.m)):
        v = validate_functor(F)
        if not v:
            return Verdict.fail(f"{label}:{v.witness.law}", *v.witness.ids)
    if sg.G2.n_objects and any(sg.G2.olabel(o) is None for o in sg.G2.objects):
        return Verdict.fail("fibred-product-labels")
    return Verdict.ok()


def _g2_cases_base(sg):
    return ((p,) for p in sg.base)


def _g2_cases_obj(sg):
    return ((g,) for g in sg.G.objects)


def _g2_cases_pairs(sg):
    return ((o,) for o in sg.G2.objects)


G2_LAWS: tuple[Law, ...] = (
    Law("s-unit", _g2_cases_base, lambda sg, ids: sg.src(sg.one(ids[0])) == ids[0]),
    Law("t-unit", _g2_cases_base, lambda sg, ids: sg.trg(sg.one(ids[0])) == ids[0]),
    Law("s-inverse", _g2_cases_obj, lambda sg, ids: sg.src(sg.inv(ids[0])) == sg.trg(ids[0])),
    Law("t-inverse", _g2_cases_obj, lambda sg, ids: sg.trg(sg.inv(ids[0])) == sg.src(ids[0])),
    Law("s-mult", _g2_cases_pairs,
        lambda sg, ids: sg.src(sg.m.on_objects[ids[0]]) == sg.src(sg.G2.olabel(ids[0])[1])),
    Law("t-mult", _g2_cases_pairs,
        lambda sg, ids: sg.trg(sg.m.on_objects[ids[0]]) == sg.trg(sg.G2.olabel(ids[0])[0])),
)


def check_g2(sg: StackyGroupoidPresentation) -> Verdict:
    """The six strict identities between structure functors.

    On arrows they follow from the object identities because the base is
    discrete and the functors are valid, which :func:`validate_presentation`
    checks separately.
    """
    return check_laws(sg, G2_LAWS)


def _arrow_triples(sg):
    G = sg.G
    for g, h, k in sg.triples():
        for a in G.arrows_from(g):
            for b in G.arrows_from(h):
                for c in G.arrows_from(k):
                    yield a, b, c


def _has(G, f, x, y):
    return G.src[f] == x and G.tgt[f] == y


def _alpha_shape(sg, ids):
    g, h, k = ids
    return _has(sg.G, sg.alpha[g, h, k], sg.mul(g, sg.mul(h, k)), sg.mul(sg.mul(g, h), k))


def _alpha_natural(sg, ids):
    a, b, c = ids
    G = sg.G
    x = (G.src[a], G.src[b], G.src[c])
    y = (G.tgt[a], G.tgt[b], G.tgt[c])
    return (G.comp[sg.alpha[y], sg.mul_arr(a, sg.mul_arr(b, c))]
            == G.comp[sg.mul_arr(sg.mul_arr(a, b), c), sg.alpha[x]])


def _unit_arrow(sg, p):
    return sg.idt(sg.one(p))


G3_LAWS: tuple[Law, ...] = (
    Law("alpha-shape", lambda sg: iter(sg.triples()), _alpha_shape),
    Law("lambda-shape", _g2_cases_obj,
        lambda sg, ids: _has(sg.G, sg.lam[ids[0]], sg.mul(sg.one(sg.trg(ids[0])), ids[0]), ids[0])),
    Law("rho-shape", _g2_cases_obj,
        lambda sg, ids: _has(sg.G, sg.rho[ids[0]], sg.mul(ids[0], sg.one(sg.src(ids[0]))), ids[0])),
    Law("iota_l-shape", _g2_cases_obj,
        lambda sg, ids: _has(sg.G, sg.iota_l[ids[0]], sg.mul(sg.inv(ids[0]), ids[0]),
                             sg.one(sg.src(ids[0])))),
    Law("iota_r-shape", _g2_cases_obj,
        lambda sg, ids: _has(sg.G, sg.iota_r[ids[0]], sg.mul(ids[0], sg.inv(ids[0])),
                             sg.one(sg.trg(ids[0])))),
    Law("alpha-natural", _arrow_triples, _alpha_natural),
    Law("lambda-natural", lambda sg: ((f,) for f in sg.G.arrows),
        lambda sg, ids: sg.G.comp[sg.lam[sg.G.tgt[ids[0]]],
                                  sg.mul_arr(_unit_arrow(sg, sg.trg(sg.G.src[ids[0]])), ids[0])]
        == sg.G.comp[ids[0], sg.lam[sg.G.src[ids[0]]]]),
    Law("rho-natural", lambda sg: ((f,) for f in sg.G.arrows),
        lambda sg, ids: sg.G.comp[sg.rho[sg.G.tgt[ids[0]]],
                                  sg.mul_arr(ids[0], _unit_arrow(sg, sg.src(sg.G.src[ids[0]])))]
        == sg.G.comp[ids[0], sg.rho[sg.G.src[ids[0]]]]),
    Law("iota_l-natural", lambda sg: ((f,) for f in sg.G.arrows),
        lambda sg, ids: sg.G.comp[sg.iota_l[sg.G.tgt[ids[0]]], sg.mul_arr(sg.inv_arr(ids[0]), ids[0])]
        == sg.iota_l[sg.G.src[ids[0]]]),
    Law("iota_r-natural", lambda sg: ((f,) for f in sg.G.arrows),
        lambda sg, ids: sg.G.comp[sg.iota_r[sg.G.tgt[ids[0]]], sg.mul_arr(ids[0], sg.inv_arr(ids[0]))]
        == sg.iota_r[sg.G.src[ids[0]]]),
)


def check_g3(sg: StackyGroupoidPresentation) -> Verdict:
    """Source/target shape and naturality of the five structure isomorphisms."""
    return check_laws(sg, G3_LAWS)


# ---------------------------------------------------------------------------
# higher coherence


def _pentagon(sg, ids):
    k, g, h, l = ids
    G, mul, mul_arr, al, idt = sg.G, sg.mul, sg.mul_arr, sg.alpha, sg.idt
    lhs = G.compose(al[mul(k, g), h, l], al[k, g, mul(h, l)])
    rhs = G.compose(mul_arr(al[k, g, h], idt(l)), al[k, mul(g, h), l], mul_arr(idt(k), al[g, h, l]))
    return lhs == rhs


def _left_triangle(sg, ids):
    g, h = ids
    one = sg.one(sg.trg(g))
    lhs = sg.G.compose(sg.mul_arr(sg.lam[g], sg.idt(h)), sg.alpha[one, g, h])
    return lhs == sg.lam[sg.mul(g, h)]


def _middle_triangle(sg, ids):
    g, h = ids
    one = sg.one(sg.src(g))
    lhs = sg.G.compose(sg.mul_arr(sg.rho[g], sg.idt(h)), sg.alpha[g, one, h])
    return lhs == sg.mul_arr(sg.idt(g), sg.lam[h])


def _right_triangle(sg, ids):
    g, h = ids
    one = sg.one(sg.src(h))
    lhs = sg.G.compose(sg.rho[sg.mul(g, h)], sg.alpha[g, h, one])
    return lhs == sg.mul_arr(sg.idt(g), sg.rho[h])


def _inverse_triangle(sg, ids):
    (g,) = ids
    gi = sg.inv(g)
    lhs = sg.G.compose(sg.lam[g], sg.mul_arr(sg.iota_r[g], sg.idt(g)), sg.alpha[g, gi, g])
    rhs = sg.G.compose(sg.rho[g], sg.mul_arr(sg.idt(g), sg.iota_l[g]))
    return lhs == rhs


G4_LAWS: tuple[Law, ...] = (
    Law("kghl", lambda sg: iter(sg.quadruples()), _pentagon),
    Law("1gh", lambda sg: iter(sg.pairs()), _left_triangle),
    Law("g1h", lambda sg: iter(sg.pairs()), _middle_triangle),
    Law("gh1", lambda sg: iter(sg.pairs()), _right_triangle),
    Law("gg^-1g", _g2_cases_obj, _inverse_triangle),
)


def check_g4(sg: StackyGroupoidPresentation, diagrams: Iterable[str] | None = None) -> Verdict:
    """The five higher coherence diagrams; ``diagrams`` restricts to a subset by label."""
    laws = G4_LAWS if diagrams is None else tuple(l for l in G4_LAWS if l.name in set(diagrams))
    return check_laws(sg, laws)


def check_presentation(sg: StackyGroupoidPresentation) -> Verdict:
    """Structure functors, strict identities, 2-cell shapes and naturality, then coherence."""
    for check in (validate_presentation, check_g2, check_g3, check_g4):
        v = check(sg)
        if not v:
            return v
    return Verdict.ok()


def coherence_failure_profile(sg: StackyGroupoidPresentation) -> dict[str, int]:
    """Number of failing instances per coherence diagram."""
    return {law.name: sum(1 for ids in law.cases(sg) if not law.holds(sg, ids)) for law in G4_LAWS}


# ---------------------------------------------------------------------------
# inversion 2-cells


def theta_target_cell(sg: StackyGroupoidPresentation, g: int, h: int) -> int:
    """The composite ``((gh)^-1 g) h -> ((h^-1 g^-1) g) h`` that ``theta[g, h]`` must induce."""
    G, mul, mul_arr, idt, inv = sg.G, sg.mul, sg.mul_arr, sg.idt, sg.inv
    gh, gi, hi = mul(g, h), inv(g), inv(h)
    ghi = inv(gh)
    return G.compose(
        mul_arr(sg.alpha[hi, gi, g], idt(h)),
        G.inv[mul_arr(mul_arr(idt(hi), sg.iota_l[g]), idt(h))],
        G.inv[mul_arr(sg.rho[hi], idt(h))],
        G.inv[sg.iota_l[h]],
        sg.iota_l[gh],
        G.inv[sg.alpha[ghi, g, h]],
    )


def _theta_induced(sg, theta, g, h):
    return sg.mul_arr(sg.mul_arr(theta, sg.idt(g)), sg.idt(h))


def derive_theta(sg: StackyGroupoidPresentation, g: int, h: int) -> int:
    """The unique arrow ``(gh)^-1 -> h^-1 g^-1`` inducing :func:`theta_target_cell`."""
    if sg.src(g) != sg.trg(h):
        raise ValueError(f"objects {g} and {h} are not composable")
    target = theta_target_cell(sg, g, h)
    domain, codomain = sg.inv(sg.mul(g, h)), sg.mul(sg.inv(h), sg.inv(g))
    found = [th for th in sg.G.hom(domain, codomain) if _theta_induced(sg, th, g, h) == target]
    if len(found) != 1:
        raise ThetaError(f"theta[{g}, {h}]: {len(found)} candidate arrows satisfy the defining equation")
    return found[0]


def derive_all_theta(sg: StackyGroupoidPresentation) -> dict[tuple[int, int], int]:
    return {(g, h): derive_theta(sg, g, h) for g, h in sg.pairs()}


def derive_chi(sg: StackyGroupoidPresentation) -> tuple[int, ...]:
    """``chi[p]: (1_p)^-1 -> 1_p`` as ``iota_l(1) o rho(1^-1)^-1``."""
    G = sg.G
    return tuple(G.compose(sg.iota_l[sg.one(p)], G.inv[sg.rho[sg.inv(sg.one(p))]]) for p in sg.base)


@dataclass(frozen=True)
class _ThetaData:
    sg: StackyGroupoidPresentation
    theta: Mapping[tuple[int, int], int]
    chi: tuple[int, ...]


def _theta_defining(d, ids):
    g, h = ids
    return _theta_induced(d.sg, d.theta[g, h], g, h) == theta_target_cell(d.sg, g, h)


def _theta_hexagon(d, ids):
    g, h, l = ids
    sg, th = d.sg, d.theta
    G, mul, mul_arr, idt, inv = sg.G, sg.mul, sg.mul_arr, sg.idt, sg.inv
    lhs = G.compose(mul_arr(th[h, l], idt(inv(g))), th[g, mul(h, l)])
    rhs = G.compose(sg.alpha[inv(l), inv(h), inv(g)], mul_arr(idt(inv(l)), th[g, h]),
                    th[mul(g, h), l], sg.inv_arr(sg.alpha[g, h, l]))
    return lhs == rhs


def _theta_chi_left(d, ids):
    (g,) = ids
    sg = d.sg
    p = sg.trg(g)
    lhs = sg.G.compose(sg.rho[sg.inv(g)], sg.mul_arr(sg.idt(sg.inv(g)), d.chi[p]), d.theta[sg.one(p), g])
    return lhs == sg.inv_arr(sg.lam[g])


def _theta_chi_right(d, ids):
    (g,) = ids
    sg = d.sg
    p = sg.src(g)
    lhs = sg.G.compose(sg.lam[sg.inv(g)], sg.mul_arr(d.chi[p], sg.idt(sg.inv(g))), d.theta[g, sg.one(p)])
    return lhs == sg.inv_arr(sg.rho[g])


THETA_LAWS: tuple[Law, ...] = (
    Law("theta-defining", lambda d: iter(d.sg.pairs()), _theta_defining),
    Law("theta-hexagon", lambda d: iter(d.sg.triples()), _theta_hexagon),
    Law("theta-chi-left", lambda d: ((g,) for g in d.sg.G.objects), _theta_chi_left),
    Law("theta-chi-right", lambda d: ((g,) for g in d.sg.G.objects), _theta_chi_right),
)


def check_theta_coherence(sg: StackyGroupoidPresentation,
                          theta: Mapping[tuple[int, int], int] | None = None,
                          chi: tuple[int, ...] | None = None) -> Verdict:
    """Defining equation, hexagon with the associator, and the two unit squares.

    ``theta``/``chi`` default to the derived families; pass altered ones to test them.
    """
    d = _ThetaData(sg, derive_all_theta(sg) if theta is None else theta,
                   derive_chi(sg) if chi is None else chi)
    return check_laws(d, THETA_LAWS)
