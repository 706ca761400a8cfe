"""Finite groupoids, functors, natural isomorphisms and comma constructions.

Conventions used throughout the package:

* objects and arrows are dense integer identifiers;
* ``comp[(g, h)]`` is ``g o h`` (apply ``h`` first) and is defined exactly
  when ``src[g] == tgt[h]``;
* a group multiplies as ``table[a][b] = a * b``.

A worked example of the composition convention: in the pair groupoid on
``{0, 1}`` the arrow ``0 -> 1`` composed after ``1 -> 0`` is the unit of 1,
i.e. ``comp[(a01, a10)] == unit[1]``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from networkx.utils import UnionFind


class StructuralError(ValueError):
    """Malformed tables: wrong lengths or identifiers out of range."""


class AxiomError(ValueError):
    """A construction was handed data that fails one of its axioms."""

    def __init__(self, verdict: "Verdict"):
        super().__init__(f"axiom failed: {verdict.witness}")
        self.verdict = verdict


@dataclass(frozen=True)
class Witness:
    """Named law plus the identifiers on which it fails."""

    law: str
    ids: tuple

    def as_dict(self) -> dict:
        return {"law": self.law, "ids": _plain(self.ids)}


@dataclass(frozen=True)
class Verdict:
    passed: bool
    witness: Witness | None = None
    details: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.passed != (self.witness is None):
            raise ValueError("witness must be present exactly when the check fails")

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def ok(cls, **details) -> "Verdict":
        return cls(True, None, details)

    @classmethod
    def fail(cls, law: str, *ids, **details) -> "Verdict":
        return cls(False, Witness(law, tuple(ids)), details)

    def as_dict(self) -> dict:
        """Fixed shape: ``passed``, ``witness`` (``None`` when passed) and ``details``."""
        return {"passed": self.passed,
                "witness": None if self.witness is None else self.witness.as_dict(),
                "details": _plain(dict(self.details))}


def _plain(value):
    if isinstance(value, Verdict):
        return value.as_dict()
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    return value


@dataclass(frozen=True)
class Law:
    """A named axiom: ``cases(obj)`` enumerates instances, ``holds(obj, ids)`` tests one."""

    name: str
    cases: Callable[[Any], Iterable[tuple]]
    holds: Callable[[Any, tuple], bool]


def check_laws(obj, laws: Sequence[Law]) -> Verdict:
    for law in laws:
        for ids in law.cases(obj):
            if not law.holds(obj, ids):
                return Verdict.fail(law.name, *ids)
    return Verdict.ok()


def replay(obj, laws: Sequence[Law], witness: Witness) -> bool:
    """True when the witness still exhibits a failure of its law on ``obj``."""
    for law in laws:
        if law.name == witness.law:
            try:
                return not law.holds(obj, tuple(witness.ids))
            except (KeyError, IndexError):
                return True
    raise KeyError(f"unknown law {witness.law!r}")


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class FiniteGroup:
    """Finite group given by its multiplication table; identity is element 0."""

    table: tuple[tuple[int, ...], ...]
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def _inverses(self) -> tuple[int, ...]:
        return tuple(next(b for b in self.elements if self.table[a][b] == 0) for a in self.elements)

    def inv(self, a: int) -> int:
        return self._inverses[a]

    @property
    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in self.elements)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), f"Z/{n}")

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls(((0,),), "1")

    def times(self, other: "FiniteGroup") -> "FiniteGroup":
        """Direct product; the pair (a, b) is element ``a * other.order + b``."""
        n = other.order

        def mul(x, y):
            return self.mul(x // n, y // n) * n + other.mul(x % n, y % n)

        size = self.order * n
        return FiniteGroup(tuple(tuple(mul(x, y) for y in range(size)) for x in range(size)),
                           f"{self.name}x{other.name}")


def validate_group(grp: FiniteGroup) -> Verdict:
    n = grp.order
    if n == 0 or any(len(row) != n or any(not 0 <= v < n for v in row) for row in grp.table):
        raise StructuralError("group table must be square with entries in range")
    for a in grp.elements:
        if grp.mul(0, a) != a or grp.mul(a, 0) != a:
            return Verdict.fail("identity", a)
        if not any(grp.mul(a, b) == 0 for b in grp.elements):
            return Verdict.fail("inverse", a)
    for a, b, c in product(grp.elements, repeat=3):
        if grp.mul(grp.mul(a, b), c) != grp.mul(a, grp.mul(b, c)):
            return Verdict.fail("associativity", a, b, c)
    return Verdict.ok()


def is_homomorphism(phi: Sequence[int], dom: FiniteGroup, cod: FiniteGroup) -> Verdict:
    if len(phi) != dom.order or any(not 0 <= v < cod.order for v in phi):
        raise StructuralError("homomorphism table has wrong length or out-of-range entries")
    for a, b in product(dom.elements, repeat=2):
        if phi[dom.mul(a, b)] != cod.mul(phi[a], phi[b]):
            return Verdict.fail("homomorphism", a, b)
    return Verdict.ok()


# ---------------------------------------------------------------------------
# groupoids


@dataclass(frozen=True)
class FiniteGroupoid:
    """Finite groupoid as index tables.  Labels are optional bookkeeping."""

    n_objects: int
    src: tuple[int, ...]
    tgt: tuple[int, ...]
    comp: Mapping[tuple[int, int], int]
    inv: tuple[int, ...]
    unit: tuple[int, ...]
    object_labels: tuple | None = field(default=None, compare=False, repr=False)
    arrow_labels: tuple | None = field(default=None, compare=False, repr=False)

    __hash__ = None

    def __post_init__(self):
        n, a = self.n_objects, len(self.src)
        if n < 0:
            raise StructuralError("negative object count")
        if len(self.tgt) != a or len(self.inv) != a or len(self.unit) != n:
            raise StructuralError("table lengths disagree")
        for name, table, bound in (("src", self.src, n), ("tgt", self.tgt, n),
                                   ("inv", self.inv, a), ("unit", self.unit, a)):
            for i, v in enumerate(table):
                if not isinstance(v, int) or not 0 <= v < bound:
                    raise StructuralError(f"{name}[{i}] = {v!r} out of range")
        if isinstance(self.comp, LazyComposition):
            return
        for (g, h), k in self.comp.items():
            if not (0 <= g < a and 0 <= h < a and isinstance(k, int) and 0 <= k < a):
                raise StructuralError(f"comp[{g}, {h}] = {k!r} out of range")

    @property
    def n_arrows(self) -> int:
        return len(self.src)

    @property
    def objects(self) -> range:
        return range(self.n_objects)

    @property
    def arrows(self) -> range:
        return range(self.n_arrows)

    @cached_property
    def _homs(self) -> dict[tuple[int, int], tuple[int, ...]]:
        homs = defaultdict(list)
        for f in self.arrows:
            homs[self.src[f], self.tgt[f]].append(f)
        return {k: tuple(v) for k, v in homs.items()}

    @cached_property
    def _out(self) -> dict[int, tuple[int, ...]]:
        out = defaultdict(list)
        for f in self.arrows:
            out[self.src[f]].append(f)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _into(self) -> dict[int, tuple[int, ...]]:
        into = defaultdict(list)
        for f in self.arrows:
            into[self.tgt[f]].append(f)
        return {k: tuple(v) for k, v in into.items()}

    def hom(self, x: int, y: int) -> tuple[int, ...]:
        return self._homs.get((x, y), ())

    def arrows_from(self, x: int) -> tuple[int, ...]:
        return self._out.get(x, ())

    def arrows_into(self, x: int) -> tuple[int, ...]:
        return self._into.get(x, ())

    def automorphisms(self, x: int) -> tuple[int, ...]:
        return self.hom(x, x)

    def compose(self, *arrows: int) -> int:
        """``compose(f, g, h) = f o g o h``; raises if not composable."""
        result = arrows[-1]
        for f in reversed(arrows[:-1]):
            if self.src[f] != self.tgt[result]:
                raise ValueError(f"arrows {f} and {result} are not composable")
            result = self.comp[f, result]
        return result

    @cached_property
    def component(self) -> tuple[int, ...]:
        """Least object identifier of each object's isomorphism class."""
        uf = UnionFind(self.objects)
        for f in self.arrows:
            uf.union(self.src[f], self.tgt[f])
        least = {}
        for x in self.objects:
            root = uf[x]
            least.setdefault(root, x)
        return tuple(least[uf[x]] for x in self.objects)

    @cached_property
    def _object_index(self) -> dict:
        return {label: i for i, label in enumerate(self.object_labels or ())}

    @cached_property
    def _arrow_index(self) -> dict:
        return {label: i for i, label in enumerate(self.arrow_labels or ())}

    def obj(self, label) -> int:
        return self._object_index[label]

    def arr(self, label) -> int:
        return self._arrow_index[label]

    def olabel(self, x: int):
        return self.object_labels[x] if self.object_labels is not None else x

    def alabel(self, f: int):
        return self.arrow_labels[f] if self.arrow_labels is not None else f

    def with_tables(self, **changes) -> "FiniteGroupoid":
        """Copy with some tables replaced (labels dropped)."""
        data = dict(n_objects=self.n_objects, src=self.src, tgt=self.tgt, comp=dict(self.comp),
                    inv=self.inv, unit=self.unit)
        data.update(changes)
        return FiniteGroupoid(**data)


class LazyComposition(Mapping):
    """Composition table filled on first lookup; iterating forces every composable pair."""

    def __init__(self, arrows, aidx, src, by_tgt, compose):
        self._arrows, self._aidx, self._src, self._by_tgt = arrows, aidx, src, by_tgt
        self._compose = compose
        self._cache: dict[tuple[int, int], int] = {}

    def __getitem__(self, key):
        try:
            return self._cache[key]
        except KeyError:
            pass
        g, h = key
        if not (0 <= g < len(self._arrows) and 0 <= h < len(self._arrows)):
            raise KeyError(key)
        if h not in self._by_tgt.get(self._src[g], ()):
            raise KeyError(key)
        value = self._cache[key] = self._aidx[self._compose(self._arrows[g], self._arrows[h])]
        return value

    def __iter__(self):
        for g in range(len(self._arrows)):
            for h in self._by_tgt.get(self._src[g], ()):
                yield g, h

    def __len__(self):
        return sum(len(self._by_tgt.get(s, ())) for s in self._src)

    def __contains__(self, key):
        try:
            g, h = key
            return 0 <= g < len(self._arrows) and h in self._by_tgt.get(self._src[g], ())
        except (TypeError, ValueError):
            return False


def build_groupoid(objects: Sequence[Hashable], arrows: Sequence[Hashable],
                   src: Callable, tgt: Callable, compose: Callable,
                   inverse: Callable, unit: Callable) -> FiniteGroupoid:
    """Assemble a groupoid from labelled objects and arrows.

    ``compose(f, g)`` receives labels and returns the label of ``f o g``; it is
    called lazily, the first time a composite is looked up.
    """
    objects, arrows = tuple(objects), tuple(arrows)
    oidx = {o: i for i, o in enumerate(objects)}
    aidx = {a: i for i, a in enumerate(arrows)}
    if len(oidx) != len(objects) or len(aidx) != len(arrows):
        raise StructuralError("duplicate labels")
    s = tuple(oidx[src(a)] for a in arrows)
    t = tuple(oidx[tgt(a)] for a in arrows)
    by_tgt = defaultdict(set)
    for i, x in enumerate(t):
        by_tgt[x].add(i)
    return FiniteGroupoid(
        n_objects=len(objects), src=s, tgt=t, comp=LazyComposition(arrows, aidx, s, dict(by_tgt), compose),
        inv=tuple(aidx[inverse(a)] for a in arrows),
        unit=tuple(aidx[unit(o)] for o in objects),
        object_labels=objects, arrow_labels=arrows,
    )


def _composable_pairs(g: FiniteGroupoid):
    for h in g.arrows:
        for f in g.arrows_from(g.tgt[h]):
            yield f, h


def _comp_domain_cases(g):
    yield from ((("key",) + k) for k in g.comp)
    yield from ((("pair",) + k) for k in _composable_pairs(g))


def _comp_domain_holds(g, ids):
    kind, f, h = ids
    if kind == "key":
        return g.src[f] == g.tgt[h]
    return (f, h) in g.comp


def _comp_endpoints_holds(g, ids):
    f, h = ids
    k = g.comp.get((f, h))
    return k is not None and g.src[k] == g.src[h] and g.tgt[k] == g.tgt[f]


def _assoc_cases(g):
    for h in g.arrows:
        for f2 in g.arrows_from(g.tgt[h]):
            for f1 in g.arrows_from(g.tgt[f2]):
                yield f1, f2, h


def _assoc_holds(g, ids):
    f1, f2, h = ids
    c = g.comp
    left = c.get((f1, f2))
    right = c.get((f2, h))
    if left is None or right is None:
        return False
    return c.get((left, h)) == c.get((f1, right)) is not None


GROUPOID_LAWS: tuple[Law, ...] = (
    Law("unit-endpoints", lambda g: ((x,) for x in g.objects),
        lambda g, ids: g.src[g.unit[ids[0]]] == ids[0] == g.tgt[g.unit[ids[0]]]),
    Law("inverse-endpoints", lambda g: ((f,) for f in g.arrows),
        lambda g, ids: g.src[g.inv[ids[0]]] == g.tgt[ids[0]] and g.tgt[g.inv[ids[0]]] == g.src[ids[0]]),
    Law("comp-domain", _comp_domain_cases, _comp_domain_holds),
    Law("comp-endpoints", lambda g: iter(_composable_pairs(g)), _comp_endpoints_holds),
    Law("left-unit", lambda g: ((f,) for f in g.arrows),
        lambda g, ids: g.comp.get((g.unit[g.tgt[ids[0]]], ids[0])) == ids[0]),
    Law("right-unit", lambda g: ((f,) for f in g.arrows),
        lambda g, ids: g.comp.get((ids[0], g.unit[g.src[ids[0]]])) == ids[0]),
    Law("left-inverse", lambda g: ((f,) for f in g.arrows),
        lambda g, ids: g.comp.get((g.inv[ids[0]], ids[0])) == g.unit[g.src[ids[0]]]),
    Law("right-inverse", lambda g: ((f,) for f in g.arrows),
        lambda g, ids: g.comp.get((ids[0], g.inv[ids[0]])) == g.unit[g.tgt[ids[0]]]),
    Law("associativity", _assoc_cases, _assoc_holds),
)


def validate_groupoid(g: FiniteGroupoid) -> Verdict:
    """All groupoid axioms; the witness names the first failing law."""
    return check_laws(g, GROUPOID_LAWS)


# ---------------------------------------------------------------------------
# functors and natural isomorphisms


@dataclass(frozen=True)
class GroupoidFunctor:
    dom: FiniteGroupoid
    cod: FiniteGroupoid
    on_objects: tuple[int, ...]
    on_arrows: tuple[int, ...]

    __hash__ = None

    def __post_init__(self):
        if len(self.on_objects) != self.dom.n_objects or len(self.on_arrows) != self.dom.n_arrows:
            raise StructuralError("functor tables have the wrong length")
        for name, table, bound in (("on_objects", self.on_objects, self.cod.n_objects),
                                   ("on_arrows", self.on_arrows, self.cod.n_arrows)):
            for i, v in enumerate(table):
                if not isinstance(v, int) or not 0 <= v < bound:
                    raise StructuralError(f"{name}[{i}] = {v!r} out of range")

    def ob(self, x: int) -> int:
        return self.on_objects[x]

    def ar(self, f: int) -> int:
        return self.on_arrows[f]


def functor_from(dom: FiniteGroupoid, cod: FiniteGroupoid,
                 on_objects: Callable[[int], int], on_arrows: Callable[[int], int]) -> GroupoidFunctor:
    return GroupoidFunctor(dom, cod, tuple(on_objects(x) for x in dom.objects),
                           tuple(on_arrows(f) for f in dom.arrows))


def identity_functor(g: FiniteGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(g, g, tuple(g.objects), tuple(g.arrows))


def compose_functors(second: GroupoidFunctor, first: GroupoidFunctor) -> GroupoidFunctor:
    """``second o first``."""
    if first.cod is not second.dom and first.cod != second.dom:
        raise StructuralError("functors are not composable")
    return GroupoidFunctor(first.dom, second.cod,
                           tuple(second.on_objects[x] for x in first.on_objects),
                           tuple(second.on_arrows[f] for f in first.on_arrows))


FUNCTOR_LAWS: tuple[Law, ...] = (
    Law("preserves-source", lambda F: ((f,) for f in F.dom.arrows),
        lambda F, ids: F.cod.src[F.on_arrows[ids[0]]] == F.on_objects[F.dom.src[ids[0]]]),
    Law("preserves-target", lambda F: ((f,) for f in F.dom.arrows),
        lambda F, ids: F.cod.tgt[F.on_arrows[ids[0]]] == F.on_objects[F.dom.tgt[ids[0]]]),
    Law("preserves-unit", lambda F: ((x,) for x in F.dom.objects),
        lambda F, ids: F.on_arrows[F.dom.unit[ids[0]]] == F.cod.unit[F.on_objects[ids[0]]]),
    Law("preserves-comp", lambda F: iter(_composable_pairs(F.dom)),
        lambda F, ids: F.cod.comp.get((F.on_arrows[ids[0]], F.on_arrows[ids[1]]))
        == F.on_arrows[F.dom.comp[ids]]),
)


def validate_functor(F: GroupoidFunctor) -> Verdict:
    return check_laws(F, FUNCTOR_LAWS)


@dataclass(frozen=True)
class NatIso:
    """Natural isomorphism ``source => target`` given by its components."""

    source: GroupoidFunctor
    target: GroupoidFunctor
    components: tuple[int, ...]

    __hash__ = None

    def __post_init__(self):
        if len(self.components) != self.source.dom.n_objects:
            raise StructuralError("one component per object is required")
        if any(not 0 <= c < self.source.cod.n_arrows for c in self.components):
            raise StructuralError("component out of range")

    def __getitem__(self, x: int) -> int:
        return self.components[x]


def _natiso_naturality(eta: NatIso, ids) -> bool:
    (f,) = ids
    d, c = eta.source.dom, eta.source.cod
    left = c.comp.get((eta.target.on_arrows[f], eta.components[d.src[f]]))
    right = c.comp.get((eta.components[d.tgt[f]], eta.source.on_arrows[f]))
    return left is not None and left == right


NATISO_LAWS: tuple[Law, ...] = (
    Law("component-shape", lambda e: ((x,) for x in e.source.dom.objects),
        lambda e, ids: (e.source.cod.src[e.components[ids[0]]] == e.source.on_objects[ids[0]]
                        and e.source.cod.tgt[e.components[ids[0]]] == e.target.on_objects[ids[0]])),
    Law("naturality", lambda e: ((f,) for f in e.source.dom.arrows), _natiso_naturality),
)


def validate_natiso(eta: NatIso) -> Verdict:
    return check_laws(eta, NATISO_LAWS)


def identity_natiso(F: GroupoidFunctor) -> NatIso:
    return NatIso(F, F, tuple(F.cod.unit[F.on_objects[x]] for x in F.dom.objects))


def vertical_compose(second: NatIso, first: NatIso) -> NatIso:
    """``second * first``: components ``second_x o first_x``."""
    cod = first.source.cod
    return NatIso(first.source, second.target,
                  tuple(cod.comp[second.components[x], first.components[x]]
                        for x in first.source.dom.objects))


def inverse_natiso(eta: NatIso) -> NatIso:
    cod = eta.source.cod
    return NatIso(eta.target, eta.source, tuple(cod.inv[c] for c in eta.components))


# ---------------------------------------------------------------------------
# elementary groupoids


def empty_groupoid() -> FiniteGroupoid:
    return FiniteGroupoid(0, (), (), {}, (), ())


def discrete_groupoid(n: int, labels: Sequence[Hashable] | None = None) -> FiniteGroupoid:
    labels = tuple(range(n)) if labels is None else tuple(labels)
    return FiniteGroupoid(n, tuple(range(n)), tuple(range(n)), {(i, i): i for i in range(n)},
                          tuple(range(n)), tuple(range(n)), labels, labels)


def point() -> FiniteGroupoid:
    return discrete_groupoid(1)


def pair_groupoid(n: int) -> FiniteGroupoid:
    """One arrow ``(y, x): x -> y`` for every ordered pair."""
    pts = range(n)
    return build_groupoid(
        pts, [(y, x) for y in pts for x in pts],
        src=lambda a: a[1], tgt=lambda a: a[0],
        compose=lambda f, g: (f[0], g[1]), inverse=lambda a: (a[1], a[0]), unit=lambda x: (x, x))


def group_groupoid(grp: FiniteGroup) -> FiniteGroupoid:
    """The one-object groupoid with automorphism group ``grp``."""
    return FiniteGroupoid(1, (0,) * grp.order, (0,) * grp.order,
                          {(a, b): grp.mul(a, b) for a in grp.elements for b in grp.elements},
                          tuple(grp.inv(a) for a in grp.elements), (0,),
                          ("*",), tuple(grp.elements))


def product_groupoid(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    """Componentwise product; object ``(x1, x2)`` and arrow ``(f1, f2)`` labels are id pairs."""
    return build_groupoid(
        list(product(g1.objects, g2.objects)), list(product(g1.arrows, g2.arrows)),
        src=lambda a: (g1.src[a[0]], g2.src[a[1]]), tgt=lambda a: (g1.tgt[a[0]], g2.tgt[a[1]]),
        compose=lambda f, g: (g1.comp[f[0], g[0]], g2.comp[f[1], g[1]]),
        inverse=lambda a: (g1.inv[a[0]], g2.inv[a[1]]),
        unit=lambda x: (g1.unit[x[0]], g2.unit[x[1]]))


def product_projections(g1: FiniteGroupoid, g2: FiniteGroupoid, prod: FiniteGroupoid):
    return tuple(
        GroupoidFunctor(prod, g, tuple(prod.olabel(x)[k] for x in prod.objects),
                        tuple(prod.alabel(f)[k] for f in prod.arrows))
        for k, g in enumerate((g1, g2)))


def restrict_groupoid(g: FiniteGroupoid, keep: Iterable[int]) -> FiniteGroupoid:
    """Full subgroupoid on ``keep``; labels are the original identifiers."""
    keep = sorted(set(keep))
    for x in keep:
        if not 0 <= x < g.n_objects:
            raise StructuralError(f"object {x} is not in the groupoid")
    kept = set(keep)
    arrows = [f for f in g.arrows if g.src[f] in kept and g.tgt[f] in kept]
    return build_groupoid(keep, arrows, src=lambda f: g.src[f], tgt=lambda f: g.tgt[f],
                          compose=lambda f, h: g.comp[f, h], inverse=lambda f: g.inv[f],
                          unit=lambda x: g.unit[x])


def inclusion_functor(sub: FiniteGroupoid, g: FiniteGroupoid) -> GroupoidFunctor:
    """Inclusion of a subgroupoid built by :func:`restrict_groupoid`."""
    return GroupoidFunctor(sub, g, tuple(sub.object_labels), tuple(sub.arrow_labels))


def isotropy(g: FiniteGroupoid, x: int) -> FiniteGroupoid:
    """Automorphism group of ``x`` as a one-object groupoid."""
    return restrict_groupoid(g, [x])


def object_inclusion(g: FiniteGroupoid) -> GroupoidFunctor:
    """The discrete groupoid on the objects of ``g`` mapped identically into ``g``."""
    d = discrete_groupoid(g.n_objects)
    return GroupoidFunctor(d, g, tuple(g.objects), tuple(g.unit))


def constant_functor(g: FiniteGroupoid, target: FiniteGroupoid, x: int) -> GroupoidFunctor:
    return GroupoidFunctor(g, target, (x,) * g.n_objects, (target.unit[x],) * g.n_arrows)


# ---------------------------------------------------------------------------
# comma and fibred products


def iso_comma(F: GroupoidFunctor, G: GroupoidFunctor) -> FiniteGroupoid:
    """Objects ``(x, a, z)`` with ``a: F(x) -> G(z)``; arrows ``(b1, b2, a)`` leave ``(x, a, z)``."""
    if F.cod != G.cod:
        raise StructuralError("iso_comma needs functors with a common codomain")
    H, X, Z = F.cod, F.dom, G.dom
    objects = [(x, a, z) for x in X.objects for z in Z.objects
               for a in H.hom(F.ob(x), G.ob(z))]

    def target(arrow):
        b1, b2, a = arrow
        return H.compose(G.ar(b2), a, H.inv[F.ar(b1)])

    arrows = [(b1, b2, a) for (x, a, z) in objects
              for b1 in X.arrows_from(x) for b2 in Z.arrows_from(z)]
    return build_groupoid(
        objects, arrows,
        src=lambda f: (X.src[f[0]], f[2], Z.src[f[1]]),
        tgt=lambda f: (X.tgt[f[0]], target(f), Z.tgt[f[1]]),
        compose=lambda f, g: (X.comp[f[0], g[0]], Z.comp[f[1], g[1]], g[2]),
        inverse=lambda f: (X.inv[f[0]], Z.inv[f[1]], target(f)),
        unit=lambda o: (X.unit[o[0]], Z.unit[o[2]], o[1]))


def comma_projections(C: FiniteGroupoid, F: GroupoidFunctor, G: GroupoidFunctor):
    """The two legs of ``iso_comma(F, G)`` and the natural isomorphism ``F pr1 => G pr2``."""
    pr1 = GroupoidFunctor(C, F.dom, tuple(C.olabel(o)[0] for o in C.objects),
                          tuple(C.alabel(f)[0] for f in C.arrows))
    pr2 = GroupoidFunctor(C, G.dom, tuple(C.olabel(o)[2] for o in C.objects),
                          tuple(C.alabel(f)[1] for f in C.arrows))
    eta = NatIso(compose_functors(F, pr1), compose_functors(G, pr2),
                 tuple(C.olabel(o)[1] for o in C.objects))
    return pr1, pr2, eta


def strict_fibred_product(F1: GroupoidFunctor, F2: GroupoidFunctor) -> FiniteGroupoid:
    """Objects ``(x1, x2)`` with ``F1(x1) == F2(x2)`` and arrows likewise (labels are id pairs)."""
    if F1.cod != F2.cod:
        raise StructuralError("strict fibred product needs a common codomain")
    X1, X2 = F1.dom, F2.dom
    by_image = defaultdict(list)
    for x2 in X2.objects:
        by_image[F2.ob(x2)].append(x2)
    arrows_by_image = defaultdict(list)
    for f2 in X2.arrows:
        arrows_by_image[F2.ar(f2)].append(f2)
    objects = [(x1, x2) for x1 in X1.objects for x2 in by_image[F1.ob(x1)]]
    arrows = [(f1, f2) for f1 in X1.arrows for f2 in arrows_by_image[F1.ar(f1)]]
    return build_groupoid(
        objects, arrows,
        src=lambda f: (X1.src[f[0]], X2.src[f[1]]), tgt=lambda f: (X1.tgt[f[0]], X2.tgt[f[1]]),
        compose=lambda f, g: (X1.comp[f[0], g[0]], X2.comp[f[1], g[1]]),
        inverse=lambda f: (X1.inv[f[0]], X2.inv[f[1]]),
        unit=lambda o: (X1.unit[o[0]], X2.unit[o[1]]))


def fibred_projections(P: FiniteGroupoid, F1: GroupoidFunctor, F2: GroupoidFunctor):
    return tuple(
        GroupoidFunctor(P, F.dom, tuple(P.olabel(o)[k] for o in P.objects),
                        tuple(P.alabel(f)[k] for f in P.arrows))
        for k, F in enumerate((F1, F2)))


# ---------------------------------------------------------------------------
# fullness, faithfulness, equivalence


def _hom_map_failures(F: GroupoidFunctor, want_injective: bool, want_surjective: bool):
    X, Y = F.dom, F.cod
    comp_x, comp_y = X.component, Y.component
    for x in X.objects:
        for y in X.objects:
            fx, fy = F.ob(x), F.ob(y)
            if comp_x[x] != comp_x[y] and comp_y[fx] != comp_y[fy]:
                continue
            source = X.hom(x, y)
            images = [F.ar(f) for f in source]
            if want_injective and len(set(images)) != len(images):
                seen = {}
                for f, img in zip(source, images):
                    if img in seen:
                        yield "faithful", (x, y, seen[img], f)
                        break
                    seen[img] = f
            if want_surjective:
                missing = set(Y.hom(fx, fy)) - set(images)
                if missing:
                    yield "full", (x, y, min(missing))


def is_faithful(F: GroupoidFunctor) -> Verdict:
    """Injective on every hom-set; witness ``(x, y, f, f')`` with ``F(f) == F(f')``."""
    for law, ids in _hom_map_failures(F, True, False):
        return Verdict.fail(law, *ids)
    return Verdict.ok()


def is_full(F: GroupoidFunctor) -> Verdict:
    """Surjective on every hom-set; witness ``(x, y, missing arrow)``."""
    for law, ids in _hom_map_failures(F, False, True):
        return Verdict.fail(law, *ids)
    return Verdict.ok()


def is_fully_faithful(F: GroupoidFunctor) -> Verdict:
    for law, ids in _hom_map_failures(F, True, True):
        return Verdict.fail(law, *ids)
    return Verdict.ok()


def is_essentially_surjective(F: GroupoidFunctor) -> Verdict:
    """Every object of the codomain is isomorphic to an image; witness the first one missed."""
    reached = {F.cod.component[F.ob(x)] for x in F.dom.objects}
    for y in F.cod.objects:
        if F.cod.component[y] not in reached:
            return Verdict.fail("essentially-surjective", y)
    return Verdict.ok()


def is_equivalence(F: GroupoidFunctor) -> Verdict:
    v = is_fully_faithful(F)
    return v if not v else is_essentially_surjective(F)


def quasi_inverse(F: GroupoidFunctor) -> GroupoidFunctor:
    """A quasi-inverse of an equivalence, choosing least preimages and connecting arrows."""
    if not is_equivalence(F):
        raise AxiomError(is_equivalence(F))
    X, Y = F.dom, F.cod
    choice, link = [], []
    for y in Y.objects:
        x, a = next((x, a) for x in X.objects for a in Y.hom(F.ob(x), y))
        choice.append(x)
        link.append(a)  # a: F(x) -> y
    pre = {}
    for f in X.arrows:
        pre.setdefault((X.src[f], X.tgt[f], F.ar(f)), f)

    def on_arrow(g):
        y, y2 = Y.src[g], Y.tgt[g]
        img = Y.compose(Y.inv[link[y2]], g, link[y])
        return pre[choice[y], choice[y2], img]

    return functor_from(Y, X, lambda y: choice[y], on_arrow)


def is_representable(g: FiniteGroupoid) -> Verdict:
    """All automorphism groups trivial; witness is a non-unit automorphism."""
    for x in g.objects:
        for f in g.automorphisms(x):
            if f != g.unit[x]:
                return Verdict.fail("nontrivial-automorphism", x, f)
    return Verdict.ok()


# ---------------------------------------------------------------------------
# strict set actions and translation groupoids


@dataclass(frozen=True)
class SetAction:
    """A groupoid acting on a finite set along a moment map.

    Right actions: ``x.g`` is defined when ``moment[x] == tgt(g)`` and lands over ``src(g)``.
    Left actions: ``g.x`` is defined when ``moment[x] == src(g)`` and lands over ``tgt(g)``.
    ``table`` is keyed by ``(x, g)`` for right and ``(g, x)`` for left actions.
    """

    G: FiniteGroupoid
    n_points: int
    moment: tuple[int, ...]
    table: Mapping[tuple[int, int], int]
    side: str = "right"

    __hash__ = None

    def __post_init__(self):
        if self.side not in ("right", "left"):
            raise StructuralError("side must be 'right' or 'left'")
        if len(self.moment) != self.n_points:
            raise StructuralError("one moment value per point is required")
        for i, m in enumerate(self.moment):
            if not 0 <= m < self.G.n_objects:
                raise StructuralError(f"moment[{i}] = {m} out of range")
        for key, v in self.table.items():
            x, g = key if self.side == "right" else key[::-1]
            if not (0 <= x < self.n_points and 0 <= g < self.G.n_arrows and 0 <= v < self.n_points):
                raise StructuralError(f"action entry {key} -> {v} out of range")

    @property
    def points(self) -> range:
        return range(self.n_points)

    def acting_pairs(self):
        """Every ``(x, g)`` for which the action must be defined."""
        anchor = self.G.tgt if self.side == "right" else self.G.src
        by_anchor = defaultdict(list)
        for g in self.G.arrows:
            by_anchor[anchor[g]].append(g)
        for x in self.points:
            for g in by_anchor[self.moment[x]]:
                yield x, g

    def __call__(self, x: int, g: int) -> int:
        return self.table[(x, g) if self.side == "right" else (g, x)]


def _set_action_cases(sa):
    return iter(sa.acting_pairs())


def _set_action_domain(sa, ids):
    x, g = ids
    return ((x, g) if sa.side == "right" else (g, x)) in sa.table


def _set_action_moment(sa, ids):
    x, g = ids
    land = sa.G.src[g] if sa.side == "right" else sa.G.tgt[g]
    return sa.moment[sa(x, g)] == land


def _set_action_assoc_cases(sa):
    G = sa.G
    for x, g in sa.acting_pairs():
        if sa.side == "right":
            for h in G.arrows_into(G.src[g]):
                yield x, g, h
        else:
            for h in G.arrows_from(G.tgt[g]):
                yield x, g, h


def _set_action_assoc(sa, ids):
    x, g, h = ids
    G = sa.G
    if sa.side == "right":
        # (x g) h == x (g o h)
        return sa(sa(x, g), h) == sa(x, G.comp[g, h])
    # h (g x) == (h o g) x
    return sa(sa(x, g), h) == sa(x, G.comp[h, g])


SET_ACTION_LAWS: tuple[Law, ...] = (
    Law("action-domain", _set_action_cases, _set_action_domain),
    Law("action-moment", _set_action_cases, _set_action_moment),
    Law("action-unit", lambda sa: ((x,) for x in sa.points),
        lambda sa, ids: sa(ids[0], sa.G.unit[sa.moment[ids[0]]]) == ids[0]),
    Law("action-associativity", _set_action_assoc_cases, _set_action_assoc),
)


def validate_set_action(sa: SetAction) -> Verdict:
    return check_laws(sa, SET_ACTION_LAWS)


def set_action_from(G: FiniteGroupoid, n_points: int, moment: Sequence[int],
                    rule: Callable[[int, int], int], side: str = "right") -> SetAction:
    """Tabulate ``rule(x, g)`` (right) or ``rule(g, x)`` (left) on all acting pairs."""
    sa = SetAction(G, n_points, tuple(moment), {}, side)
    table = {}
    for x, g in sa.acting_pairs():
        key = (x, g) if side == "right" else (g, x)
        table[key] = rule(*key)
    return SetAction(G, n_points, tuple(moment), table, side)


def group_set_action(grp: FiniteGroup, n_points: int, rule: Callable[[int, int], int],
                     side: str = "right") -> SetAction:
    """Action of a group (one-object groupoid) on a set."""
    return set_action_from(group_groupoid(grp), n_points, (0,) * n_points, rule, side)


def translation_groupoid(sa: SetAction) -> FiniteGroupoid:
    """Action groupoid of a strict set action.

    Right: arrow ``(x, g): x.g -> x`` composing as ``(x, g) o (x.g, h) = (x, g o h)``.
    Left: arrow ``(g, x): x -> g.x`` composing as ``(h, g.x) o (g, x) = (h o g, x)``.
    """
    v = validate_set_action(sa)
    if not v:
        raise AxiomError(v)
    G = sa.G
    pairs = list(sa.acting_pairs())
    if sa.side == "right":
        return build_groupoid(
            sa.points, pairs,
            src=lambda a: sa(*a), tgt=lambda a: a[0],
            compose=lambda f, g: (f[0], G.comp[f[1], g[1]]),
            inverse=lambda a: (sa(*a), G.inv[a[1]]),
            unit=lambda x: (x, G.unit[sa.moment[x]]))
    arrows = [(g, x) for x, g in pairs]
    return build_groupoid(
        sa.points, arrows,
        src=lambda a: a[1], tgt=lambda a: sa(a[1], a[0]),
        compose=lambda f, g: (G.comp[f[0], g[0]], g[1]),
        inverse=lambda a: (G.inv[a[0]], sa(a[1], a[0])),
        unit=lambda x: (G.unit[sa.moment[x]], x))


def is_free(sa: SetAction) -> bool:
    """No point is fixed by a non-unit arrow."""
    return all(sa(x, g) != x or g == sa.G.unit[sa.moment[x]] for x, g in sa.acting_pairs())


# ---------------------------------------------------------------------------
# weak fibred product


def weak_fibred_product(a: GroupoidFunctor, b: GroupoidFunctor) -> FiniteGroupoid:
    """Objects ``(x0, h, g0)`` with ``h: a(x0) -> b(g0)``; arrows ``(x, h, g)`` leave ``(src x, h, src g)``.

    The target of ``(x, h, g)`` is ``(tgt x, b(g) o h o a(x)^-1, tgt g)`` and
    ``(x, h, g) o (x', h', g') = (x o x', h', g o g')``.
    """
    if a.cod != b.cod:
        raise StructuralError("weak fibred product needs legs into a common groupoid")
    H, X, G = a.cod, a.dom, b.dom
    objects = [(x0, h, g0) for x0 in X.objects for g0 in G.objects
               for h in H.hom(a.ob(x0), b.ob(g0))]
    arrows = [(x, h, g) for x in X.arrows for g in G.arrows
              for h in H.hom(a.ob(X.src[x]), b.ob(G.src[g]))]

    def moved(f):
        x, h, g = f
        return H.compose(b.ar(g), h, H.inv[a.ar(x)])

    return build_groupoid(
        objects, arrows,
        src=lambda f: (X.src[f[0]], f[1], G.src[f[2]]),
        tgt=lambda f: (X.tgt[f[0]], moved(f), G.tgt[f[2]]),
        compose=lambda f, g: (X.comp[f[0], g[0]], g[1], G.comp[f[2], g[2]]),
        inverse=lambda f: (X.inv[f[0]], moved(f), G.inv[f[2]]),
        unit=lambda o: (X.unit[o[0]], o[1], G.unit[o[2]]))


def weak_product_comparison(a: GroupoidFunctor, b: GroupoidFunctor) -> GroupoidFunctor:
    """Canonical functor from the weak fibred product to ``iso_comma(a, b)``."""
    W, C = weak_fibred_product(a, b), iso_comma(a, b)
    return functor_from(W, C, lambda o: C.obj(W.olabel(o)),
                        lambda f: C.arr((W.alabel(f)[0], W.alabel(f)[2], W.alabel(f)[1])))


def check_weak_product_comparison(a: GroupoidFunctor, b: GroupoidFunctor) -> Verdict:
    """The canonical comparison from the weak fibred product to the comma is an equivalence."""
    F = weak_product_comparison(a, b)
    v = validate_functor(F)
    if not v:
        return v
    return is_equivalence(F)
