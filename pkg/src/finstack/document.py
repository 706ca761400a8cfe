"""Versioned JSON documents for every domain type.

A document is ``{"schemaVersion": 1, "kind": ..., "payload": {...}}``.  Identifiers
are dense integers; multi-key tables are lists of rows whose last entry is the value,
sorted in canonical form.  Canonical text is ``json.dumps(sort_keys=True, indent=2)``
plus a trailing newline, so ``serialize(parse(text)) == text`` for canonical input.

Field formats per kind (all integers are identifiers unless noted):

groupoid
    ``objects`` (count), ``arrows`` (``[source, target]`` per arrow),
    ``composition`` (rows ``[f, g, f o g]``), ``inverse``, ``unit`` (per object).
functor
    ``source``, ``target`` (groupoid payloads), ``objects``, ``arrows`` (images).
natiso
    ``source``, ``target`` (functor payloads), ``components`` (one arrow per object).
stacky-groupoid
    ``name``, ``base`` (count), ``groupoid``, ``source``, ``target`` (per object of the
    groupoid), ``unit`` (per base point), ``inverse`` (``objects``, ``arrows``),
    ``multiplication`` (``objects`` rows ``[g, h, gh]``, ``arrows`` rows ``[a, b, ab]``),
    ``associator`` (rows ``[g, h, k, cell]``), ``left_unitor``, ``right_unitor``,
    ``left_inverse``, ``right_inverse`` (one cell per object).
action
    ``name``, ``side`` (``left``/``right``), ``presentation``, ``carrier``, ``moment``,
    ``act`` (``objects``/``arrows`` rows in fibred-product label order),
    ``beta`` (rows ``[a, b, c, cell]``), ``epsilon`` (one cell per carrier object).
bibundle
    ``name``, ``left``, ``right`` (action payloads on one carrier), ``tau`` (rows
    ``[g1, x, g2, cell]``).
crossed-module
    ``A``, ``K`` (multiplication tables), ``phi`` (image of each element of ``A``).
skeletal
    ``pi1``, ``pi2`` (multiplication tables), ``act`` (rows of automorphisms),
    ``omega`` (rows ``[a, b, c, value]``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable

from .core import (
    FiniteGroup, FiniteGroupoid, GroupoidFunctor, NatIso, StructuralError,
    discrete_groupoid, strict_fibred_product,
)
from .weakgroupoid import CrossedModuleData, Skeletal2GroupData, StackyGroupoidPresentation
from .action import WeakAction
from .morita import StackyBibundle

SCHEMA_VERSION = 1
KINDS = ("groupoid", "functor", "natiso", "stacky-groupoid", "action", "bibundle",
         "crossed-module", "skeletal")


class DocumentError(ValueError):
    """Unreadable or ill-shaped input; carries a field path and, for syntax errors, a line."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None,
                 column: int | None = None):
        self.message, self.field, self.line, self.column = message, field, line, column
        where = []
        if line is not None:
            where.append(f"line {line}" + (f" column {column}" if column is not None else ""))
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)

    def as_dict(self) -> dict:
        return {k: v for k, v in (("message", self.message), ("field", self.field),
                                  ("line", self.line), ("column", self.column)) if v is not None}


@dataclass(frozen=True)
class Document:
    kind: str
    value: Any
    schema_version: int = SCHEMA_VERSION

    __hash__ = None


# ---------------------------------------------------------------------------
# reading helpers


def _field(obj: dict, key: str, path: str):
    if key not in obj:
        raise DocumentError("missing field", f"{path}.{key}")
    return obj[key]


def _object(value, path: str, keys: tuple[str, ...]) -> dict:
    if not isinstance(value, dict):
        raise DocumentError("expected an object", path)
    extra = sorted(set(value) - set(keys))
    if extra:
        raise DocumentError(f"unexpected field {extra[0]!r}", path)
    for key in keys:
        _field(value, key, path)
    return value


def _int(value, path: str, bound: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise DocumentError("expected an integer", path)
    if value < 0:
        raise DocumentError(f"negative value {value}", path)
    if bound is not None and value >= bound:
        raise DocumentError(f"dangling identifier {value} (only {bound} exist)", path)
    return value


def _str(value, path: str) -> str:
    if not isinstance(value, str):
        raise DocumentError("expected a string", path)
    return value


def _ints(value, path: str, bound: int | None, length: int | None = None) -> tuple[int, ...]:
    if not isinstance(value, list):
        raise DocumentError("expected a list", path)
    if length is not None and len(value) != length:
        raise DocumentError(f"expected {length} entries, found {len(value)}", path)
    return tuple(_int(v, f"{path}[{i}]", bound) for i, v in enumerate(value))


def _rows(value, path: str, bounds: tuple[int | None, ...]) -> dict[tuple[int, ...], int]:
    """Rows ``[k1, ..., kn, v]`` as a mapping; ``bounds`` covers keys then value."""
    if not isinstance(value, list):
        raise DocumentError("expected a list of rows", path)
    out: dict[tuple[int, ...], int] = {}
    for i, row in enumerate(value):
        here = f"{path}[{i}]"
        entries = _ints(row, here, None, len(bounds))
        for j, (v, b) in enumerate(zip(entries, bounds)):
            _int(v, f"{here}[{j}]", b)
        key = entries[:-1]
        if key in out:
            raise DocumentError(f"duplicate row for {list(key)}", here)
        out[key] = entries[-1]
    return out


def _covering(table: dict, expected, path: str, describe: Callable = list) -> dict:
    """The row keys must be exactly ``expected``."""
    expected = set(expected)
    missing = sorted(expected - set(table))
    if missing:
        raise DocumentError(f"missing row for {describe(missing[0])}", path)
    extra = sorted(set(table) - expected)
    if extra:
        raise DocumentError(f"row {describe(extra[0])} is not in the table's domain", path)
    return table


def _table(value, path: str) -> FiniteGroup:
    if not isinstance(value, list) or not value:
        raise DocumentError("expected a non-empty multiplication table", path)
    n = len(value)
    rows = tuple(_ints(row, f"{path}[{i}]", n, n) for i, row in enumerate(value))
    return FiniteGroup(rows)


# ---------------------------------------------------------------------------
# groupoids and functors


def _sorted_rows(mapping) -> list[list[int]]:
    return sorted([*key, value] for key, value in mapping.items())


def groupoid_payload(G: FiniteGroupoid) -> dict:
    return {"objects": G.n_objects, "arrows": [[G.src[f], G.tgt[f]] for f in G.arrows],
            "composition": _sorted_rows(G.comp), "inverse": list(G.inv), "unit": list(G.unit)}


def read_groupoid(p, path: str = "payload") -> FiniteGroupoid:
    p = _object(p, path, ("objects", "arrows", "composition", "inverse", "unit"))
    n = _int(p["objects"], f"{path}.objects")
    arrows = p["arrows"]
    if not isinstance(arrows, list):
        raise DocumentError("expected a list", f"{path}.arrows")
    ends = [_ints(a, f"{path}.arrows[{i}]", n, 2) for i, a in enumerate(arrows)]
    a = len(ends)
    comp = {(f, g): h for (f, g), h in _rows(p["composition"], f"{path}.composition", (a, a, a)).items()}
    return FiniteGroupoid(n, tuple(e[0] for e in ends), tuple(e[1] for e in ends), comp,
                          _ints(p["inverse"], f"{path}.inverse", a, a),
                          _ints(p["unit"], f"{path}.unit", a, n))


def functor_payload(F: GroupoidFunctor) -> dict:
    return {"source": groupoid_payload(F.dom), "target": groupoid_payload(F.cod),
            "objects": list(F.on_objects), "arrows": list(F.on_arrows)}


def read_functor(p, path: str = "payload") -> GroupoidFunctor:
    p = _object(p, path, ("source", "target", "objects", "arrows"))
    dom, cod = read_groupoid(p["source"], f"{path}.source"), read_groupoid(p["target"], f"{path}.target")
    return GroupoidFunctor(dom, cod, _ints(p["objects"], f"{path}.objects", cod.n_objects, dom.n_objects),
                           _ints(p["arrows"], f"{path}.arrows", cod.n_arrows, dom.n_arrows))


def natiso_payload(eta: NatIso) -> dict:
    return {"source": functor_payload(eta.source), "target": functor_payload(eta.target),
            "components": list(eta.components)}


def read_natiso(p, path: str = "payload") -> NatIso:
    p = _object(p, path, ("source", "target", "components"))
    F, G = read_functor(p["source"], f"{path}.source"), read_functor(p["target"], f"{path}.target")
    if F.dom != G.dom or F.cod != G.cod:
        raise DocumentError("source and target functors must share domain and codomain", path)
    return NatIso(F, G, _ints(p["components"], f"{path}.components", F.cod.n_arrows, F.dom.n_objects))


# ---------------------------------------------------------------------------
# presentations


def presentation_payload(sg: StackyGroupoidPresentation) -> dict:
    G, G2 = sg.G, sg.G2
    return {
        "name": sg.name, "base": sg.M.n_objects, "groupoid": groupoid_payload(G),
        "source": list(sg.s.on_objects), "target": list(sg.t.on_objects),
        "unit": list(sg.u.on_objects),
        "inverse": {"objects": list(sg.i.on_objects), "arrows": list(sg.i.on_arrows)},
        "multiplication": {
            "objects": sorted([*G2.olabel(o), sg.m.on_objects[o]] for o in G2.objects),
            "arrows": sorted([*G2.alabel(f), sg.m.on_arrows[f]] for f in G2.arrows)},
        "associator": _sorted_rows(sg.alpha),
        "left_unitor": list(sg.lam), "right_unitor": list(sg.rho),
        "left_inverse": list(sg.iota_l), "right_inverse": list(sg.iota_r),
    }


def read_presentation(p, path: str = "payload") -> StackyGroupoidPresentation:
    p = _object(p, path, ("name", "base", "groupoid", "source", "target", "unit", "inverse",
                          "multiplication", "associator", "left_unitor", "right_unitor",
                          "left_inverse", "right_inverse"))
    name = _str(p["name"], f"{path}.name")
    nb = _int(p["base"], f"{path}.base")
    G = read_groupoid(p["groupoid"], f"{path}.groupoid")
    no, na = G.n_objects, G.n_arrows
    M = discrete_groupoid(nb)
    s_obj = _ints(p["source"], f"{path}.source", nb, no)
    t_obj = _ints(p["target"], f"{path}.target", nb, no)
    u_obj = _ints(p["unit"], f"{path}.unit", no, nb)
    inv = _object(p["inverse"], f"{path}.inverse", ("objects", "arrows"))
    i_obj = _ints(inv["objects"], f"{path}.inverse.objects", no, no)
    i_arr = _ints(inv["arrows"], f"{path}.inverse.arrows", na, na)
    s = GroupoidFunctor(G, M, s_obj, tuple(s_obj[G.src[f]] for f in G.arrows))
    t = GroupoidFunctor(G, M, t_obj, tuple(t_obj[G.src[f]] for f in G.arrows))
    u = GroupoidFunctor(M, G, u_obj, tuple(G.unit[x] for x in u_obj))
    i = GroupoidFunctor(G, G, i_obj, i_arr)
    G2 = strict_fibred_product(s, t)
    mul = _object(p["multiplication"], f"{path}.multiplication", ("objects", "arrows"))
    m_obj = _covering(_rows(mul["objects"], f"{path}.multiplication.objects", (no, no, no)),
                      G2.object_labels, f"{path}.multiplication.objects")
    m_arr = _covering(_rows(mul["arrows"], f"{path}.multiplication.arrows", (na, na, na)),
                      G2.arrow_labels, f"{path}.multiplication.arrows")
    m = GroupoidFunctor(G2, G, tuple(m_obj[G2.olabel(o)] for o in G2.objects),
                        tuple(m_arr[G2.alabel(f)] for f in G2.arrows))
    shell = StackyGroupoidPresentation(M, G, s, t, u, i, m, {}, (), (), (), (), name)
    alpha = _covering(_rows(p["associator"], f"{path}.associator", (no, no, no, na)),
                      shell.triples(), f"{path}.associator")
    cells = {key: _ints(p[key], f"{path}.{key}", na, no)
             for key in ("left_unitor", "right_unitor", "left_inverse", "right_inverse")}
    return StackyGroupoidPresentation(M, G, s, t, u, i, m, alpha, cells["left_unitor"],
                                      cells["right_unitor"], cells["left_inverse"],
                                      cells["right_inverse"], name)


# ---------------------------------------------------------------------------
# actions and bibundles


def action_payload(wa: WeakAction) -> dict:
    XG = wa.XG
    return {
        "name": wa.name, "side": wa.side, "presentation": presentation_payload(wa.sg),
        "carrier": groupoid_payload(wa.X), "moment": list(wa.mu.on_objects),
        "act": {"objects": sorted([*XG.olabel(o), wa.act_functor.on_objects[o]] for o in XG.objects),
                "arrows": sorted([*XG.alabel(f), wa.act_functor.on_arrows[f]] for f in XG.arrows)},
        "beta": _sorted_rows(wa.beta), "epsilon": list(wa.epsilon),
    }


def read_action(p, path: str = "payload", carrier: FiniteGroupoid | None = None) -> WeakAction:
    p = _object(p, path, ("name", "side", "presentation", "carrier", "moment", "act", "beta", "epsilon"))
    name = _str(p["name"], f"{path}.name")
    side = _str(p["side"], f"{path}.side")
    if side not in ("left", "right"):
        raise DocumentError("side must be 'left' or 'right'", f"{path}.side")
    sg = read_presentation(p["presentation"], f"{path}.presentation")
    X = read_groupoid(p["carrier"], f"{path}.carrier")
    if carrier is not None:
        if X != carrier:
            raise DocumentError("both actions must share one carrier", f"{path}.carrier")
        X = carrier
    moment = _ints(p["moment"], f"{path}.moment", sg.M.n_objects, X.n_objects)
    mu = GroupoidFunctor(X, sg.M, moment, tuple(moment[X.src[f]] for f in X.arrows))
    XG = strict_fibred_product(mu, sg.t) if side == "right" else strict_fibred_product(sg.s, mu)
    act = _object(p["act"], f"{path}.act", ("objects", "arrows"))
    first, second = ((X, sg.G) if side == "right" else (sg.G, X))
    a_obj = _covering(_rows(act["objects"], f"{path}.act.objects",
                            (first.n_objects, second.n_objects, X.n_objects)),
                      XG.object_labels, f"{path}.act.objects")
    a_arr = _covering(_rows(act["arrows"], f"{path}.act.arrows",
                            (first.n_arrows, second.n_arrows, X.n_arrows)),
                      XG.arrow_labels, f"{path}.act.arrows")
    act_functor = GroupoidFunctor(XG, X, tuple(a_obj[XG.olabel(o)] for o in XG.objects),
                                  tuple(a_arr[XG.alabel(f)] for f in XG.arrows))
    shell = WeakAction(sg, X, mu, act_functor, {}, (), side, name)
    bounds = ((X.n_objects, sg.G.n_objects, sg.G.n_objects) if side == "right"
              else (sg.G.n_objects, sg.G.n_objects, X.n_objects))
    beta = _covering(_rows(p["beta"], f"{path}.beta", (*bounds, X.n_arrows)), shell.triples(),
                     f"{path}.beta")
    epsilon = _ints(p["epsilon"], f"{path}.epsilon", X.n_arrows, X.n_objects)
    return WeakAction(sg, X, mu, act_functor, beta, epsilon, side, name)


def bibundle_payload(bb: StackyBibundle) -> dict:
    return {"name": bb.name, "left": action_payload(bb.left), "right": action_payload(bb.right),
            "tau": _sorted_rows(bb.tau)}


def read_bibundle(p, path: str = "payload") -> StackyBibundle:
    p = _object(p, path, ("name", "left", "right", "tau"))
    name = _str(p["name"], f"{path}.name")
    left = read_action(p["left"], f"{path}.left")
    right = read_action(p["right"], f"{path}.right", carrier=left.X)
    if left.side != "left" or right.side != "right":
        raise DocumentError("a bibundle needs a left action and a right action", path)
    shell = StackyBibundle(left, right, {}, name)
    X = left.X
    tau = _covering(_rows(p["tau"], f"{path}.tau", (left.sg.G.n_objects, X.n_objects,
                                                      right.sg.G.n_objects, X.n_arrows)),
                    shell.triples(), f"{path}.tau")
    return StackyBibundle(left, right, tau, name)


# ---------------------------------------------------------------------------
# algebraic data


def crossed_module_payload(cm: CrossedModuleData) -> dict:
    return {"A": [list(r) for r in cm.A.table], "K": [list(r) for r in cm.K.table], "phi": list(cm.phi)}


def read_crossed_module(p, path: str = "payload") -> CrossedModuleData:
    p = _object(p, path, ("A", "K", "phi"))
    A, K = _table(p["A"], f"{path}.A"), _table(p["K"], f"{path}.K")
    return CrossedModuleData(A, K, _ints(p["phi"], f"{path}.phi", K.order, A.order))


def skeletal_payload(sk: Skeletal2GroupData) -> dict:
    return {"pi1": [list(r) for r in sk.pi1.table], "pi2": [list(r) for r in sk.pi2.table],
            "act": [list(r) for r in sk.act], "omega": _sorted_rows(sk.omega)}


def read_skeletal(p, path: str = "payload") -> Skeletal2GroupData:
    p = _object(p, path, ("pi1", "pi2", "act", "omega"))
    pi1, pi2 = _table(p["pi1"], f"{path}.pi1"), _table(p["pi2"], f"{path}.pi2")
    n1, n2 = pi1.order, pi2.order
    if not isinstance(p["act"], list) or len(p["act"]) != n1:
        raise DocumentError(f"expected {n1} rows", f"{path}.act")
    act = tuple(_ints(row, f"{path}.act[{g}]", n2, n2) for g, row in enumerate(p["act"]))
    omega = _rows(p["omega"], f"{path}.omega", (n1, n1, n1, n2))
    _covering(omega, [(a, b, c) for a in range(n1) for b in range(n1) for c in range(n1)], f"{path}.omega")
    return Skeletal2GroupData(pi1, pi2, act, omega)


# ---------------------------------------------------------------------------
# documents

_WRITERS: tuple[tuple[type, str, Callable], ...] = (
    (FiniteGroupoid, "groupoid", groupoid_payload),
    (GroupoidFunctor, "functor", functor_payload),
    (NatIso, "natiso", natiso_payload),
    (StackyGroupoidPresentation, "stacky-groupoid", presentation_payload),
    (WeakAction, "action", action_payload),
    (StackyBibundle, "bibundle", bibundle_payload),
    (CrossedModuleData, "crossed-module", crossed_module_payload),
    (Skeletal2GroupData, "skeletal", skeletal_payload),
)

_READERS: dict[str, Callable] = {
    "groupoid": read_groupoid, "functor": read_functor, "natiso": read_natiso,
    "stacky-groupoid": read_presentation, "action": read_action, "bibundle": read_bibundle,
    "crossed-module": read_crossed_module, "skeletal": read_skeletal,
}


def kind_of(value) -> str:
    for cls, kind, _ in _WRITERS:
        if isinstance(value, cls):
            return kind
    raise TypeError(f"no document kind for {type(value).__name__}")


def to_document(value) -> dict:
    for cls, kind, writer in _WRITERS:
        if isinstance(value, cls):
            return {"schemaVersion": SCHEMA_VERSION, "kind": kind, "payload": writer(value)}
    raise TypeError(f"no document kind for {type(value).__name__}")


def serialize(value) -> str:
    """Canonical text of a domain value or a :class:`Document`."""
    if isinstance(value, Document):
        value = value.value
    return json.dumps(to_document(value), sort_keys=True, indent=2) + "\n"


def parse(text: str) -> Document:
    """Decode and validate the shape of a document; raises :class:`DocumentError`."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"syntax error: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    raw = _object(raw, "document", ("schemaVersion", "kind", "payload"))
    version = raw["schemaVersion"]
    if version != SCHEMA_VERSION or isinstance(version, bool):
        raise DocumentError(f"unsupported schema version {version!r} (expected {SCHEMA_VERSION})",
                            "schemaVersion")
    kind = raw["kind"]
    if kind not in _READERS:
        raise DocumentError(f"unknown kind {kind!r}", "kind")
    try:
        value = _READERS[kind](raw["payload"], "payload")
    except StructuralError as exc:
        raise DocumentError(str(exc), "payload") from None
    return Document(kind, value, version)
