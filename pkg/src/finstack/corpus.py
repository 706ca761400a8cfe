"""Named fixtures: the golden corpus for tests and the CLI ``examples`` command.

Every collection is a function returning a fresh ``dict`` keyed by a stable name,
cached because several of the larger instances are reused across suites.
"""

from __future__ import annotations

from functools import cache

from .core import (
    FiniteGroup, FiniteGroupoid, SetAction, constant_functor, discrete_groupoid,
    group_groupoid, group_set_action, pair_groupoid, point, translation_groupoid,
)
from .weakgroupoid import (
    CrossedModuleData, Skeletal2GroupData, StackyGroupoidPresentation, from_crossed_module,
    from_skeletal, group_presentation, product_presentation, strict_presentation,
)
from .action import WeakAction, lift_set_action, self_action, strict_group_action, trivial_action
from .bundles import StrictBibundle, bibundle_from_morphism, flip_strict_bibundle, unit_bibundle
from .morita import (
    StackyBibundle, fibre_bibundle, identity_bibundle, lift_strict_bibundle,
    prequantization_data, product_projection_bibundle,
)

Z2 = FiniteGroup.cyclic(2)
Z3 = FiniteGroup.cyclic(3)
Z4 = FiniteGroup.cyclic(4)
V4 = Z2.times(Z2)
TRIVIAL = FiniteGroup.trivial()

GROUPS = {"Z/2": Z2, "Z/3": Z3, "Z/2xZ/2": V4}


def _named(grp: FiniteGroup, name: str) -> FiniteGroup:
    return FiniteGroup(grp.table, name)


def _set_action_rules():
    """(group name, set size, rule(x, g), kind); all groups here are abelian."""
    return [
        ("Z/2", 2, lambda x, g: x ^ g, "free"),
        ("Z/2", 4, lambda x, g: x ^ g, "free"),
        ("Z/2", 1, lambda x, g: x, "trivial"),
        ("Z/2", 3, lambda x, g: x if x == 2 else x ^ g, "mixed"),
        ("Z/3", 3, lambda x, g: (x + g) % 3, "free"),
        ("Z/3", 2, lambda x, g: x, "trivial"),
        ("Z/3", 4, lambda x, g: x if x == 3 else (x + g) % 3, "mixed"),
        ("Z/2xZ/2", 4, lambda x, g: x ^ g, "free"),
        ("Z/2xZ/2", 1, lambda x, g: x, "trivial"),
        ("Z/2xZ/2", 4, lambda x, g: x ^ (g >> 1) if x < 2 else 2 + ((x - 2) ^ (g & 1)), "mixed"),
        ("Z/2xZ/2", 3, lambda x, g: x if x == 2 else x ^ (g >> 1), "mixed"),
    ]


@cache
def set_actions() -> dict[str, SetAction]:
    """Right actions of the corpus groups on sets of size at most four."""
    out = {}
    for gname, n, rule, kind in _set_action_rules():
        out[f"{gname}-on-{n}-{kind}"] = group_set_action(GROUPS[gname], n, rule, "right")
    return out


@cache
def groupoids() -> dict[str, FiniteGroupoid]:
    out: dict[str, FiniteGroupoid] = {}
    for n in range(6):
        out[f"discrete-{n}"] = discrete_groupoid(n)
    for n in (2, 3, 4):
        out[f"pair-{n}"] = pair_groupoid(n)
    for gname, grp in GROUPS.items():
        out[f"B{gname}"] = group_groupoid(grp)
    for name, sa in set_actions().items():
        out[f"translation-{name}"] = translation_groupoid(sa)
    return out


@cache
def crossed_modules() -> dict[str, CrossedModuleData]:
    return {
        "zero": CrossedModuleData(Z2, Z2, (0, 0)),
        "identity": CrossedModuleData(Z2, Z2, (0, 1)),
        "Z2-into-Z4": CrossedModuleData(Z2, Z4, (0, 2)),
        "Z2-to-point": CrossedModuleData(Z2, TRIVIAL, (0, 0)),
    }


def cup_cocycle(n: int) -> dict[tuple[int, int, int], int]:
    """``omega(a, b, c) = a * floor((b + c) / n)`` mod ``n``: the generator of ``H^3(Z/n; Z/n)``."""
    return {(a, b, c): (a * ((b + c) // n)) % n for a in range(n) for b in range(n) for c in range(n)}


@cache
def skeletal_data() -> dict[str, Skeletal2GroupData]:
    return {
        "Z2-Z2-trivial": Skeletal2GroupData.trivial_action(Z2, Z2, {k: 0 for k in cup_cocycle(2)}),
        "Z2-Z2-cocycle": Skeletal2GroupData.trivial_action(Z2, Z2, cup_cocycle(2)),
        "Z3-Z3-cocycle": Skeletal2GroupData.trivial_action(Z3, Z3, cup_cocycle(3)),
    }


@cache
def presentations() -> dict[str, StackyGroupoidPresentation]:
    out: dict[str, StackyGroupoidPresentation] = {}
    for gname, grp in GROUPS.items():
        out[f"group-{gname}"] = group_presentation(_named(grp, gname))
    for n in (2, 3):
        out[f"pair-{n}"] = strict_presentation(pair_groupoid(n), name=f"pair({n})")
    out["discrete-2"] = strict_presentation(discrete_groupoid(2), name="discrete(2)")
    for name, cm in crossed_modules().items():
        out[f"cm-{name}"] = from_crossed_module(cm)
    for name, sk in skeletal_data().items():
        out[f"skeletal-{name}"] = from_skeletal(sk)
    return out


@cache
def weak_actions() -> dict[str, WeakAction]:
    """Self actions on both sides, trivial actions on a point and lifted strict actions."""
    out: dict[str, WeakAction] = {}
    for name, sg in presentations().items():
        out[f"{name}/right-self"] = self_action(sg, "right")
        out[f"{name}/left-self"] = self_action(sg, "left")
        if sg.M.n_objects == 1:
            out[f"{name}/trivial-on-point"] = trivial_action(sg, point())
    for name, sa in set_actions().items():
        gname = name.split("-on-")[0]
        out[f"strict/{name}"] = lift_set_action(sa, presentations()[f"group-{gname}"])
    swap = presentations()["group-Z/2"]
    P2 = pair_groupoid(2)
    out["strict/Z/2-swaps-pair-2"] = strict_group_action(
        swap, P2, lambda x, g: x ^ g, lambda b, g: P2.arr((P2.tgt[b] ^ g, P2.src[b] ^ g)))
    return out


def bz2_trivial_on_point() -> WeakAction:
    """``BZ/2`` (the 2-group with one object and automorphisms ``Z/2``) acting trivially on a point."""
    return weak_actions()["cm-Z2-to-point/trivial-on-point"]


@cache
def strict_actions() -> dict[str, SetAction]:
    """Strict group actions on sets; their prequotients must match translation groupoids."""
    return dict(set_actions())


@cache
def two_factor_actions() -> dict[str, tuple[WeakAction, StackyGroupoidPresentation, StackyGroupoidPresentation]]:
    """Actions of product presentations, for the quotient-in-stages comparison."""
    pres = presentations()
    pairs = [("skeletal-Z2-Z2-cocycle", "cm-identity"), ("pair-3", "group-Z/2"),
             ("cm-Z2-into-Z4", "skeletal-Z2-Z2-cocycle"), ("group-Z/2", "group-Z/3"),
             ("cm-Z2-to-point", "cm-Z2-to-point")]
    out = {}
    for a, b in pairs:
        sg1, sg2 = pres[a], pres[b]
        sg = product_presentation(sg1, sg2)
        out[f"{a}x{b}/right-self"] = (self_action(sg, "right"), sg1, sg2)
        out[f"{a}x{b}/left-self"] = (self_action(sg, "left"), sg1, sg2)
        if sg.M.n_objects == 1:
            out[f"{a}x{b}/trivial-on-point"] = (trivial_action(sg, point()), sg1, sg2)
    return out


def collapse_bibundle(n: int) -> StrictBibundle:
    """``pair(n)`` against the trivial group, from the map to a point."""
    return bibundle_from_morphism(constant_functor(pair_groupoid(n), point(), 0))


@cache
def strict_bibundles() -> dict[str, StrictBibundle]:
    return {
        "pair-2-to-point": collapse_bibundle(2),
        "point-to-pair-3": flip_strict_bibundle(collapse_bibundle(3)),
        "unit-pair-2": unit_bibundle(pair_groupoid(2)),
        "unit-BZ/2": unit_bibundle(group_groupoid(Z2)),
    }


@cache
def stacky_bibundles() -> dict[str, StackyBibundle]:
    out: dict[str, StackyBibundle] = {}
    for name, sg in presentations().items():
        out[f"identity/{name}"] = identity_bibundle(sg)
    out["fibre/pair-2"] = fibre_bibundle(presentations()["pair-2"], 0)
    out["fibre/pair-3"] = fibre_bibundle(presentations()["pair-3"], 0)
    out["fibre/discrete-2"] = fibre_bibundle(presentations()["discrete-2"], 0)
    for name, sb in strict_bibundles().items():
        out[f"strict/{name}"] = lift_strict_bibundle(sb)
    for name in ("Z/2-Z/2", "Z/4-2Z/4", "Z/2-trivial"):
        out[f"prequantization/{name}"] = prequantization_bibundle(name)
    return out


PREQUANTIZATION_CASES = {
    "Z/2-Z/2": (Z2, (0, 1), 2),
    "Z/4-2Z/4": (Z4, (0, 2), 2),
    "Z/2-trivial": (Z2, (0,), 2),
}


def prequantization_bibundle(name: str) -> StackyBibundle:
    K, H, n = PREQUANTIZATION_CASES[name]
    return prequantization_data(K, H, n)[2]


@cache
def strictification_cases() -> dict[str, StackyBibundle]:
    """Bibundles out of a strict presentation on its own arrow set."""
    bases = {"BZ/2": group_groupoid(Z2), "pair-2": pair_groupoid(2), "pair-3": pair_groupoid(3),
             "translation-Z/2-on-3": translation_groupoid(set_actions()["Z/2-on-3-mixed"])}
    out = {}
    for name, K in bases.items():
        out[f"identity/{name}"] = identity_bibundle(strict_presentation(K, name=name))
        out[f"projection/{name}x[Z/2=Z/2]"] = product_projection_bibundle(K, presentations()["cm-identity"])
    out["projection/pointx[Z/2=Z/2]"] = product_projection_bibundle(point(), presentations()["cm-identity"])
    return out
