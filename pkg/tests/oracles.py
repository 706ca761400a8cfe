"""Brute-force reference checks written against raw tables only.

None of these helpers call into the library's validators; they exist so the tests
compare two independent computations.
"""

from __future__ import annotations

from itertools import product


def groupoid_ok(G) -> bool:
    n, a = G.n_objects, len(G.src)
    src, tgt, inv, unit = G.src, G.tgt, G.inv, G.unit
    comp = dict(G.comp)
    for x in range(n):
        if src[unit[x]] != x or tgt[unit[x]] != x:
            return False
    for f in range(a):
        if src[inv[f]] != tgt[f] or tgt[inv[f]] != src[f]:
            return False
    for f, h in product(range(a), repeat=2):
        composable = src[f] == tgt[h]
        if composable != ((f, h) in comp):
            return False
        if composable:
            k = comp[f, h]
            if src[k] != src[h] or tgt[k] != tgt[f]:
                return False
    for f in range(a):
        if comp[unit[tgt[f]], f] != f or comp[f, unit[src[f]]] != f:
            return False
        if comp[inv[f], f] != unit[src[f]] or comp[f, inv[f]] != unit[tgt[f]]:
            return False
    for f, g, h in product(range(a), repeat=3):
        if src[f] == tgt[g] and src[g] == tgt[h]:
            if comp[comp[f, g], h] != comp[f, comp[g, h]]:
                return False
    return True


def functor_ok(F) -> bool:
    X, Y = F.dom, F.cod
    ob, ar = F.on_objects, F.on_arrows
    ycomp = dict(Y.comp)
    for f in range(X.n_arrows):
        if Y.src[ar[f]] != ob[X.src[f]] or Y.tgt[ar[f]] != ob[X.tgt[f]]:
            return False
    for x in range(X.n_objects):
        if ar[X.unit[x]] != Y.unit[ob[x]]:
            return False
    for (f, h), k in dict(X.comp).items():
        if ycomp.get((ar[f], ar[h])) != ar[k]:
            return False
    return True


def components(G) -> list[int]:
    """Connected component label per object, by breadth-first search."""
    label = [-1] * G.n_objects
    nbrs = {x: set() for x in range(G.n_objects)}
    for f in range(G.n_arrows):
        nbrs[G.src[f]].add(G.tgt[f])
        nbrs[G.tgt[f]].add(G.src[f])
    for start in range(G.n_objects):
        if label[start] >= 0:
            continue
        label[start] = start
        stack = [start]
        while stack:
            y = stack.pop()
            for z in nbrs[y]:
                if label[z] < 0:
                    label[z] = start
                    stack.append(z)
    return label


def homs(G) -> dict:
    out = {}
    for f in range(G.n_arrows):
        out.setdefault((G.src[f], G.tgt[f]), []).append(f)
    return out


def faithful(F) -> bool:
    hx = homs(F.dom)
    return all(len({F.on_arrows[f] for f in fs}) == len(fs) for fs in hx.values())


def full(F) -> bool:
    hx, hy = homs(F.dom), homs(F.cod)
    for x, y in product(range(F.dom.n_objects), repeat=2):
        images = {F.on_arrows[f] for f in hx.get((x, y), ())}
        if images != set(hy.get((F.on_objects[x], F.on_objects[y]), ())):
            return False
    return True


def essentially_surjective(F) -> bool:
    comp = components(F.cod)
    hit = {comp[y] for y in F.on_objects}
    return all(comp[y] in hit for y in range(F.cod.n_objects))


def equivalence(F) -> bool:
    return faithful(F) and full(F) and essentially_surjective(F)


def representable(G) -> bool:
    return all(G.src[f] != G.tgt[f] or G.unit[G.src[f]] == f for f in range(G.n_arrows))


def set_action_ok(sa) -> bool:
    G, table, moment = sa.G, sa.table, sa.moment
    right = sa.side == "right"
    pairs = [(x, g) for x in range(sa.n_points) for g in range(G.n_arrows)
             if moment[x] == (G.tgt[g] if right else G.src[g])]
    for x, g in pairs:
        key = (x, g) if right else (g, x)
        if key not in table:
            return False
        if moment[table[key]] != (G.src[g] if right else G.tgt[g]):
            return False
    for x in range(sa.n_points):
        u = G.unit[moment[x]]
        if table[(x, u) if right else (u, x)] != x:
            return False
    for x, g in pairs:
        y = table[(x, g) if right else (g, x)]
        for h in range(G.n_arrows):
            if right and G.tgt[h] == G.src[g]:
                if table[y, h] != table[x, G.comp[g, h]]:
                    return False
            if not right and G.src[h] == G.tgt[g]:
                if table[h, y] != table[G.comp[h, g], x]:
                    return False
    return True


def weak_right_action_ok(wa) -> bool:
    """Moment and action functors, the strict moment identity, cell shapes, naturality and (a4)."""
    sg, X = wa.sg, wa.X
    G = sg.G
    if not (functor_ok(wa.mu) and functor_ok(wa.act_functor)):
        return False
    XG = wa.act_functor.dom
    mu = wa.mu.on_objects
    xcomp = dict(X.comp)

    def act(x, g):
        return wa.act_functor.on_objects[XG.obj((x, g))]

    def act_arr(b, j):
        return wa.act_functor.on_arrows[XG.arr((b, j))]

    def comp(*arrows):
        result = arrows[-1]
        for f in reversed(arrows[:-1]):
            if X.src[f] != X.tgt[result]:
                return None
            result = xcomp[f, result]
        return result

    pairs = [(x, g) for x in range(X.n_objects) for g in range(G.n_objects) if mu[x] == sg.trg(g)]
    for x, g in pairs:
        if mu[act(x, g)] != sg.src(g):
            return False
    triples = [(x, g, h) for x, g in pairs for h in range(G.n_objects) if sg.src(g) == sg.trg(h)]
    for x, g, h in triples:
        cell = wa.beta[x, g, h]
        if X.src[cell] != act(x, sg.mul(g, h)) or X.tgt[cell] != act(act(x, g), h):
            return False
    for x in range(X.n_objects):
        cell = wa.epsilon[x]
        if X.src[cell] != act(x, sg.one(mu[x])) or X.tgt[cell] != x:
            return False
    for x, g, h in triples:
        for b in range(X.n_arrows):
            if X.src[b] != x:
                continue
            for j in range(G.n_arrows):
                if G.src[j] != g:
                    continue
                for k in range(G.n_arrows):
                    if G.src[k] != h:
                        continue
                    end = (X.tgt[b], G.tgt[j], G.tgt[k])
                    lhs = comp(wa.beta[end], act_arr(b, sg.mul_arr(j, k)))
                    rhs = comp(act_arr(act_arr(b, j), k), wa.beta[x, g, h])
                    if lhs is None or lhs != rhs:
                        return False
    for b in range(X.n_arrows):
        x = X.src[b]
        moved = act_arr(b, G.unit[sg.one(mu[x])])
        if comp(wa.epsilon[X.tgt[b]], moved) != comp(b, wa.epsilon[x]):
            return False
    for x, g, h in triples:
        for l in range(G.n_objects):
            if sg.src(h) != sg.trg(l):
                continue
            lhs = comp(wa.beta[act(x, g), h, l], wa.beta[x, g, sg.mul(h, l)])
            rhs = comp(act_arr(wa.beta[x, g, h], G.unit[l]), wa.beta[x, sg.mul(g, h), l],
                       act_arr(X.unit[x], sg.alpha[g, h, l]))
            if lhs is None or lhs != rhs:
                return False
    for x, g in pairs:
        one = sg.one(mu[x])
        lhs = comp(act_arr(wa.epsilon[x], G.unit[g]), wa.beta[x, one, g])
        if lhs is None or lhs != act_arr(X.unit[x], sg.lam[g]):
            return False
        lhs = comp(wa.epsilon[act(x, g)], wa.beta[x, g, sg.one(sg.src(g))])
        if lhs is None or lhs != act_arr(X.unit[x], sg.rho[g]):
            return False
    return True


def coboundary_z(n: int, omega) -> dict:
    """``(d omega)(a, b, c, d)`` for ``Z/n`` with trivial coefficients ``Z/n``."""
    out = {}
    for a, b, c, d in product(range(n), repeat=4):
        out[a, b, c, d] = (omega[b, c, d] - omega[(a + b) % n, c, d] + omega[a, (b + c) % n, d]
                           - omega[a, b, (c + d) % n] + omega[a, b, c]) % n
    return out


def is_cocycle_z(n: int, omega) -> bool:
    return not any(coboundary_z(n, omega).values())
