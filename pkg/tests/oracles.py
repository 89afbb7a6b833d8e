"""Brute-force reference implementations, written independently of the library.

They work on plain ``(num_states, initial, transitions)`` data and use the
textbook definitions directly, trading speed for obviousness.
"""

from __future__ import annotations

import fnmatch

TAU = "i"


def raw(lts):
    return lts.num_states, lts.initial, sorted(lts.transitions)


def _moves(n, transitions):
    out = [dict() for _ in range(n)]
    for s, a, t in transitions:
        out[s].setdefault(a, set()).add(t)
    return out


def weak_moves(n, transitions):
    """``s =a=> t`` for observable ``a``; ``s =i=> t`` for zero or more internal steps."""
    reach = [[s == t for t in range(n)] for s in range(n)]
    for s, a, t in transitions:
        if a == TAU:
            reach[s][t] = True
    for k in range(n):  # Warshall
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    out = [dict() for _ in range(n)]
    for s in range(n):
        out[s][TAU] = {t for t in range(n) if reach[s][t]}
        for u in out[s][TAU]:
            for (p, a, q) in transitions:
                if p == u and a != TAU:
                    out[s].setdefault(a, set()).update(x for x in range(n) if reach[q][x])
    return out


def _gfp(left, right, symmetric):
    """Largest relation R with the (bi)simulation transfer property."""
    rel = {(p, q) for p in range(len(left)) for q in range(len(right))}
    changed = True
    while changed:
        changed = False
        for p, q in sorted(rel):
            ok = all(any((p2, q2) in rel for q2 in right[q].get(a, ()))
                     for a, ts in left[p].items() for p2 in ts)
            if ok and symmetric:
                ok = all(any((p2, q2) in rel for p2 in left[p].get(a, ()))
                         for a, ts in right[q].items() for q2 in ts)
            if not ok:
                rel.discard((p, q))
                changed = True
    return rel


def strong_bisimilar(a, b) -> bool:
    (na, ia, ta), (nb, ib, tb) = raw(a), raw(b)
    return (ia, ib) in _gfp(_moves(na, ta), _moves(nb, tb), True)


def weak_bisimilar(a, b) -> bool:
    (na, ia, ta), (nb, ib, tb) = raw(a), raw(b)
    return (ia, ib) in _gfp(weak_moves(na, ta), weak_moves(nb, tb), True)


def simulated_by(a, b, weak: bool = False) -> bool:
    """Does ``b`` simulate ``a``?"""
    (na, ia, ta), (nb, ib, tb) = raw(a), raw(b)
    moves = weak_moves if weak else _moves
    return (ia, ib) in _gfp(moves(na, ta), moves(nb, tb), False)


# -- mu-calculus ------------------------------------------------------------

def formula_holds(lts, f, state=None) -> bool:
    n, init, trans = raw(lts)
    strong, weak = _moves(n, trans), weak_moves(n, trans)
    return _eval(f, strong, weak, n, {})[init if state is None else state]


def _targets(moves, s, labels):
    out = set()
    for a, ts in moves[s].items():
        if any(fnmatch.fnmatchcase(a, p) for p in labels.patterns):
            out |= ts
    return out


def _eval(f, strong, weak, n, env) -> list:
    """Truth value of ``f`` per state, by structural recursion."""
    name = type(f).__name__
    if name == "TT":
        return [True] * n
    if name == "FF":
        return [False] * n
    if name == "Var":
        return [s in env[f.name] for s in range(n)]
    if name in ("And", "Or"):
        left = _eval(f.left, strong, weak, n, env)
        right = _eval(f.right, strong, weak, n, env)
        op = (lambda x, y: x and y) if name == "And" else (lambda x, y: x or y)
        return [op(x, y) for x, y in zip(left, right)]
    if name in ("Diamond", "Box", "WeakDiamond", "WeakBox"):
        moves = weak if name.startswith("Weak") else strong
        inner = _eval(f.body, strong, weak, n, env)
        quant = any if name.endswith("Diamond") else all
        return [quant(inner[t] for t in _targets(moves, s, f.labels)) for s in range(n)]
    if name in ("Mu", "Nu"):
        # n + 1 approximants always reach the fixpoint on n states.
        approx = set() if name == "Mu" else set(range(n))
        for _ in range(n + 1):
            vals = _eval(f.body, strong, weak, n, {**env, f.var: approx})
            approx = {s for s in range(n) if vals[s]}
        return [s in approx for s in range(n)]
    raise TypeError(name)
