"""Independent brute-force values for the game fixtures used in the Rust tests.

Every value is computed by enumerating both provers' strategies in full, with
the games rebuilt from scratch here rather than read from the Rust code.
Run: python3 tools/oracles/games.py
"""

from fractions import Fraction
from itertools import combinations, product

import numpy as np


def odd_cycle():
    # X = Y = {0,1,2}, bit answers, edges x_i~y_i and x_i~y_{i+1};
    # (x2, y0) demands inequality, every other edge equality.
    edges = {}
    for i in range(3):
        for y in (i, (i + 1) % 3):
            if (i, y) == (2, 0):
                edges[(i, y)] = lambda a, b: 1 if a != b else 0
            else:
                edges[(i, y)] = lambda a, b: 1 if a == b else 0
    weights = {e: Fraction(1, 6) for e in edges}
    return 3, 3, 2, 2, edges, weights


def chsh():
    edges = {}
    for x in range(2):
        for y in range(2):
            edges[(x, y)] = (lambda x, y: lambda a, b: 1 if (a ^ b) == (x & y) else 0)(x, y)
    weights = {e: Fraction(1, 4) for e in edges}
    return 2, 2, 2, 2, edges, weights


def value(game):
    nx, ny, sx, sy, edges, weights = game
    best = Fraction(0)
    for xs in product(range(sx), repeat=nx):
        for ys in product(range(sy), repeat=ny):
            v = sum(w * edges[e](xs[e[0]], ys[e[1]]) for e, w in weights.items())
            best = max(best, v)
    return best


def repeat2(game):
    nx, ny, sx, sy, edges, weights = game
    out_edges, out_w = {}, {}
    for (e1, w1), (e2, w2) in product(weights.items(), repeat=2):
        x = e1[0] * nx + e2[0]
        y = e1[1] * ny + e2[1]

        def pay(a, b, e1=e1, e2=e2):
            return edges[e1](a // sx, b // sy) * edges[e2](a % sx, b % sy)

        out_edges[(x, y)] = pay
        out_w[(x, y)] = w1 * w2
    return nx * nx, ny * ny, sx * sx, sy * sy, out_edges, out_w


def birthday(game, k, l):
    nx, ny, sx, sy, edges, weights = game
    xsets = list(combinations(range(nx), k))
    ysets = list(combinations(range(ny), l))
    out_edges, out_w = {}, {}
    w = Fraction(1, len(xsets) * len(ysets))
    for i, s in enumerate(xsets):
        for j, t in enumerate(ysets):
            inside = [(s.index(x), t.index(y), f) for (x, y), f in edges.items()
                      if x in s and y in t and weights[(x, y)] > 0]

            def pay(a, b, inside=inside):
                # a, b: answer tuples for the sorted members of S and T
                p = 1
                for pa, pb, f in inside:
                    p *= f(a[pa], b[pb])
                return p

            out_edges[(i, j)] = pay
            out_w[(i, j)] = w
    # strategies answer tuples; value() indexes them by question
    ax = list(product(range(sx), repeat=k))
    ay = list(product(range(sy), repeat=l))
    wrapped = {e: (lambda f: lambda a, b: f(ax[a], ay[b]))(f) for e, f in out_edges.items()}
    return len(xsets), len(ysets), len(ax), len(ay), wrapped, out_w


def birthday_csp_value(game, l=1, kk=2):
    # fully dense kk-CSP over (S, T) pairs; only l = 1, kk = 2 is needed
    assert l == 1 and kk == 2
    nx, ny, sx, sy, edges, weights = game
    nv = nx * ny
    q = sx * sy
    var = [(v // ny, v % ny) for v in range(nv)]
    ans = [(a // sy, a % sy) for a in range(q)]

    def pay(v1, v2, a1, a2):
        (x1, y1), (x2, y2) = var[v1], var[v2]
        (al1, be1), (al2, be2) = ans[a1], ans[a2]
        xa, ya = {}, {}
        for x, al in ((x1, al1), (x2, al2)):
            if xa.setdefault(x, al) != al:
                return 0
        for y, be in ((y1, be1), (y2, be2)):
            if ya.setdefault(y, be) != be:
                return 0
        p = 1
        for x, a in xa.items():
            for y, b in ya.items():
                if (x, y) in edges and weights[(x, y)] > 0:
                    p *= edges[(x, y)](a, b)
        return p

    count = q ** nv
    idx = np.arange(count, dtype=np.int64)
    digits = np.stack([(idx // q ** (nv - 1 - v)) % q for v in range(nv)], axis=1)
    total = np.zeros(count, dtype=np.int64)
    for v1 in range(nv):
        for v2 in range(nv):
            table = np.array([[pay(v1, v2, a1, a2) for a2 in range(q)] for a1 in range(q)],
                             dtype=np.int64)
            total += table[digits[:, v1], digits[:, v2]]
    return Fraction(int(total.max()), nv * nv)


def equality_2x2():
    edges = {(x, y): (lambda a, b: 1 if a == b else 0) for x in range(2) for y in range(2)}
    return 2, 2, 2, 2, edges, {e: Fraction(1, 4) for e in edges}


if __name__ == "__main__":
    g = odd_cycle()
    print("odd_cycle", value(g))
    for k in (1, 2, 3):
        print("birthday", k, [str(value(birthday(g, k, l))) for l in (1, 2, 3)])
    print("chsh", value(chsh()))
    print("chsh^2", value(repeat2(chsh())))
    print("equality_2x2", value(equality_2x2()))
    print("odd_cycle G^1_2", birthday_csp_value(g))
