"""Brute-force optima of CSP instances stored as densecsp JSON.

Tables are read row-major with the first scope variable most significant.
Run: python3 tools/oracles/csp.py instance.json [...]
"""

import json
import sys
from fractions import Fraction
from itertools import product


def optimum(inst):
    n, q = inst["n"], inst["q"]
    cons = [
        (c["scope"], Fraction(c["weight"]), [Fraction(str(v)) for v in c["table"]])
        for c in inst["constraints"]
    ]
    best, arg = None, None
    for a in product(range(q), repeat=n):
        v = Fraction(0)
        for scope, w, table in cons:
            idx = 0
            for x in scope:
                idx = idx * q + a[x]
            v += w * table[idx]
        if best is None or v > best:
            best, arg = v, a
    return best, arg


if __name__ == "__main__":
    for path in sys.argv[1:]:
        with open(path) as f:
            best, arg = optimum(json.load(f))
        print(path, best, list(arg))
