"""Evaluates the calculator rows independently and writes calculator_rows.json."""
import json
from fractions import Fraction
from math import log2, sqrt

rows = [
    ("lb", dict(n=1024, k=2, eps="1/4", R=1)),
    ("lb", dict(n=4096, k=3, eps="1/8", R=2)),
    ("lb", dict(n=1048576, k=2, eps="1/16", R=0)),
    ("lb", dict(n=100000, k=4, eps="1/3", R=5)),
    ("formula_xor", dict(n=1024, s=16, eps="1/4")),
    ("formula_xor", dict(n=1000000, s=100, eps="1/1000")),
    ("formula_nih", dict(n=256, s=9, k=4, R=3, eps="1/8")),
    ("formula_ltf", dict(n=1024, halfspaces=1024, eps="1/1024")),
    ("formula_sym", dict(n=4096, s=256, eps="1/16")),
    ("formula_nof", dict(n=4096, s=16, k=3, R=2, eps="1/4")),
]


def value(kind, p):
    eps = float(Fraction(p["eps"]))
    n = p["n"]
    if kind == "lb":
        k, R = p["k"], p["R"]
        return n**2 / (k**2 * 16**k * (R + log2(n)) ** 2 * log2(1 / eps) ** 2)
    if kind == "formula_xor":
        s = p["s"]
        return sqrt(s) * log2(s) * log2(1 / eps) + log2(n)
    if kind == "formula_nih":
        s, k, R = p["s"], p["k"], p["R"]
        return n / k + (sqrt(s) * (R + log2(s)) * log2(1 / eps) + log2(k)) * log2(k)
    if kind == "formula_ltf":
        m = p["halfspaces"]
        return sqrt(n) * m**0.25 * log2(n) * log2(n / eps)
    if kind == "formula_sym":
        s = p["s"]
        return sqrt(n) * s**0.25 * log2(n) * log2(1 / eps)
    if kind == "formula_nof":
        s, k, R = p["s"], p["k"], p["R"]
        return n - n / (sqrt(s) * k * 4**k * (R + log2(n)) * log2(n / eps))
    raise ValueError(kind)


out = [dict(calculator=kind, params=p, expected=value(kind, p)) for kind, p in rows]
with open(__file__.replace(".py", ".json"), "w") as f:
    json.dump(out, f, indent=2)
    f.write("\n")
