"""Independent oracles shared by the test modules.

Nothing here calls into the package's solvers; the divergence is re-derived
from plain Python loops so it can check the vectorized evaluator.
"""

import math

import numpy as np


def rd_loop(f, g):
    total = 0.0
    for fk, gk in zip(f, g):
        total -= fk * math.log(fk / gk)
    return total


def central_diff(fun, x, h):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for k in range(x.size):
        up, dn = x.copy(), x.copy()
        up[k] += h
        dn[k] -= h
        out[k] = (fun(up) - fun(dn)) / (2 * h)
    return out


def argmax_on_grid(fun, lo, hi, n):
    """Maximize a scalar function on a uniform grid in the open interval."""
    xs = np.linspace(lo, hi, n + 2)[1:-1]
    vals = np.array([fun(x) for x in xs])
    return float(xs[np.argmax(vals)])


def random_deltas(rng, n, low=0.05, high=2.0):
    return rng.uniform(low, high, size=n)
