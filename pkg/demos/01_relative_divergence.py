"""Relative divergence of one grading function from another.

Run with:  python demos/01_relative_divergence.py
"""

import numpy as np

from mrdp import (
    cdf_gf,
    divergence_gradient,
    increments,
    indexing_gf,
    make_chain,
    make_grading_function,
    relative_divergence,
    shannon_entropy,
)

# A chain is just an ordered list of labels. Order is the list order.
chain = make_chain(["low", "mid", "high"])

# Grading functions must increase strictly along the chain.
F = make_grading_function(chain, [0.0, 0.4, 1.0])
G = make_grading_function(chain, [0.0, 0.2, 0.5])
print("increments of F:", increments(F).deltas)
print("increments of G:", increments(G).deltas)

# D(F||G) = -sum f_k ln(f_k / g_k). Here every f_k is 2 g_k, so D = -ln 2.
print("D(F||G) =", relative_divergence(F, G), " -ln 2 =", -np.log(2))
print("D(F||F) =", relative_divergence(F, F))

# Only increments matter, so shifting either function changes nothing.
print("D(F+3 || G-1) =", relative_divergence(F.shifted(3.0), G.shifted(-1.0)))

# A CDF measured against the indexing function I(w_k) = k is Shannon entropy.
p = [0.2, 0.3, 0.5]
cdf = cdf_gf(p)
print("D(CDF || I) =", relative_divergence(cdf, indexing_gf(cdf.chain)))
print("H(p)        =", shannon_entropy(p))

# Gradient with respect to the increments of F: -ln(f_k/g_k) - 1.
print("dD/df =", divergence_gradient(increments(F), increments(G)))

# Rejected inputs raise subclasses of ValueError.
try:
    make_grading_function(chain, [0.0, 0.5, 0.5])
except ValueError as exc:
    print(type(exc).__name__, "->", exc)
