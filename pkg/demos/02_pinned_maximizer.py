"""Maximizing D(F||G) when only values of F are pinned.

Without further constraints the maximizer follows G's shape between pins:
each segment's increments are G's increments rescaled to the pinned span.

Run with:  python demos/02_pinned_maximizer.py
"""

import numpy as np

from mrdp import MrdpProblem, grid_oracle, increments, indexing_gf, make_chain, make_grading_function, solve_pinned

# With G the indexing function and F ranging over [0, 1], the answer is the
# uniform distribution: the maximum entropy principle as a special case.
chain = make_chain(list("abcde"))
r = solve_pinned(MrdpProblem(indexing_gf(chain), base_value=0.0, target_range=1.0))
print("uniform increments:", increments(r.maximizer).deltas)
print("divergence:", r.divergence, "= ln 4 =", np.log(4))

# A skewed prior and an interior pin at position 2.
G = make_grading_function(chain, [0.0, 1.0, 3.0, 4.0, 8.0])
problem = MrdpProblem(G, base_value=10.0, target_range=2.0, pins=[(2, 10.5)])
r = solve_pinned(problem)
print("segments (start, stop, span):", problem.segments)
print("maximizer:", r.maximizer.values)
print("f/g per increment:", increments(r.maximizer).deltas / increments(G).deltas)

# The brute-force oracle agrees to within its grid step.
o = grid_oracle(problem, 1e-3)
print("grid oracle maximizer:", o.maximizer.values)
print("divergence  closed form %.9f   grid %.9f" % (r.divergence, o.divergence))
