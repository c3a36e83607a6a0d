"""Linear moment constraints and the dual Newton solver.

Maximizing D(F||G) subject to sum_k a_k f_k = b gives the exponential-family
form f_k = g_k exp(-1 - lam a_k - mu). The solver finds (lam, mu) by Newton's
method on the convex dual.

Run with:  python demos/03_moment_constraints.py
"""

import numpy as np

from mrdp import MrdpProblem, grid_oracle, increments, indexing_gf, kkt_residuals, make_chain, solve_constrained
from mrdp.errors import Infeasible

chain = make_chain(["w0", "w1", "w2", "w3"])
G = indexing_gf(chain)
positions = np.array([1.0, 2.0, 3.0])

for mean in (2.0, 2.4, 2.9):
    problem = MrdpProblem(G, 0.0, 1.0, moment_constraints=[(positions, mean)])
    r = solve_constrained(problem)
    f = increments(r.maximizer).deltas
    lam, mu = r.multipliers
    print(f"mean {mean}: f = {np.round(f, 6)}, lambda = {lam:+.6f}, mu = {mu:+.6f}, "
          f"{r.iterations} Newton steps")
    # consecutive ratios are all exp(-lambda)
    print("   f[k+1]/f[k] =", f[1:] / f[:-1], " exp(-lambda) =", np.exp(-lam))

# Residuals can be recomputed from the maximizer and the multipliers alone.
problem = MrdpProblem(G, 0.0, 1.0, moment_constraints=[(positions, 2.4)])
r = solve_constrained(problem)
print("KKT residuals (stationarity, constraints):",
      kkt_residuals(problem, increments(r.maximizer).deltas, r.multipliers))
print("grid oracle divergence:", grid_oracle(problem, 1e-3).divergence, " solver:", r.divergence)

# A mean outside (1, 3) cannot be met with positive increments.
try:
    solve_constrained(MrdpProblem(G, 0.0, 1.0, moment_constraints=[(positions, 3.5)]))
except Infeasible as exc:
    print("Infeasible ->", exc)
