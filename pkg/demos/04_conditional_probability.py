"""P(B|A) = P(A and B) / P(A) as the divergence-maximizing choice.

On the chain  empty < A&B < A  the null grading function is
G = (0, P(A&B), P(A)). Choosing F = (0, x, 1) to maximize D(F||G) gives
x = P(A&B) / P(A).

Run with:  python demos/04_conditional_probability.py
"""

import numpy as np

from mrdp import CpInstance, build_cp_problem, conditional_probability, q, q_double_prime, q_prime, verify_cp_identity

inst = CpInstance(p1=0.2, p2=0.5)
problem = build_cp_problem(inst)
print("chain:", problem.chain.labels, " G:", problem.null_gf.values)

x_star = conditional_probability(inst)
print("x* from the solver:", x_star, "  p1/p2:", inst.p1 / inst.p2)

# The one-variable objective and its derivatives.
xs = np.linspace(0.05, 0.95, 10)
for x in xs:
    print(f"x = {x:.2f}  q = {q(x, inst):+.6f}  q' = {q_prime(x, inst):+.6f}  q'' = {q_double_prime(x):+.3f}")
print("q at x*  =", q(x_star, inst), "= ln p2 =", np.log(inst.p2))
print("q' at x* =", q_prime(x_star, inst))

# Residual report across the whole derivation.
for p1, p2 in [(0.2, 0.5), (0.3, 1.0), (1e-6, 1.0), (0.49, 0.5)]:
    report = verify_cp_identity(CpInstance(p1, p2), 1e-9)
    print(p1, p2, "passed" if report.passed else "FAILED", report.residuals)
