"""Conditional probability as the maximizer of a relative divergence.

Take the chain of events  empty < A&B < A  ordered by inclusion. The null
grading function is G = (0, P(A&B), P(A)) and the candidate is
F = (0, x, 1) with x = P(B|A) unknown. Maximizing D(F || G) over x in (0, 1)
gives x = P(A&B) / P(A).

The objective in x is

    q(x) = -x ln(x / p1) - (1 - x) ln((1 - x) / (p2 - p1))

with q'(x) = ln(1 - x) - ln x + ln p1 - ln(p2 - p1) and
q''(x) = -1 / (x (1 - x)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .chain import TAU_STRICT, make_chain, make_grading_function
from .divergence import relative_divergence
from .errors import InvalidInstance, OutOfDomain
from .solver import MrdpProblem, SolveResult, solve_pinned

CP_LABELS = ("∅", "A∩B", "A")


@dataclass(frozen=True)
class CpInstance:
    """Known probabilities ``p1 = P(A&B)`` and ``p2 = P(A)``."""

    p1: float
    p2: float

    def __post_init__(self):
        p1, p2 = float(self.p1), float(self.p2)
        if not (math.isfinite(p1) and math.isfinite(p2)):
            raise InvalidInstance(f"p1={self.p1!r}, p2={self.p2!r} must be finite")
        # G = (0, p1, p2) must be a strict grading function
        if not (TAU_STRICT < p1 and p1 + TAU_STRICT < p2 <= 1.0):
            raise InvalidInstance(f"need 0 < p1 < p2 <= 1, got p1={p1!r}, p2={p2!r}")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)


def build_cp_problem(inst: CpInstance) -> MrdpProblem:
    chain = make_chain(CP_LABELS)
    G = make_grading_function(chain, [0.0, inst.p1, inst.p2])
    return MrdpProblem(G, base_value=0.0, target_range=1.0, pins=((0, 0.0), (2, 1.0)))


def _check_x(x: float) -> float:
    x = float(x)
    if not 0.0 < x < 1.0:
        raise OutOfDomain(f"x must lie in the open interval (0, 1), got {x!r}")
    return x


def q(x: float, inst: CpInstance) -> float:
    x = _check_x(x)
    return -x * math.log(x / inst.p1) - (1 - x) * math.log((1 - x) / (inst.p2 - inst.p1))


def q_prime(x: float, inst: CpInstance) -> float:
    x = _check_x(x)
    return math.log1p(-x) - math.log(x) + math.log(inst.p1) - math.log(inst.p2 - inst.p1)


def q_double_prime(x: float) -> float:
    x = _check_x(x)
    return -1.0 / ((1 - x) * x)


def solve_cp(inst: CpInstance) -> SolveResult:
    return solve_pinned(build_cp_problem(inst))


def conditional_probability(inst: CpInstance) -> float:
    """P(B|A) recovered as the middle value of the divergence maximizer."""
    return float(solve_cp(inst).maximizer.values[1])


@dataclass(frozen=True)
class CpReport:
    passed: bool
    x: float
    tolerance: float
    residuals: dict = field(default_factory=dict)
    second_derivative: float = math.nan

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "x": self.x,
            "tolerance": self.tolerance,
            "residuals": dict(self.residuals),
            "q_double_prime": self.second_derivative,
        }


def verify_cp_identity(inst: CpInstance, tolerance: float) -> CpReport:
    """Cross-check the solver's x against the closed form and q, q', q''."""
    if not tolerance > 0:
        raise ValueError(f"tolerance must be > 0, got {tolerance!r}")
    result = solve_cp(inst)
    F = result.maximizer
    x = float(F.values[1])
    G = build_cp_problem(inst).null_gf
    residuals = {
        "closed_form": abs(x - inst.p1 / inst.p2),
        "q_prime": abs(q_prime(x, inst)),
        "q_vs_divergence": abs(q(x, inst) - relative_divergence(F, G)),
    }
    curvature = q_double_prime(x)
    passed = curvature < 0 and all(r <= tolerance for r in residuals.values())
    return CpReport(passed, x, float(tolerance), residuals, curvature)
