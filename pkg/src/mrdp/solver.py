"""Maximum relative divergence problems.

Given a null grading function G, find the grading function F that maximizes
D(F || G) over all F with

* fixed first value and fixed range (the endpoint pins),
* optionally more pinned values at interior positions,
* optionally linear equalities ``sum_k a_k f_k = b`` on the increments of F.

The objective is strictly concave in the increments, so the maximizer is
unique whenever the admissible set has a strictly positive point. Three
routes are offered:

``solve_pinned``
    Closed form. Between consecutive pins the increments of F are the
    increments of G rescaled to the pinned span.
``solve_constrained``
    Newton's method on the convex dual. At the optimum
    ``f_k = g_k * exp(-1 - sum_j lam_j a_jk - mu_s(k))`` with one ``mu`` per
    pin segment.
``grid_oracle``
    Brute-force scan of the admissible set for small problems; used only to
    check the other two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize

from .chain import TAU_STRICT, GradingFunction, increments
from .divergence import rd_from_deltas
from .errors import (
    Infeasible,
    InvalidPins,
    LengthMismatch,
    MaxIterationsExceeded,
    NoFeasibleGridPoint,
    TooLarge,
)

TOL_CONSTRAINT = 1e-10
TOL_STATIONARITY = 1e-8
MAX_NEWTON_ITER = 100
MAX_HALVINGS = 40
MAX_GRID_FREE = 4

# |nu| beyond this means the dual is running off to -inf.
_DUAL_BLOWUP = 1e10


@dataclass(frozen=True, eq=False)
class MrdpProblem:
    """Admissible set and prior for an MRDP problem.

    Endpoint pins ``(0, base_value)`` and ``(n, base_value + target_range)``
    are added automatically; passing them explicitly is allowed as long as
    they agree. ``moment_constraints`` is a sequence of
    ``(coefficients, target)`` pairs acting on the increments of F.
    """

    null_gf: GradingFunction
    base_value: float = 0.0
    target_range: float = 1.0
    pins: tuple = ()
    moment_constraints: tuple = ()
    segments: tuple = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.null_gf)
        base = float(self.base_value)
        span = float(self.target_range)
        if not (np.isfinite(span) and span > 0):
            raise InvalidPins(f"target_range must be > 0, got {self.target_range!r}")
        if not np.isfinite(base):
            raise InvalidPins(f"base_value must be finite, got {self.base_value!r}")

        pinned = {0: base, n - 1: base + span}
        raw = self.pins.items() if isinstance(self.pins, dict) else self.pins
        for item in raw:
            try:
                pos, val = item
            except (TypeError, ValueError):
                raise InvalidPins(f"pin {item!r} is not a (position, value) pair") from None
            if isinstance(pos, bool) or int(pos) != pos:
                raise InvalidPins(f"pin position {pos!r} is not an integer")
            pos, val = int(pos), float(val)
            if not 0 <= pos < n:
                raise InvalidPins(f"pin position {pos} outside chain of {n} elements")
            if pos in pinned and pinned[pos] != val:
                raise InvalidPins(
                    f"pin at position {pos} has value {val!r}, expected {pinned[pos]!r}"
                )
            pinned[pos] = val
        pins = tuple(sorted(pinned.items()))
        for (p0, v0), (p1, v1) in zip(pins, pins[1:]):
            if not v1 > v0 + TAU_STRICT:
                raise InvalidPins(
                    f"pinned values must increase: position {p1} has {v1!r} "
                    f"after {v0!r} at position {p0}"
                )

        moments = []
        for j, item in enumerate(self.moment_constraints):
            coeffs, target = item
            a = np.array(coeffs, dtype=float)
            if a.ndim != 1 or a.size != n - 1:
                raise LengthMismatch(
                    f"constraint {j} has {a.size} coefficients, chain has {n - 1} increments"
                )
            if not (np.all(np.isfinite(a)) and np.isfinite(float(target))):
                raise LengthMismatch(f"constraint {j} has non-finite entries")
            a.flags.writeable = False
            moments.append((a, float(target)))

        # segment s covers increments [start, stop) and must add up to span
        segments = tuple(
            (p0, p1, v1 - v0) for (p0, v0), (p1, v1) in zip(pins, pins[1:])
        )
        object.__setattr__(self, "base_value", base)
        object.__setattr__(self, "target_range", span)
        object.__setattr__(self, "pins", pins)
        object.__setattr__(self, "moment_constraints", tuple(moments))
        object.__setattr__(self, "segments", segments)

    @property
    def chain(self):
        return self.null_gf.chain

    @property
    def n_increments(self) -> int:
        return len(self.null_gf) - 1

    def equality_system(self) -> tuple[np.ndarray, np.ndarray]:
        """Rows for the moment constraints, then one row per pin segment."""
        n = self.n_increments
        rows, rhs = [], []
        for a, b in self.moment_constraints:
            rows.append(a)
            rhs.append(b)
        for start, stop, span in self.segments:
            row = np.zeros(n)
            row[start:stop] = 1.0
            rows.append(row)
            rhs.append(span)
        return np.array(rows), np.array(rhs)

    def assemble(self, deltas: np.ndarray) -> GradingFunction:
        """Grading function with these increments that hits every pin exactly."""
        pins = dict(self.pins)
        values = np.empty(len(self.null_gf))
        for start, stop, _ in self.segments:
            values[start] = pins[start]
            values[start + 1 : stop + 1] = pins[start] + np.cumsum(deltas[start:stop])
        for pos, val in self.pins:
            values[pos] = val
        d = np.array(deltas, dtype=float)
        d.flags.writeable = False
        return GradingFunction(self.chain, values, d)


@dataclass(frozen=True, eq=False)
class SolveResult:
    maximizer: GradingFunction
    divergence: float
    multipliers: tuple[float, ...]
    iterations: int
    stationarity_residual: float
    constraint_residual: float


def kkt_residuals(problem: MrdpProblem, f, multipliers) -> tuple[float, float]:
    """Stationarity and constraint residuals of a candidate maximizer.

    ``multipliers`` is ordered like the rows of
    :meth:`MrdpProblem.equality_system`.
    """
    A, b = problem.equality_system()
    f = np.asarray(f, dtype=float)
    nu = np.asarray(multipliers, dtype=float)
    g = increments(problem.null_gf).deltas
    stat = np.log(f / g) + 1.0 + A.T @ nu
    return float(np.max(np.abs(stat))), float(np.max(np.abs(A @ f - b)))


def _segment_mus(problem: MrdpProblem, g: np.ndarray) -> np.ndarray:
    # mu_s such that g * exp(-1 - mu_s) fills segment s exactly
    return np.array(
        [np.log(np.sum(g[start:stop]) / span) - 1.0 for start, stop, span in problem.segments]
    )


def solve_pinned(problem: MrdpProblem) -> SolveResult:
    if problem.moment_constraints:
        raise ValueError("solve_pinned handles pins only; use solve_constrained")
    G = problem.null_gf.values
    g = increments(problem.null_gf).deltas
    f = np.empty_like(g)
    values = np.empty_like(G)
    pins = dict(problem.pins)
    for start, stop, span in problem.segments:
        g_span = G[stop] - G[start]
        f[start:stop] = g[start:stop] * (span / g_span)
        lo = pins[start]
        values[start:stop] = lo + span * ((G[start:stop] - G[start]) / g_span)
    for pos, val in problem.pins:
        values[pos] = val
    f.flags.writeable = False
    F = GradingFunction(problem.chain, values, f)

    nu = _segment_mus(problem, g)
    stat, cons = kkt_residuals(problem, f, nu)
    return SolveResult(F, rd_from_deltas(f, g), (), 0, stat, cons)


def _check_strictly_feasible(A: np.ndarray, b: np.ndarray, cap: float) -> None:
    """LP certificate: is there f with A f = b and every f_k > TAU_STRICT?"""
    m, n = A.shape
    # variables (f_1..f_n, t); maximize t subject to f_k >= t
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    res = optimize.linprog(
        c,
        A_ub=A_ub,
        b_ub=np.zeros(n),
        A_eq=np.hstack([A, np.zeros((m, 1))]),
        b_eq=b,
        bounds=[(0, None)] * n + [(0, cap)],
        method="highs",
    )
    if res.status == 2 or (res.status == 0 and -res.fun <= TAU_STRICT):
        raise Infeasible(
            "no grading function with strictly positive increments meets the constraints"
        )


def solve_constrained(
    problem: MrdpProblem,
    *,
    tol_constraint: float = TOL_CONSTRAINT,
    tol_stationarity: float = TOL_STATIONARITY,
    max_iter: int = MAX_NEWTON_ITER,
) -> SolveResult:
    """Maximize D(F || G) under pins and moment constraints via the dual.

    The dual function is ``d(nu) = sum_k g_k exp(-1 - (A^T nu)_k) + b . nu``,
    smooth and convex; its minimizer gives the primal optimum through
    ``f = g * exp(-1 - A^T nu)``. Newton steps use a least-squares solve so
    that redundant constraint rows do not break the iteration.

    Multipliers are returned as ``(lam_1, ..., lam_m, mu_1, ..., mu_S)``: one
    per moment constraint, then one per pin segment. With endpoint pins only,
    the last entry is the multiplier of the range constraint.
    """
    A, b = problem.equality_system()
    g = increments(problem.null_gf).deltas
    m = len(problem.moment_constraints)
    _check_strictly_feasible(A, b, cap=max(span for *_, span in problem.segments))

    nu = np.concatenate([np.zeros(m), _segment_mus(problem, g)])

    def dual(nu):
        with np.errstate(over="ignore"):
            f = g * np.exp(-1.0 - A.T @ nu)
        return float(np.sum(f) + b @ nu), f

    value, f = dual(nu)
    iterations = 0
    stalled = False
    while True:
        grad = b - A @ f
        if np.max(np.abs(grad)) <= tol_constraint:
            break
        if iterations >= max_iter:
            break
        H = (A * f) @ A.T
        step = linalg.lstsq(H, -grad, cond=None)[0]
        slope = float(grad @ step)
        if not slope < 0:
            stalled = True
            break
        t = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial_value, trial_f = dual(nu + t * step)
            if np.isfinite(trial_value) and trial_value <= value + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            stalled = True
            break
        nu = nu + t * step
        value, f = trial_value, trial_f
        iterations += 1
        if not np.all(np.isfinite(nu)) or np.max(np.abs(nu)) > _DUAL_BLOWUP:
            raise Infeasible("dual multipliers diverge; constraints admit no interior point")

    if np.min(f) < TAU_STRICT:
        raise Infeasible(
            f"optimal increment {float(np.min(f))!r} is below {TAU_STRICT}; "
            "the admissible set has no interior point"
        )
    F = problem.assemble(f)
    stat, cons = kkt_residuals(problem, increments(F).deltas, nu)
    result = SolveResult(
        F, rd_from_deltas(f, g), tuple(float(x) for x in nu), iterations, stat, cons
    )
    if cons > tol_constraint or stat > tol_stationarity:
        why = "line search stalled" if stalled else f"no convergence in {max_iter} iterations"
        raise MaxIterationsExceeded(
            f"{why}: constraint residual {cons:.3e}, stationarity residual {stat:.3e}",
            result,
        )
    return result


def _free_increment_count(problem: MrdpProblem) -> int:
    return sum(stop - start for start, stop, _ in problem.segments if stop - start > 1)


def grid_oracle(problem: MrdpProblem, resolution: float) -> SolveResult:
    """Exhaustive grid search over the admissible increments.

    A maximal independent set of columns of the equality system is solved for
    exactly; the remaining increments run over a grid with step
    ``resolution * span`` of their segment. Only small problems (at most four
    increments outside singleton pin segments) are accepted.
    """
    if not resolution > 0:
        raise ValueError(f"resolution must be > 0, got {resolution!r}")
    free = _free_increment_count(problem)
    if free > MAX_GRID_FREE:
        raise TooLarge(f"{free} free increments; the grid oracle handles at most {MAX_GRID_FREE}")

    A, b = problem.equality_system()
    g = increments(problem.null_gf).deltas
    n = problem.n_increments
    span_of = np.empty(n)
    for start, stop, span in problem.segments:
        span_of[start:stop] = span

    _, r_fac, perm = linalg.qr(A, pivoting=True, mode="economic")
    diag = np.abs(np.diag(r_fac))
    rank = int(np.sum(diag > 1e-10 * max(diag[0], 1.0)))
    pivots, grid_cols = np.sort(perm[:rank]), np.sort(perm[rank:])
    A_piv, A_grid = A[:, pivots], A[:, grid_cols]
    piv_pinv = np.linalg.pinv(A_piv)
    scale = max(1.0, float(np.max(np.abs(b))))

    axes = [
        np.arange(1, int(np.floor((1.0 - 1e-12) / resolution)) + 1) * resolution * span_of[k]
        for k in grid_cols
    ]

    best_value, best_f, scanned = -np.inf, None, 0
    outer = axes[:-2]
    inner = axes[-2:]
    for head in itertools.product(*outer):
        mesh = np.meshgrid(*inner, indexing="ij") if inner else []
        count = mesh[0].size if inner else 1
        pts = np.empty((len(grid_cols), count))
        for i, val in enumerate(head):
            pts[i] = val
        for i, arr in enumerate(mesh):
            pts[len(head) + i] = arr.ravel()
        rhs = b[:, None] - A_grid @ pts
        solved = piv_pinv @ rhs
        resid = np.max(np.abs(A_piv @ solved - rhs), axis=0)
        f_all = np.empty((n, count))
        f_all[grid_cols] = pts
        f_all[pivots] = solved
        ok = (resid <= 1e-9 * scale) & np.all(f_all > TAU_STRICT, axis=0)
        scanned += count
        if not np.any(ok):
            continue
        f_ok = f_all[:, ok]
        vals = -np.sum(f_ok * np.log(f_ok / g[:, None]), axis=0)
        i = int(np.argmax(vals))
        if vals[i] > best_value:
            best_value, best_f = float(vals[i]), f_ok[:, i].copy()

    if best_f is None:
        raise NoFeasibleGridPoint(
            f"no admissible grid point at resolution {resolution!r}"
        )

    F = problem.assemble(best_f)
    # least-squares multipliers measure how far the grid point is from stationary
    nu = linalg.lstsq(A.T, -(np.log(best_f / g) + 1.0), cond=None)[0]
    stat, cons = kkt_residuals(problem, best_f, nu)
    return SolveResult(F, best_value, (), scanned, stat, cons)
