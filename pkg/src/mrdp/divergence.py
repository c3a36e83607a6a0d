"""Relative divergence of one grading function from another.

For grading functions F, G on the same chain with increments f, g::

    D(F || G) = - sum_k f_k * ln(f_k / g_k)

measured in nats. With F a cumulative distribution and G the indexing
function this is the Shannon entropy of the step probabilities.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .chain import (
    Chain,
    GradingFunction,
    IncrementVector,
    from_increments,
    increments,
    indexing_gf,
    make_chain,
)
from .errors import ChainMismatch, LengthMismatch, NotADistribution


def rd_from_deltas(f: np.ndarray, g: np.ndarray) -> float:
    """Array-level divergence; no validation."""
    # + 0.0 turns the -0.0 of an all-zero sum into 0.0
    return float(-np.sum(f * np.log(f / g))) + 0.0


def relative_divergence(F: GradingFunction, G: GradingFunction) -> float:
    if F.chain.labels != G.chain.labels:
        raise ChainMismatch(
            f"F is on {list(F.chain.labels)} but G is on {list(G.chain.labels)}"
        )
    return rd_from_deltas(increments(F).deltas, increments(G).deltas)


def cdf_gf(probabilities: Sequence[float], chain: Chain | None = None) -> GradingFunction:
    """Cumulative distribution of ``probabilities`` as a grading function.

    The chain has one more element than there are probabilities; its first
    value is 0.
    """
    p = _check_distribution(probabilities)
    if chain is None:
        chain = make_chain([f"w{k}" for k in range(p.size + 1)])
    return from_increments(chain, 0.0, p)


def shannon_entropy(probabilities: Sequence[float]) -> float:
    p = _check_distribution(probabilities)
    return float(-np.sum(p * np.log(p)))


def _check_distribution(probabilities) -> np.ndarray:
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise NotADistribution("need a non-empty 1-d list of probabilities")
    if not np.all(np.isfinite(p) & (p > 0)):
        raise NotADistribution("every probability must be strictly positive")
    if abs(p.sum() - 1.0) > 1e-9:
        raise NotADistribution(f"probabilities sum to {float(p.sum())!r}, not 1")
    return p


def divergence_gradient(f, g) -> np.ndarray:
    """Partial derivatives of D with respect to each increment of F.

    ``dD/df_k = -ln(f_k / g_k) - 1``.
    """
    if not isinstance(f, IncrementVector):
        f = IncrementVector(f)
    if not isinstance(g, IncrementVector):
        g = IncrementVector(g)
    if len(f) != len(g):
        raise LengthMismatch(f"f has {len(f)} increments, g has {len(g)}")
    return -np.log(f.deltas / g.deltas) - 1.0


def entropy_via_divergence(probabilities: Sequence[float]) -> float:
    """Shannon entropy computed as D(CDF || I)."""
    F = cdf_gf(probabilities)
    return relative_divergence(F, indexing_gf(F.chain))
