"""Finite chains and grading functions.

A chain is a finite list of labels whose order is the list order. A grading
function assigns strictly increasing reals along a chain; it is equivalently
described by its first value and its positive increments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DuplicateLabel,
    LengthMismatch,
    NonPositiveDelta,
    NotComonotonic,
    TooShort,
)

# Values closer than this are ties; grading functions must clear it.
TAU_STRICT = 1e-12


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Chain:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        if len(labels) < 2:
            raise TooShort(f"a chain needs at least 2 elements, got {len(labels)}")
        seen = set()
        for label in labels:
            if label in seen:
                raise DuplicateLabel(f"label {label!r} appears more than once")
            seen.add(label)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_increments(self) -> int:
        return len(self.labels) - 1


@dataclass(frozen=True, eq=False)
class IncrementVector:
    """Positive first differences ``f_k = F(w_k) - F(w_{k-1})``."""

    deltas: np.ndarray

    def __post_init__(self):
        deltas = _frozen(self.deltas)
        if deltas.ndim != 1 or deltas.size == 0:
            raise LengthMismatch("increments must be a non-empty 1-d sequence")
        bad = np.flatnonzero(~(np.isfinite(deltas) & (deltas > 0)))
        if bad.size:
            k = int(bad[0])
            raise NonPositiveDelta(f"increment {k + 1} is {float(deltas[k])!r}, must be > 0")
        object.__setattr__(self, "deltas", deltas)

    def __len__(self) -> int:
        return self.deltas.size

    def __iter__(self):
        return iter(self.deltas.tolist())

    def total(self) -> float:
        return float(np.sum(self.deltas))


@dataclass(frozen=True, eq=False)
class GradingFunction:
    """Strictly increasing values over the elements of a chain.

    When built from increments the exact deltas are retained, so
    ``increments(from_increments(chain, b, d))`` gives back ``d`` bit for bit
    instead of re-differencing the cumulative sums.
    """

    chain: Chain
    values: np.ndarray
    _deltas: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1 or values.size != len(self.chain):
            raise LengthMismatch(
                f"expected {len(self.chain)} values for the chain, got {values.size}"
            )
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise NotComonotonic(f"non-finite value at position {int(bad[0])}")
        flat = np.flatnonzero(~(values[1:] > values[:-1] + TAU_STRICT))
        if flat.size:
            k = int(flat[0]) + 1
            raise NotComonotonic(
                f"NotComonotonic at position {k}: "
                f"{float(values[k])!r} does not exceed {float(values[k - 1])!r}"
            )
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def shifted(self, c: float) -> GradingFunction:
        return GradingFunction(self.chain, self.values + c)


def make_chain(labels: Sequence[str]) -> Chain:
    return Chain(tuple(labels))


def make_grading_function(chain: Chain, values: Sequence[float]) -> GradingFunction:
    return GradingFunction(chain, values)


def indexing_gf(chain: Chain) -> GradingFunction:
    """The indexing function ``I(w_k) = k``."""
    n = len(chain)
    return GradingFunction(chain, np.arange(n, dtype=float), _frozen(np.ones(n - 1)))


def increments(gf: GradingFunction) -> IncrementVector:
    if gf._deltas is not None:
        return IncrementVector(gf._deltas)
    return IncrementVector(np.diff(gf.values))


def from_increments(chain: Chain, base: float, deltas) -> GradingFunction:
    if not isinstance(deltas, IncrementVector):
        deltas = IncrementVector(deltas)
    if len(deltas) != chain.n_increments:
        raise LengthMismatch(
            f"chain of {len(chain)} elements needs {chain.n_increments} increments, "
            f"got {len(deltas)}"
        )
    values = float(base) + np.concatenate(([0.0], np.cumsum(deltas.deltas)))
    return GradingFunction(chain, values, deltas.deltas)


def total_range(gf: GradingFunction) -> float:
    return float(gf.values[-1] - gf.values[0])
