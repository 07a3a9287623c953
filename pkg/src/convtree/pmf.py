"""Discrete PMF data model and the exact (naive) convolution references.

A :class:`Pmf` stores nonnegative mass over a contiguous range of integer
outcomes; ``values[i]`` is the mass of outcome ``offset + i``. The offset is
first-class because negation (used for subtracting random variables) reverses
the vector and moves its support to negative outcomes.

Everything here is a pure function of immutable inputs: no operation mutates
its arguments, so all of them are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DegenerateDistributionError(ValueError):
    """Raised where positive mass is required but every value is zero."""


def _as_values(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("values must be a nonempty 1-D array")
    # min/max reductions cover NaN, infinities and negatives in two passes
    if not (v.min() >= 0.0 and v.max() < np.inf):
        if np.isnan(v.min()) or v.max() == np.inf:
            raise ValueError("values must be finite")
        raise ValueError("values must be nonnegative")
    return v


@dataclass(frozen=True, eq=False)
class Pmf:
    """Nonnegative masses (or unnormalized likelihoods) with an integer offset.

    The vector is treated as immutable once wrapped; none of the library
    functions write to it.
    """

    values: np.ndarray
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.values))
        object.__setattr__(self, "offset", int(self.offset))

    def __len__(self) -> int:
        return self.values.size

    @property
    def outcomes(self) -> np.ndarray:
        """Integer outcomes covered by the support, aligned with ``values``."""
        return np.arange(self.offset, self.offset + self.values.size)

    def argmax_outcome(self) -> int:
        """Outcome carrying the largest mass; ties go to the lowest outcome."""
        return self.offset + int(np.argmax(self.values))

    def to_dict(self) -> dict:
        return {"offset": self.offset, "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Pmf":
        return cls(np.asarray(data["values"], dtype=float), int(data["offset"]))


def delta(outcome: int = 0, mass: float = 1.0) -> Pmf:
    """Point mass at a single outcome."""
    return Pmf(np.array([mass], dtype=float), outcome)


@dataclass(frozen=True, eq=False)
class ErrorReport:
    """Per-index relative absolute error of a numerical result vs. a reference.

    Indices where the reference is zero are undefined; they are marked NaN and
    excluded from the aggregate helpers.
    """

    per_index_rel_abs_error: np.ndarray
    exact_values: np.ndarray

    @property
    def undefined_count(self) -> int:
        return int(np.isnan(self.per_index_rel_abs_error).sum())

    def max_error(self) -> float:
        return float(np.nanmax(self.per_index_rel_abs_error))

    def mean_error(self) -> float:
        return float(np.nanmean(self.per_index_rel_abs_error))


def normalize_sum(p: Pmf) -> Pmf:
    """Scale so the values sum to one."""
    total = float(p.values.sum())
    if total <= 0.0:
        raise DegenerateDistributionError("degenerate distribution: total mass is zero")
    return Pmf(p.values / total, p.offset)


def normalize_max(p: Pmf) -> Pmf:
    """Scale so the largest value is exactly one."""
    peak = float(p.values.max())
    if peak <= 0.0:
        raise DegenerateDistributionError("degenerate distribution: total mass is zero")
    return Pmf(p.values / peak, p.offset)


def negate(p: Pmf) -> Pmf:
    """Distribution of -X: reverse the vector and mirror the support.

    Outcome ``i`` of the input maps to outcome ``-i`` of the output, so the
    new offset is ``-(offset + len - 1)``.
    """
    return Pmf(p.values[::-1], -(p.offset + p.values.size - 1))


def naive_convolve(left: Pmf, right: Pmf) -> Pmf:
    """Exact standard convolution: out[m] = sum_l left[l] * right[m-l].

    Direct O(k_L * k_R) summation (np.convolve does not use FFT); this is the
    reference against which the fast path is validated.
    """
    return Pmf(np.convolve(left.values, right.values), left.offset + right.offset)


def naive_max_convolve(left: Pmf, right: Pmf) -> Pmf:
    """Exact max-convolution: out[m] = max_l left[l] * right[m-l].

    O(k_L * k_R); the oracle for every numerical max-convolution estimate.
    """
    a, b = left.values, right.values
    ka, kb = a.size, b.size
    out = np.empty(ka + kb - 1)
    for m in range(ka + kb - 1):
        lo = max(0, m - kb + 1)
        hi = min(ka - 1, m)
        # a[lo..hi] pairs with b[m-lo] down to b[m-hi]
        out[m] = (a[lo:hi + 1] * b[m - hi:m - lo + 1][::-1]).max()
    return Pmf(out, left.offset + right.offset)


def relative_absolute_error(numerical: Pmf, exact: Pmf) -> ErrorReport:
    """Per-index |numerical - exact| / exact against a reference result."""
    if len(numerical) != len(exact) or numerical.offset != exact.offset:
        raise ValueError(
            "shape mismatch: numerical and exact must share length and offset"
        )
    ex = exact.values
    with np.errstate(divide="ignore", invalid="ignore"):
        err = np.abs(numerical.values - ex) / ex
    err = np.where(ex == 0.0, np.nan, err)
    return ErrorReport(err, ex.copy())
