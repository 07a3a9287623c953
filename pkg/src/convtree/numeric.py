"""Numerical max-convolution in O(k log k) via the p-norm trick.

The max over the shifted products u_m[l] = L[l] * R[m-l] is the limit of
||u_m||_p as p -> infinity. For a finite exponent p the p-norm of every u_m
can be read off one standard convolution of the elementwise p-th powers:

    out[m] = (sum_l L[l]^p R[m-l]^p)^(1/p)

which overshoots the true max by at most t(m)^(1/p), t(m) being the number
of valid (l, m-l) pairs at index m. Larger p is closer to the max but loses
small values to underflow; the piecewise ladder picks, per index, the result
of the largest exponent whose (max-normalized) value is still trustworthy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from .fftconv import (
    choose_naive_or_fast,
    fast_convolve,
    padded_length,
    _canonical_order,
    _fft_convolve_values,
)
from .pmf import DegenerateDistributionError, Pmf, naive_max_convolve

DEFAULT_P_LADDER = (4.0, 32.0, 64.0)
DEFAULT_TAU = 0.6

# Outputs of the exponent-convolve step below this fraction of the peak are
# recomputed by direct summation: the 1/p root turns the FFT's ~1e-16
# absolute round-off into order-one values at indices whose true result is
# tiny, which would break the norm inequalities the operator guarantees.
REFINE_BELOW = 1e-6


def _check_p(p: float) -> float:
    p = float(p)
    if not p >= 1.0:
        raise ValueError(f"invalid exponent: p must be >= 1, got {p!r}")
    return p


def _pow(x: np.ndarray, p: float) -> np.ndarray:
    """Elementwise x**p; repeated squaring when p is an integral power of two."""
    if p == 1.0:
        return x.copy()
    exp = int(p)
    if exp == p and exp & (exp - 1) == 0:
        out = np.square(x)
        exp >>= 1
        while exp > 1:
            np.square(out, out=out)
            exp >>= 1
        return out
    return np.power(x, p)


@dataclass(frozen=True)
class PiecewiseConfig:
    """Ascending exponent ladder plus the trust threshold tau.

    tau applies to the max-normalized (pre-rescale) values, so it means
    "within tau of the largest output" regardless of input scale.
    """

    p_ladder: tuple[float, ...] = DEFAULT_P_LADDER
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        ladder = tuple(float(p) for p in self.p_ladder)
        if len(ladder) < 2:
            raise ValueError("p_ladder needs at least two exponents")
        if any(b <= a for a, b in zip(ladder, ladder[1:])):
            raise ValueError("p_ladder must be strictly ascending")
        for p in ladder:
            _check_p(p)
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must lie in (0, 1], got {self.tau!r}")
        object.__setattr__(self, "p_ladder", ladder)
        object.__setattr__(self, "tau", float(self.tau))


def p_norm_convolve(left: Pmf, right: Pmf, p: float) -> Pmf:
    """p-norm convolution: out[m] = (sum_l L[l]^p R[m-l]^p)^(1/p).

    p = 1 is standard convolution; p -> infinity approaches max-convolution
    from above. Satisfies, up to round-off,

        max_conv[m] <= out[m] <= max_conv[m] * t(m)^(1/p)

    and is elementwise nonincreasing in p.
    """
    p = _check_p(p)
    powered = fast_convolve(
        Pmf(_pow(left.values, p), left.offset),
        Pmf(_pow(right.values, p), right.offset),
        refine_below=REFINE_BELOW,
    )
    return Pmf(np.power(powered.values, 1.0 / p), powered.offset)


def _normalized_rung(left: Pmf, right: Pmf, p: float) -> tuple[np.ndarray, float]:
    """One underflow-guarded estimate: (max-normalized values, undo scale).

    Both inputs are divided by their maxima before exponentiation so the
    dominant terms start at 1 and survive the p-th power; the convolution
    output is renormalized by its own peak (also absorbing FFT drift) before
    the 1/p root. The caller multiplies by the returned scale to undo the
    input normalization.
    """
    lmax = float(left.values.max())
    rmax = float(right.values.max())
    if lmax <= 0.0 or rmax <= 0.0:
        raise DegenerateDistributionError("degenerate distribution: total mass is zero")
    vl = _pow(left.values / lmax, p)
    vr = _pow(right.values / rmax, p)
    vm = _fft_convolve_values(vl, vr)
    vm /= vm.max()  # peak is 1 by construction; >= 1 - eps survives round-off
    return np.power(vm, 1.0 / p), lmax * rmax


def max_convolve_normalized(left: Pmf, right: Pmf, p: float) -> Pmf:
    """Numerical max-convolution with max-normalization against underflow.

    Scale-equivariant by construction: scaling either input by c scales the
    output by c.
    """
    p = _check_p(p)
    left, right = _canonical_order(left, right)
    normalized, scale = _normalized_rung(left, right, p)
    return Pmf(normalized * scale, left.offset + right.offset)


def _ladder_powers(x: np.ndarray, ladder: tuple[float, ...]) -> list[np.ndarray]:
    """x**p for each ladder rung, sharing square chains between them.

    Climbing from x**q to x**p by squaring composes to exactly the same
    squarings as starting over from x, so the results are bit-identical to
    _pow(x, p) per rung; non-power-of-two rungs fall back to _pow directly.
    """
    powers = []
    climbed, climbed_p = x, 1
    for p in ladder:
        exp = int(p)
        if exp == p and exp & (exp - 1) == 0:
            while climbed_p < exp:
                climbed = np.square(climbed)
                climbed_p *= 2
            powers.append(climbed)
        else:
            powers.append(_pow(x, p))
    return powers


def max_convolve_piecewise(left: Pmf, right: Pmf,
                           config: PiecewiseConfig | None = None) -> Pmf:
    """Per-index choice among an exponent ladder.

    Every rung is computed eagerly (the same estimate max_convolve_normalized
    gives for that exponent); each output index takes the value from the
    largest exponent whose max-normalized result clears tau, falling back to
    the smallest exponent where none does. High-p values below tau are
    indistinguishable from underflow/round-off, so the stabler low-p estimate
    is used there.
    """
    if config is None:
        config = PiecewiseConfig()
    left, right = _canonical_order(left, right)
    lmax = float(left.values.max())
    rmax = float(right.values.max())
    if lmax <= 0.0 or rmax <= 0.0:
        raise DegenerateDistributionError("degenerate distribution: total mass is zero")
    # dividing by 1.0 is the identity; tree messages arrive max-normalized
    xl = left.values if lmax == 1.0 else left.values / lmax
    xr = right.values if rmax == 1.0 else right.values / rmax
    left_powers = _ladder_powers(xl, config.p_ladder)
    right_powers = _ladder_powers(xr, config.p_ladder)

    # every rung shares one padded size, so all ladder convolutions ride a
    # single batched transform (bit-identical to per-rung transforms)
    rungs = len(config.p_ladder)
    n_out = len(left) + len(right) - 1
    size = padded_length(n_out)
    stack = np.zeros((2 * rungs, size))
    for i, v in enumerate(left_powers):
        stack[i, :v.size] = v
    for i, v in enumerate(right_powers):
        stack[rungs + i, :v.size] = v
    spectra = scipy.fft.rfft(stack, axis=-1)
    vms = scipy.fft.irfft(spectra[:rungs] * spectra[rungs:], size,
                          axis=-1)[:, :n_out]
    np.maximum(vms, 0.0, out=vms)

    stitched = None
    for i, p in enumerate(config.p_ladder):
        vm = vms[i]
        vm /= vm.max()
        normalized = np.power(vm, 1.0 / p, out=vm)
        if stitched is None:
            stitched = normalized  # smallest exponent is the fallback
        else:
            np.copyto(stitched, normalized, where=normalized >= config.tau)
    return Pmf(stitched * (lmax * rmax), left.offset + right.offset)


def max_convolve_auto(left: Pmf, right: Pmf,
                      config: PiecewiseConfig | None = None,
                      crossover: float = 1.0) -> Pmf:
    """Exact naive max-convolution on small problems, piecewise otherwise."""
    if choose_naive_or_fast(len(left), len(right), crossover) == "naive":
        return naive_max_convolve(left, right)
    return max_convolve_piecewise(left, right, config)


def pair_counts(k_left: int, k_right: int) -> np.ndarray:
    """t(m): number of (l, m-l) index pairs contributing to each output index.

    t(m)^(1/p) is the analytic ceiling on p_norm_convolve overshoot.
    """
    m = np.arange(k_left + k_right - 1)
    return np.minimum(m, k_left - 1) - np.maximum(0, m - k_right + 1) + 1
