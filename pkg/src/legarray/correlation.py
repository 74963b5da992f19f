"""Exact N-dimensional periodic correlation and bound verification.

The periodic cross-correlation of equal-sized arrays A, B at shift s is

    theta(s) = sum over all cells i of A[i] * B[(i + s) mod dims]

(entries are real integers, so the conjugate in the general definition is
the identity). `full_correlation` evaluates this sum directly in integer
arithmetic and is the canonical oracle; `full_correlation_fast` computes
the same table through FFTs and must reproduce the oracle bit-exactly
after rounding, guarded by a residual check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .arrays import IntArray
from .fields import _check_odd_prime

if TYPE_CHECKING:
    from .family import FamilyMember

FAST_SIZE_LIMIT = 1 << 24
# Entries are integers, so any transform residual beyond this signals real
# precision loss rather than float noise (desk-size error is << 1e-6).
RESIDUAL_TOLERANCE = 1e-3


class PrecisionError(RuntimeError):
    """The float transform path lost integer exactness."""


def _check_same_dims(a, b):
    if a.dims != b.dims:
        raise ValueError(f"dimension mismatch: {a.dims} vs {b.dims}")


def cross_correlation_at(a, b, shift) -> int:
    """theta_{a,b}(shift), exact. Shift components are reduced mod dims."""
    _check_same_dims(a, b)
    shift = tuple(int(s) for s in shift)
    if len(shift) != a.rank:
        raise ValueError(f"shift rank {len(shift)} != array rank {a.rank}")
    rolled = np.roll(b.values, tuple(-s for s in shift), axis=tuple(range(a.rank)))
    return int(np.sum(a.values.astype(np.int64) * rolled))


def full_correlation(a, b) -> IntArray:
    """Exact correlation table for every cyclic shift (the oracle path).

    Implemented as a direct sum of integer products: B is tiled once per
    axis so that every cyclic shift is a contiguous window, and einsum
    contracts the window view against A in int64. No transforms involved.
    """
    _check_same_dims(a, b)
    rank = a.rank
    tiled = np.tile(b.values, (2,) * rank)
    windows = sliding_window_view(tiled, a.dims)[tuple(slice(0, d) for d in a.dims)]
    # windows[s][i] == b[(s + i) mod dims]
    table = np.einsum(
        windows,
        list(range(2 * rank)),
        a.values.astype(np.int64),
        list(range(rank, 2 * rank)),
        list(range(rank)),
    )
    return IntArray(table)


def full_correlation_fast(a, b) -> IntArray:
    """FFT-accelerated correlation table; must equal full_correlation.

    Raises PrecisionError if any entry's rounding residual reaches
    RESIDUAL_TOLERANCE, which means the array is too large for the float
    path and the oracle should be used instead.
    """
    _check_same_dims(a, b)
    if a.size > FAST_SIZE_LIMIT:
        raise ValueError(f"array size {a.size} exceeds fast-path limit {FAST_SIZE_LIMIT}")
    axes = tuple(range(a.rank))
    fa = np.fft.rfftn(a.values.astype(np.float64), s=a.dims, axes=axes)
    fb = np.fft.rfftn(b.values.astype(np.float64), s=a.dims, axes=axes)
    table = np.fft.irfftn(np.conj(fa) * fb, s=a.dims, axes=axes)
    rounded = np.rint(table)
    residual = float(np.abs(table - rounded).max())
    if residual >= RESIDUAL_TOLERANCE:
        raise PrecisionError(
            f"rounding residual {residual:.3e} >= {RESIDUAL_TOLERANCE:.0e}; "
            "array too large for the float path"
        )
    return IntArray(rounded.astype(np.int64))


_METHODS = {"naive": full_correlation, "fast": full_correlation_fast}


@dataclass(frozen=True)
class CorrelationReport:
    """Outcome of checking a correlation table against its proven bound.

    For autocorrelation the bound applies off-peak (every shift except
    all-zeros); for cross-correlation it applies to every shift, and
    `off_peak_max_abs`/`peak_shifts`/`value_histogram` cover all shifts.
    `peak_value` is always the correlation at the all-zero shift.
    """

    mode: str  # "auto" | "cross"
    members: tuple[int, ...]
    bound: int
    peak_value: int
    off_peak_max_abs: int
    peak_shifts: tuple[tuple[int, ...], ...]
    value_histogram: dict[int, int]
    passed: bool
    values_match_derivation: bool

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "members": list(self.members),
            "bound": self.bound,
            "peak_value": self.peak_value,
            "off_peak_max_abs": self.off_peak_max_abs,
            "peak_shifts": [list(s) for s in self.peak_shifts],
            "value_histogram": {str(k): v for k, v in sorted(self.value_histogram.items())},
            "passed": self.passed,
            "values_match_derivation": self.values_match_derivation,
        }


def _bound_report(table, mode, members, bound, expected_values):
    dims = table.shape
    origin = (0,) * table.ndim
    peak_value = int(table[origin])
    if mode == "auto":
        mask = np.ones(dims, dtype=bool)
        mask[origin] = False
    else:
        mask = np.ones(dims, dtype=bool)
    region = table[mask]
    max_abs = int(np.abs(region).max())
    attaining = np.argwhere(mask & (np.abs(table) == max_abs))
    values, counts = np.unique(region, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    observed = set(histogram)
    if mode == "auto":
        match = observed == expected_values
    else:
        match = observed <= expected_values
    return CorrelationReport(
        mode=mode,
        members=members,
        bound=bound,
        peak_value=peak_value,
        off_peak_max_abs=max_abs,
        peak_shifts=tuple(tuple(int(x) for x in s) for s in attaining),
        value_histogram=histogram,
        passed=max_abs <= bound,
        values_match_derivation=match,
    )


def verify_autocorrelation(member: "FamilyMember", method: str = "naive") -> CorrelationReport:
    """Check a family member's off-peak |theta| against the bound p^n - 1.

    Also records whether the observed off-peak value set is exactly
    {1, 1 - p^n}, the value set the bound's derivation produces.
    """
    if member.params.a != 0:
        raise ValueError("autocorrelation bound requires origin value a = 0")
    p, n = member.params.p, member.params.n
    table = _METHODS[method](member.arr, member.arr).values
    q = p**n
    return _bound_report(table, "auto", (member.m,), q - 1, {1, 1 - q})


def verify_cross_correlation(
    m1: "FamilyMember", m2: "FamilyMember", method: str = "naive"
) -> CorrelationReport:
    """Check |theta| of two distinct members against the bound p^n + 1.

    Records whether the observed values stay within {1 - p^n, 1, p^n + 1}.
    """
    if m1.params != m2.params:
        raise ValueError("members must come from the same family")
    if m1.m == m2.m:
        raise ValueError("cross-correlation bound requires distinct members")
    if m1.params.a != 0:
        raise ValueError("cross-correlation bound requires origin value a = 0")
    p, n = m1.params.p, m1.params.n
    table = _METHODS[method](m1.arr, m2.arr).values
    q = p**n
    return _bound_report(table, "cross", (m1.m, m2.m), q + 1, {1 - q, 1, q + 1})


@dataclass(frozen=True)
class WelchMetrics:
    """Exact rational comparison of the family's bound-to-peak ratio
    against the p^n / p^{2n} lower-bound benchmark."""

    p: int
    n: int
    nonzero_count: int
    bound_to_peak_ratio: Fraction
    welch_ratio: Fraction
    relative_difference: Fraction

    def to_json_dict(self) -> dict:
        def frac(f: Fraction) -> dict:
            return {"fraction": f"{f.numerator}/{f.denominator}", "approx": float(f)}

        return {
            "p": self.p,
            "n": self.n,
            "nonzero_count": self.nonzero_count,
            "bound_to_peak_ratio": frac(self.bound_to_peak_ratio),
            "welch_ratio": frac(self.welch_ratio),
            "relative_difference": frac(self.relative_difference),
        }


def welch_metrics(p: int, n: int) -> WelchMetrics:
    """Exact rationals: each member has p^{2n} - 2 p^n + 1 nonzero entries,
    the cross-correlation bound is p^n + 1, and the benchmark ratio is
    p^n / p^{2n}."""
    _check_odd_prime(p)
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    q = p**n
    nonzero = q * q - 2 * q + 1
    bound_to_peak = Fraction(q + 1, nonzero)
    welch = Fraction(q, q * q)
    rel = bound_to_peak / welch - 1
    return WelchMetrics(
        p=p,
        n=n,
        nonzero_count=nonzero,
        bound_to_peak_ratio=bound_to_peak,
        welch_ratio=welch,
        relative_difference=rel,
    )
