"""Diagonal scale decomposition ``A = diag(d) @ S @ diag(e)``.

The core ``S`` keeps the zero pattern and signs of ``A``; every row and column
of ``S`` with at least one nonzero has a product of nonzero magnitudes equal
to one. The scales are found by alternating column-mean / row-mean removal on
the log-magnitudes of the nonzero entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import InvalidInputError, as_matrix

__all__ = ["BalanceSettings", "ScaleDecomposition", "scale_decompose"]


@dataclass(frozen=True)
class BalanceSettings:
    """Stopping rule for the balancing iteration.

    ``tolerance`` bounds the change, between sweeps, of the sample variance of
    the column sums of the log-magnitude matrix. An entry takes part in the
    balancing iff ``abs(a_ij) > zero_threshold``.
    """

    tolerance: float = 1e-22
    max_iterations: int = 1000
    zero_threshold: float = 0.0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidInputError("tolerance must be positive")
        if int(self.max_iterations) < 1:
            raise InvalidInputError("max_iterations must be >= 1")
        if not self.zero_threshold >= 0:
            raise InvalidInputError("zero_threshold must be non-negative")


@dataclass(frozen=True)
class ScaleDecomposition:
    d: np.ndarray
    e: np.ndarray
    s: np.ndarray
    converged: bool
    iterations: int

    def reconstruct(self) -> np.ndarray:
        return self.d[:, None] * self.s * self.e[None, :]


def _column_sum_variance(log_mag: np.ndarray) -> float:
    col_sums = log_mag.sum(axis=0)
    if col_sums.size < 2:
        return 0.0
    return float(np.var(col_sums, ddof=1))


def scale_decompose(a, settings: BalanceSettings | None = None) -> ScaleDecomposition:
    """Factor ``a`` into positive row scales, a balanced core, and column scales.

    Zero rows and columns are skipped; their scales stay at one. Hitting
    ``max_iterations`` is reported through ``converged=False`` rather than
    raised.
    """
    settings = settings or BalanceSettings()
    a = as_matrix(a)
    m, n = a.shape
    sign = np.sign(a)
    mag = np.abs(a)
    mask = mag > settings.zero_threshold
    weights = mask.astype(np.float64)

    log_mag = np.zeros((m, n))
    log_mag[mask] = np.log(mag[mask])
    sign[~mask] = 0.0

    row_counts = weights.sum(axis=1)
    col_counts = weights.sum(axis=0)
    rows = row_counts > 0
    cols = col_counts > 0
    # accumulated log offsets: d = exp(-u), e = exp(-v)
    u = np.zeros(m)
    v = np.zeros(n)

    current, previous = 0.0, 1.0
    iterations = 0
    converged = False
    while iterations < settings.max_iterations:
        iterations += 1
        p = log_mag[:, cols].sum(axis=0) / col_counts[cols]
        log_mag[:, cols] -= p[None, :] * weights[:, cols]
        v[cols] -= p

        p = log_mag[rows, :].sum(axis=1) / row_counts[rows]
        log_mag[rows, :] -= p[:, None] * weights[rows, :]
        u[rows] -= p

        previous, current = current, _column_sum_variance(log_mag)
        if abs(previous - current) <= settings.tolerance:
            converged = True
            break

    core = sign * np.exp(log_mag) * weights
    return ScaleDecomposition(
        d=np.exp(-u), e=np.exp(-v), s=core, converged=converged, iterations=iterations
    )
