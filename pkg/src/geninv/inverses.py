"""Unit-consistent and mixed generalized inverses, plus consistency checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .balance import BalanceSettings, scale_decompose
from .matrix import InvalidInputError, as_matrix, pinv

__all__ = [
    "InverseKind",
    "BlockPartition",
    "uc_inverse",
    "mixed_inverse",
    "generalized_inverse",
    "check_unit_consistency",
    "check_rotation_consistency",
]


class InverseKind(str, enum.Enum):
    MP = "mp"
    UC = "uc"
    MIXED = "mixed"


@dataclass(frozen=True)
class BlockPartition:
    """Square matrix split as ``[[w, x], [y, z]]``.

    The first ``m`` variables need unit consistency, the last ``n`` need
    rotation consistency.
    """

    w: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        w, x, y, z = (as_matrix(b, name) for b, name in
                      zip((self.w, self.x, self.y, self.z), "wxyz"))
        m, n = w.shape[0], z.shape[0]
        if w.shape != (m, m) or z.shape != (n, n):
            raise InvalidInputError("w and z blocks must be square")
        if x.shape != (m, n) or y.shape != (n, m):
            raise InvalidInputError(
                f"off-diagonal blocks must be {m}x{n} and {n}x{m}, "
                f"got {x.shape} and {y.shape}"
            )
        if m + n < 1:
            raise InvalidInputError("partition must be non-empty")
        for name, val in zip("wxyz", (w, x, y, z)):
            object.__setattr__(self, name, val)

    @property
    def m(self) -> int:
        return self.w.shape[0]

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @classmethod
    def from_matrix(cls, a, m: int) -> "BlockPartition":
        a = as_matrix(a)
        if a.shape[0] != a.shape[1]:
            raise InvalidInputError(f"mixed inverse needs a square matrix, got {a.shape}")
        if not 0 <= m <= a.shape[0]:
            raise InvalidInputError(f"split {m} out of range for {a.shape[0]}x{a.shape[0]}")
        return cls(a[:m, :m], a[:m, m:], a[m:, :m], a[m:, m:])

    def assemble(self) -> np.ndarray:
        return np.block([[self.w, self.x], [self.y, self.z]])


def uc_inverse(a, settings: BalanceSettings | None = None, rank_tolerance="auto",
               return_decomposition: bool = False):
    """Unit-consistent generalized inverse ``diag(1/e) @ pinv(S) @ diag(1/d)``.

    With ``return_decomposition=True`` the scale decomposition used is
    returned alongside the inverse.
    """
    a = as_matrix(a)
    if a.size == 0:
        inv = np.zeros(a.shape[::-1])
        dec = scale_decompose(a, settings)
        return (inv, dec) if return_decomposition else inv
    dec = scale_decompose(a, settings)
    inv = pinv(dec.s, rank_tolerance) / dec.e[:, None] / dec.d[None, :]
    return (inv, dec) if return_decomposition else inv


def mixed_inverse(p: BlockPartition, settings: BalanceSettings | None = None,
                  rank_tolerance="auto", return_decomposition: bool = False):
    """Block inverse with UC treatment on ``w`` and MP treatment on ``z``.

    ``return_decomposition=True`` also returns the list of scale
    decompositions performed (for convergence diagnostics).
    """
    w, x, y, z = p.w, p.x, p.y, p.z
    z_p = pinv(z, rank_tolerance)
    w_u, dec_w = uc_inverse(w, settings, rank_tolerance, return_decomposition=True)

    top_left, dec_tl = uc_inverse(w - x @ z_p @ y, settings, rank_tolerance,
                                  return_decomposition=True)
    bottom_right = pinv(z - y @ w_u @ x, rank_tolerance)
    top_right = -w_u @ x @ bottom_right
    bottom_left = -z_p @ y @ top_left

    inv = np.block([[top_left, top_right], [bottom_left, bottom_right]])
    return (inv, [dec_w, dec_tl]) if return_decomposition else inv


def generalized_inverse(a, kind="mp", split: int | None = None,
                        settings: BalanceSettings | None = None,
                        rank_tolerance="auto") -> np.ndarray:
    kind = InverseKind(kind)
    if kind is InverseKind.MP:
        return pinv(a, rank_tolerance)
    if kind is InverseKind.UC:
        return uc_inverse(a, settings, rank_tolerance)
    if split is None:
        raise InvalidInputError("mixed inverse requires a split")
    return mixed_inverse(BlockPartition.from_matrix(a, split), settings, rank_tolerance)


def _positive_scales(values, size, name):
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.shape != (size,):
        raise InvalidInputError(f"{name} must have length {size}, got {values.size}")
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise InvalidInputError(f"{name} must be strictly positive")
    return values


def check_unit_consistency(kind, a, d_diag, e_diag, split=None, settings=None) -> float:
    """Max-abs deviation of ``inv(E A D^-1)`` from ``D inv(A) E^-1``.

    ``e_diag`` scales the rows of ``a`` (length m), ``d_diag`` its columns
    (length n).
    """
    a = as_matrix(a)
    d = _positive_scales(d_diag, a.shape[1], "d_diag")
    e = _positive_scales(e_diag, a.shape[0], "e_diag")
    scaled = e[:, None] * a / d[None, :]
    lhs = generalized_inverse(scaled, kind, split, settings)
    rhs = d[:, None] * generalized_inverse(a, kind, split, settings) / e[None, :]
    return float(np.max(np.abs(lhs - rhs), initial=0.0))


def _check_orthonormal(q, size, name):
    q = as_matrix(q, name)
    if q.shape != (size, size):
        raise InvalidInputError(f"{name} must be {size}x{size}, got {q.shape}")
    if np.max(np.abs(q.T @ q - np.eye(size)), initial=0.0) > 1e-10:
        raise InvalidInputError(f"{name} is not orthonormal")
    return q


def check_rotation_consistency(kind, a, u, v, split=None, settings=None) -> float:
    """Max-abs deviation of ``inv(U A V)`` from ``V^T inv(A) U^T``."""
    a = as_matrix(a)
    u = _check_orthonormal(u, a.shape[0], "u")
    v = _check_orthonormal(v, a.shape[1], "v")
    lhs = generalized_inverse(u @ a @ v, kind, split, settings)
    rhs = v.T @ generalized_inverse(a, kind, split, settings) @ u.T
    return float(np.max(np.abs(lhs - rhs), initial=0.0))
