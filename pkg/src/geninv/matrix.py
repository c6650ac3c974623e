"""Dense matrix primitives: SVD pseudoinverse, Kronecker product, transform builders."""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "InvalidInputError",
    "SvdResult",
    "as_matrix",
    "svd",
    "pinv",
    "kron",
    "rotation_embed",
    "diag_from",
    "read_matrix",
    "write_matrix",
    "format_matrix",
]


class InvalidInputError(ValueError):
    """Raised when an operation receives malformed or non-finite input."""


def as_matrix(a, name: str = "a") -> np.ndarray:
    """Return ``a`` as a 2-D float64 array, rejecting NaN/Inf."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


class SvdResult(NamedTuple):
    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray


def svd(a) -> SvdResult:
    """Thin SVD with singular values in non-increasing order."""
    a = as_matrix(a)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return SvdResult(u, s, vt)


def pinv(a, rank_tolerance="auto") -> np.ndarray:
    """Moore-Penrose pseudoinverse via the SVD.

    Parameters
    ----------
    a : array_like, shape (m, n)
    rank_tolerance : float or "auto"
        Singular values at or below this are treated as zero. ``"auto"``
        uses ``max(m, n) * s_max * eps``.

    Returns
    -------
    ndarray, shape (n, m)
    """
    a = as_matrix(a)
    m, n = a.shape
    if a.size == 0:
        return np.zeros((n, m))
    u, s, vt = svd(a)
    if isinstance(rank_tolerance, str):
        if rank_tolerance != "auto":
            raise InvalidInputError(f"unknown rank tolerance {rank_tolerance!r}")
        cutoff = max(m, n) * (s[0] if s.size else 0.0) * np.finfo(np.float64).eps
    else:
        cutoff = float(rank_tolerance)
        if not cutoff >= 0:
            raise InvalidInputError("rank_tolerance must be non-negative")
    keep = s > cutoff
    s_inv = np.zeros_like(s)
    with np.errstate(over="ignore", invalid="ignore"):
        s_inv[keep] = 1.0 / s[keep]
        out = (vt.T * s_inv) @ u.T
    if not np.all(np.isfinite(out)):
        # reciprocals of subnormal singular values do not fit in a float
        raise InvalidInputError("pseudoinverse overflows; rescale the input or raise rank_tolerance")
    return out


def kron(a, b) -> np.ndarray:
    """Kronecker product; block (i, j) of the result is ``a[i, j] * b``."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def rotation_embed(theta: float, dim: int, axes: tuple[int, int] = (0, 1)) -> np.ndarray:
    """Identity of size ``dim`` with a plane rotation by ``theta`` on ``axes``."""
    i, j = axes
    if i == j or not (0 <= i < dim and 0 <= j < dim):
        raise InvalidInputError(f"invalid rotation axes {axes} for dim {dim}")
    if not np.isfinite(theta):
        raise InvalidInputError("theta must be finite")
    r = np.eye(dim)
    c, s = np.cos(theta), np.sin(theta)
    r[i, i] = c
    r[i, j] = -s
    r[j, i] = s
    r[j, j] = c
    return r


def diag_from(values: Sequence[float]) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("diagonal values must be finite")
    return np.diag(values)


# Matrix text format: comma-separated rows, repr() floats so values round-trip.

def format_matrix(a) -> str:
    a = as_matrix(a)
    return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in a)


def write_matrix(a, path) -> None:
    text = format_matrix(a)
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_matrix(source) -> np.ndarray:
    """Parse the CSV matrix format from a path, file object, or string buffer."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return np.zeros((0, 0))
    try:
        rows = [[float(tok) for tok in ln.split(",")] for ln in lines]
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse matrix: {exc}") from None
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise InvalidInputError("ragged matrix rows")
    return as_matrix(np.array(rows))
