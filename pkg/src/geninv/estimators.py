"""scikit-learn style wrappers around the balancing and inverse routines.

A fitted :class:`GeneralizedInverse` maps target vectors (rows of ``Y``) to
solutions ``x = A^- y``; ``inverse_transform`` maps solutions back through
``A``. :class:`MatrixBalancer` learns row/column scales from one matrix and
applies them to others of the same shape.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .balance import BalanceSettings, scale_decompose
from .inverses import BlockPartition, InverseKind, mixed_inverse, uc_inverse
from .matrix import pinv

__all__ = ["GeneralizedInverse", "MatrixBalancer"]


class MatrixBalancer(TransformerMixin, BaseEstimator):
    """Learn ``A = diag(d) S diag(e)``; ``transform`` removes the learned scales."""

    def __init__(self, tol=1e-22, max_iter=1000, zero_threshold=0.0):
        self.tol = tol
        self.max_iter = max_iter
        self.zero_threshold = zero_threshold

    def _settings(self):
        return BalanceSettings(self.tol, self.max_iter, self.zero_threshold)

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        dec = scale_decompose(X, self._settings())
        self.row_scale_ = dec.d
        self.col_scale_ = dec.e
        self.core_ = dec.s
        self.converged_ = dec.converged
        self.n_iter_ = dec.iterations
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "core_")
        X = check_array(X, dtype=np.float64)
        self._check_shape(X)
        return X / self.row_scale_[:, None] / self.col_scale_[None, :]

    def inverse_transform(self, X):
        check_is_fitted(self, "core_")
        X = check_array(X, dtype=np.float64)
        self._check_shape(X)
        return self.row_scale_[:, None] * X * self.col_scale_[None, :]

    def _check_shape(self, X):
        expected = (self.row_scale_.size, self.col_scale_.size)
        if X.shape != expected:
            raise ValueError(f"X has shape {X.shape}; balancer was fitted on {expected}")


class GeneralizedInverse(BaseEstimator):
    """Fit a generalized inverse of a matrix and apply it to target vectors.

    Parameters
    ----------
    kind : {"mp", "uc", "mixed"}
        Moore-Penrose, unit-consistent, or block-mixed inverse.
    split : int, optional
        Number of leading unit-consistent variables; required for ``"mixed"``.
    rank_tolerance : float or "auto"
        Singular-value cutoff passed to every pseudoinverse.
    tol, max_iter, zero_threshold
        Balancing controls for the unit-consistent parts.
    """

    def __init__(self, kind="mp", split=None, rank_tolerance="auto", tol=1e-22,
                 max_iter=1000, zero_threshold=0.0):
        self.kind = kind
        self.split = split
        self.rank_tolerance = rank_tolerance
        self.tol = tol
        self.max_iter = max_iter
        self.zero_threshold = zero_threshold

    def fit(self, A, y=None):
        A = check_array(A, dtype=np.float64)
        kind = InverseKind(self.kind)
        settings = BalanceSettings(self.tol, self.max_iter, self.zero_threshold)
        self.decompositions_ = []
        if kind is InverseKind.MP:
            self.inverse_ = pinv(A, self.rank_tolerance)
        elif kind is InverseKind.UC:
            self.inverse_, dec = uc_inverse(A, settings, self.rank_tolerance,
                                            return_decomposition=True)
            self.decompositions_ = [dec]
        else:
            if self.split is None:
                raise ValueError("kind='mixed' requires split")
            part = BlockPartition.from_matrix(A, int(self.split))
            self.inverse_, self.decompositions_ = mixed_inverse(
                part, settings, self.rank_tolerance, return_decomposition=True)
        self.matrix_ = A
        self.n_features_in_ = A.shape[0]
        return self

    def transform(self, Y):
        """Solutions for each row of ``Y`` (shape ``(n_samples, A.shape[0])``)."""
        check_is_fitted(self, "inverse_")
        Y = check_array(Y, dtype=np.float64)
        if Y.shape[1] != self.inverse_.shape[1]:
            raise ValueError(f"Y has {Y.shape[1]} columns, expected {self.inverse_.shape[1]}")
        return Y @ self.inverse_.T

    def inverse_transform(self, X):
        check_is_fitted(self, "inverse_")
        X = check_array(X, dtype=np.float64)
        return X @ self.matrix_.T
