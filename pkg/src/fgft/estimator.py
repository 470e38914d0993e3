"""Scikit-learn estimator wrapping the factored graph Fourier transform."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._givens import right_apply_columns, right_apply_columns_transposed
from .graphs import Graph, laplacian
from .jacobi import DEFAULT_TOLERANCE, truncated_jacobi
from .validation import check_adjacency


class FastGraphFourier(TransformerMixin, BaseEstimator):
    """Approximate graph Fourier transform learned from an adjacency matrix.

    fit() factors the combinatorial Laplacian of the given graph into a
    product of plane rotations; transform() then maps vertex-domain signals
    to spectral coefficients in O(n_rotations) operations per signal, and
    inverse_transform() maps them back exactly.

    Parameters
    ----------
    n_rotations : int or None, default=None
        Rotation budget.  None runs the factorization to convergence at
        `tol`, which reproduces the exact Fourier basis.
    tol : float, default=1e-12
        Relative off-diagonal tolerance used when n_rotations is None (and
        as an additional early stop otherwise).
    validate : bool, default=True
        Check the adjacency matrix invariants on fit.

    Attributes
    ----------
    transform_ : FactoredTransform
        The fitted rotation factorization, columns ordered by frequency.
    eigenvalues_ : ndarray of shape (n_vertices,)
        Estimated Laplacian eigenvalues, nondecreasing.
    n_features_in_ : int
        Number of vertices.

    Examples
    --------
    >>> est = FastGraphFourier(n_rotations=200).fit(W)  # doctest: +SKIP
    >>> coeffs = est.transform(X)                       # doctest: +SKIP
    """

    def __init__(self, n_rotations=None, tol=DEFAULT_TOLERANCE, validate=True):
        self.n_rotations = n_rotations
        self.tol = tol
        self.validate = validate

    def fit(self, X, y=None):
        """Factor the Laplacian of the graph given by adjacency matrix X.

        X may also be a Graph object.  y is ignored.
        """
        if isinstance(X, Graph):
            L = laplacian(X)
        else:
            W = np.asarray(X, dtype=float)
            if self.validate:
                W = check_adjacency(W)
            elif W.ndim != 2 or W.shape[0] != W.shape[1]:
                raise ValueError(f"adjacency matrix must be square, got {W.shape}")
            L = np.diag(W.sum(axis=1)) - W
        n = L.shape[0]
        if self.n_rotations is None:
            cap = 10 * n * (n - 1)  # generous; the tolerance stops much earlier
            self.transform_ = truncated_jacobi(L, cap, tol=self.tol)
        else:
            self.transform_ = truncated_jacobi(L, int(self.n_rotations), tol=self.tol)
        self.eigenvalues_ = self.transform_.lambda_hat
        self.n_features_in_ = n
        return self

    def _check_fitted_signals(self, X):
        if not hasattr(self, "transform_"):
            raise NotFittedError("this FastGraphFourier instance is not fitted yet")
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"signals have {X.shape[1]} features, graph has {self.n_features_in_}"
            )
        return X, single

    def transform(self, X):
        """Spectral coefficients of vertex-domain signals (rows of X)."""
        X, single = self._check_fitted_signals(X)
        Y = right_apply_columns(self.transform_.rotations, X.copy())
        Y = Y[:, self.transform_.perm]
        return Y[0] if single else Y

    def inverse_transform(self, X):
        """Vertex-domain signals from spectral coefficients (rows of X)."""
        X, single = self._check_fitted_signals(X)
        Y = np.empty_like(X)
        Y[:, self.transform_.perm] = X
        right_apply_columns_transposed(self.transform_.rotations, Y)
        return Y[0] if single else Y
