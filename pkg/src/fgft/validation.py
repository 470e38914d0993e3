"""Input validation helpers shared by the library, the estimator and the CLI."""

import numpy as np


def check_square(M, name="matrix"):
    """Coerce to a float64 2-D array and require it to be square."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    return M


def check_symmetric(M, name="matrix"):
    """Require exact (bitwise) symmetry; tolerance-based symmetry hides bugs."""
    M = check_square(M, name)
    if not np.array_equal(M, M.T):
        raise ValueError(f"{name} must be symmetric")
    return M


def check_adjacency(W, name="weights"):
    """Validate a weighted adjacency matrix: symmetric, zero diagonal, nonnegative."""
    W = check_symmetric(W, name)
    if np.any(np.diagonal(W) != 0.0):
        raise ValueError(f"{name} must have a zero diagonal (no self loops)")
    if np.any(W < 0.0):
        raise ValueError(f"{name} must be nonnegative")
    return W


def check_laplacian(M, name="laplacian"):
    """Validate a combinatorial Laplacian: symmetric, zero row sums, sign pattern."""
    M = check_symmetric(M, name)
    scale = max(float(np.abs(np.diagonal(M)).max()), 1.0) if M.size else 1.0
    if M.size and np.abs(M.sum(axis=1)).max() > 1e-12 * scale:
        raise ValueError(f"{name} rows must sum to zero")
    off = M - np.diag(np.diagonal(M))
    if M.size and off.max() > 0.0:
        raise ValueError(f"{name} off-diagonal entries must be nonpositive")
    if M.size and np.diagonal(M).min() < 0.0:
        raise ValueError(f"{name} diagonal entries must be nonnegative")
    return M


def check_vector(x, n, name="vector"):
    """Coerce to a float64 1-D array of length n."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != n:
        raise ValueError(f"{name} must be a vector of length {n}, got shape {x.shape}")
    return x
