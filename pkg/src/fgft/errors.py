"""Per-mode approximation error measures for factored Fourier bases.

Two families of measures compare an approximate mode u_hat_k against the
exact decomposition (U, lambda):

err1
    coefficient mismatch sqrt(||delta_k - U^T u_hat_k||^2); for unit vectors
    this equals sqrt(2 (1 - u_k . u_hat_k)) once the sign is fixed, and its
    squared values average to the squared relative Frobenius error of the
    whole basis.
err2
    eigenvector residual ||L u_hat_k - lambda_k u_hat_k||; insensitive to the
    sign of u_hat_k and to rotations inside a degenerate eigenspace, which
    makes it the more meaningful measure where eigenvalues cluster.

Budget-zero baselines evaluate both with u_hat_k = delta_sigma(k), the
degree-ordered impulse basis, and normalized variants divide squared errors
by those baselines.  Surfaces collect squared values over a (k, J) grid.

All functions are pure; everything vectorizes over modes via the *_profile
helpers, which the per-mode operations slice into.
"""

from dataclasses import dataclass

import numpy as np

from .validation import check_square, check_vector

SURFACE_KINDS = ("err1", "err2", "err1_norm", "err2_norm")

#: Squared baselines below this are treated as undefined when normalizing.
BASELINE_FLOOR = 1e-14

#: Default half-width for the eigenvalue density count.
DEFAULT_DENSITY_DELTA = 0.25

FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class ErrorSurface:
    """Squared error values over a (mode, budget) grid, with per-mode context.

    values[k, i] is the squared error of mode k at rotation budget j_grid[i];
    undefined entries (normalization by a vanishing baseline) are NaN and are
    excluded from aggregation.  baseline holds the squared budget-zero errors
    and density the eigenvalue multiplicity counts f(k) at half-width delta.
    """

    kind: str
    values: np.ndarray
    j_grid: tuple
    baseline: np.ndarray
    density: np.ndarray
    delta: float = DEFAULT_DENSITY_DELTA

    def __post_init__(self):
        if self.kind not in SURFACE_KINDS:
            raise ValueError(f"unknown surface kind {self.kind!r}")
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "j_grid", tuple(int(j) for j in self.j_grid))
        object.__setattr__(self, "baseline", np.asarray(self.baseline, dtype=float))
        object.__setattr__(self, "density", np.asarray(self.density))
        if values.shape != (self.baseline.shape[0], len(self.j_grid)):
            raise ValueError("surface shape disagrees with baseline and grid")
        with np.errstate(invalid="ignore"):
            if np.any(values < 0):
                raise ValueError("squared errors cannot be negative")

    @property
    def n(self):
        return self.values.shape[0]


def orient(u_hat_k, u_k):
    """Fix the sign of u_hat_k so its inner product with u_k is nonnegative.

    An exactly orthogonal pair keeps the + sign.
    """
    u_hat_k = np.asarray(u_hat_k, dtype=float)
    u_k = check_vector(u_k, u_hat_k.shape[0], "reference mode")
    return -u_hat_k if float(u_k @ u_hat_k) < 0.0 else u_hat_k


def orient_columns(U, U_hat):
    """Column-wise orient: flip columns of U_hat against the same column of U."""
    dots = np.einsum("ij,ij->j", U, U_hat)
    return U_hat * np.where(dots < 0.0, -1.0, 1.0)


def err1_sq_profile(U, U_hat):
    """Squared coefficient-mismatch errors for all modes at once.

    Columns of U_hat must already be oriented against U.
    """
    E = U.T @ U_hat
    return (E * E).sum(axis=0) - 2.0 * np.diagonal(E) + 1.0


def err2_sq_profile(L, lambdas, U_hat):
    """Squared eigenvector residuals for all modes at once (sign-free)."""
    R = L @ U_hat - U_hat * lambdas
    return (R * R).sum(axis=0)


def _check_mode(k, n):
    if not 0 <= k < n:
        raise IndexError(f"mode index {k} out of range for n={n}")


def err1(exact, u_hat_k, k):
    """Coefficient mismatch of one oriented approximate mode.

    exact is an EigenDecomposition; u_hat_k must be unit-norm and oriented
    against column k (see orient).
    """
    U = exact.eigenvectors
    _check_mode(k, U.shape[0])
    u_hat_k = check_vector(u_hat_k, U.shape[0], "approximate mode")
    d = U.T @ u_hat_k
    d[k] -= 1.0
    return float(np.sqrt(d @ d))


def err1_baseline(exact, sigma, k):
    """err1 of the budget-zero basis: the impulse at the k-th vertex by degree."""
    _check_mode(k, exact.n)
    u_hat = np.zeros(exact.n)
    u_hat[int(sigma[k])] = 1.0
    return err1(exact, orient(u_hat, exact.eigenvectors[:, k]), k)


def err2(lambdas, L, u_hat_k, k):
    """Eigenvector residual ||L u_hat_k - lambda_k u_hat_k|| with the exact
    lambda_k; the sign of u_hat_k does not matter."""
    L = check_square(L, "laplacian")
    _check_mode(k, L.shape[0])
    u_hat_k = check_vector(u_hat_k, L.shape[0], "approximate mode")
    r = L @ u_hat_k - lambdas[k] * u_hat_k
    return float(np.sqrt(r @ r))


def err2_spectral(exact, u_hat_k, k):
    """err2 evaluated through the exact eigenbasis instead of through L.

    Expands u_hat_k on the exact modes and weights each coefficient by its
    eigenvalue gap; used as a cross-check of err2, not as the production path.
    """
    _check_mode(k, exact.n)
    u_hat_k = check_vector(u_hat_k, exact.n, "approximate mode")
    coeffs = exact.eigenvectors.T @ u_hat_k
    gaps = exact.eigenvalues - exact.eigenvalues[k]
    return float(np.sqrt(((gaps * coeffs) ** 2).sum()))


def err2_baseline(L, lambdas, sigma, k):
    """err2 of the budget-zero basis (impulse at the k-th vertex by degree)."""
    L = check_square(L, "laplacian")
    _check_mode(k, L.shape[0])
    u_hat = np.zeros(L.shape[0])
    u_hat[int(sigma[k])] = 1.0
    return err2(lambdas, L, u_hat, k)


def normalize_surface(raw):
    """Divide squared errors by squared budget-zero baselines, per mode.

    Entries whose baseline is below BASELINE_FLOOR become NaN rather than
    infinities; aggregation skips them.
    """
    if raw.kind.endswith("_norm"):
        raise ValueError(f"surface of kind {raw.kind!r} is already normalized")
    defined = raw.baseline >= BASELINE_FLOOR
    base = np.where(defined, raw.baseline, 1.0)
    values = raw.values / base[:, None]
    values[~defined, :] = np.nan
    return ErrorSurface(
        kind=raw.kind + "_norm",
        values=values,
        j_grid=raw.j_grid,
        baseline=raw.baseline,
        density=raw.density,
        delta=raw.delta,
    )


def eigenvalue_density(lambdas, delta):
    """Count of eigenvalues within [lambda_k - delta, lambda_k + delta], per k.

    Both interval ends are closed and are computed once, so the counts match
    a double-loop comparison against the same bounds exactly.  Two binary
    searches per mode on the sorted input.
    """
    if delta <= 0:
        raise ValueError("density half-width must be positive")
    lam = np.asarray(lambdas, dtype=float)
    if np.any(np.diff(lam) < 0):
        raise ValueError("eigenvalues must be sorted")
    lo = np.searchsorted(lam, lam - delta, side="left")
    hi = np.searchsorted(lam, lam + delta, side="right")
    return (hi - lo).astype(np.int64)


def global_error(exact, U_hat):
    """Relative Frobenius error of a whole basis against the exact one.

    Columns of U_hat must be oriented; the squared result times n equals the
    sum of the squared per-mode err1 values.
    """
    U = exact.eigenvectors
    U_hat = check_square(U_hat, "approximate basis")
    if U_hat.shape != U.shape:
        raise ValueError("basis dimensions disagree")
    return float(np.linalg.norm(U - U_hat) / np.linalg.norm(U))


def save_surface_csv(surface, path):
    """Heatmap CSV: header row "k\\J,<J1>,...", one row per mode (k is 1-based).

    Undefined entries serialize as "nan".
    """
    lines = ["k\\J," + ",".join(str(j) for j in surface.j_grid)]
    for k in range(surface.n):
        lines.append(
            f"{k + 1}," + ",".join(FLOAT_FORMAT % v for v in surface.values[k])
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def save_vectors_csv(columns, path):
    """Companion CSV for per-mode vectors: header "k,<name>,...", 1-based k.

    columns is a mapping of column name to a length-n vector.
    """
    names = list(columns)
    vectors = [np.asarray(columns[name]) for name in names]
    n = vectors[0].shape[0]
    lines = ["k," + ",".join(names)]
    for k in range(n):
        cells = [
            str(int(v[k])) if np.issubdtype(v.dtype, np.integer) else FLOAT_FORMAT % v[k]
            for v in vectors
        ]
        lines.append(f"{k + 1}," + ",".join(cells))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
