"""Greedy plane-rotation diagonalization of symmetric matrices.

Each step picks the largest off-diagonal entry (p, q) in magnitude, rotates
the (p, q) plane by the angle that zeroes it, and conjugates the working
matrix.  Stopping after a prescribed budget of J rotations gives a factored
approximate eigenbasis (truncated_jacobi); iterating to a tolerance gives the
exact decomposition used as ground truth everywhere else (full_jacobi).

Every step removes exactly twice the squared pivot from the off-diagonal
mass, so the off-diagonal norm decreases monotonically and the trace and
Frobenius norm are conserved.

Pivot search keeps per-row maxima that are patched incrementally after each
conjugation: O(n^2) once, O(n) per rotation, so a J-rotation run costs
O(n^2 + nJ) instead of the O(n^2 J) of repeated full scans.  Ties are broken
toward the lexicographically smallest (p, q) so runs are reproducible.

The working matrix is dense: conjugations fill in zeros quickly, so sparse
storage buys nothing at the few-hundred-vertex scale this targets.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._givens import GivensRotation, rotate_sym_inplace
from .transform import FactoredTransform
from .validation import check_square, check_symmetric

#: Convergence tolerance (relative to the Frobenius norm) for ground truth.
DEFAULT_TOLERANCE = 1e-12

#: Pivot steps allowed per off-diagonal entry before giving up.
ITERATION_CAP_FACTOR = 20


class AlreadyDiagonalError(ValueError):
    """Raised when a rotation is requested but no off-diagonal mass remains."""


class ConvergenceError(RuntimeError):
    """Raised when the iteration cap is exceeded; should not happen for
    symmetric input."""


@dataclass(frozen=True)
class EigenDecomposition:
    """Orthonormal eigenvectors (columns) paired with sorted eigenvalues.

    Column signs follow a fixed convention: the entry of largest magnitude in
    each column is positive, ties broken by the lowest row index.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        U = np.asarray(self.eigenvectors, dtype=float)
        lam.flags.writeable = False
        U.flags.writeable = False
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", U)
        n = lam.shape[0]
        if U.shape != (n, n):
            raise ValueError("eigenvector matrix shape disagrees with eigenvalues")
        if np.any(np.diff(lam) < 0):
            raise ValueError("eigenvalues must be sorted nondecreasing")

    @property
    def n(self):
        return self.eigenvalues.shape[0]


def offdiag_norm_sq(M):
    """Sum of squared off-diagonal entries (the quantity each rotation shrinks)."""
    M = check_square(M)
    sq = M * M
    np.fill_diagonal(sq, 0.0)
    return float(sq.sum())


def _plane_rotation(A, p, q):
    # Half the two-argument arctangent of (a_qq - a_pp, 2 a_pq), plus pi/4,
    # folded into [0, pi/2): the branch that annihilates entry (p, q) without
    # dividing by a possibly tiny pivot.
    raw = 0.5 * math.atan2(A[q, q] - A[p, p], 2.0 * A[p, q]) + 0.25 * math.pi
    theta = raw % (0.5 * math.pi)
    return GivensRotation.from_angle(p, q, theta)


def solve_subproblem(M):
    """Best single rotation for a symmetric matrix.

    Returns the rotation at a maximal-magnitude off-diagonal entry (smallest
    (p, q) on ties) whose angle zeroes that entry under conjugation.  Raises
    AlreadyDiagonalError when there is nothing to rotate.
    """
    M = check_symmetric(M)
    n = M.shape[0]
    mag = np.abs(M)
    mag[np.tril_indices(n)] = -1.0
    flat = int(np.argmax(mag))
    p, q = divmod(flat, n)
    if n < 2 or mag[p, q] <= 0.0:
        raise AlreadyDiagonalError("matrix has no nonzero off-diagonal entry")
    return _plane_rotation(M, p, q)


def conjugate(M, g):
    """Rotate a symmetric matrix: returns G^T M G, touching only rows/cols p, q."""
    M = check_symmetric(M)
    if g.q >= M.shape[0]:
        raise ValueError(
            f"rotation plane ({g.p}, {g.q}) exceeds matrix dimension {M.shape[0]}"
        )
    out = M.copy()
    rotate_sym_inplace(out, g.p, g.q, g.c, g.s)
    return out


class _PivotTracker:
    """Per-row off-diagonal maxima, patched in O(n) after each conjugation.

    row_max_col[r] is the smallest column index attaining the largest
    off-diagonal magnitude in row r; together with symmetry that makes the
    overall argmax the lexicographically smallest maximal pair.
    """

    def __init__(self, A):
        self.A = A
        n = A.shape[0]
        mag = np.abs(A)
        mag[np.diag_indices(n)] = -1.0
        self.row_max_col = np.argmax(mag, axis=1)
        self.row_max_val = mag[np.arange(n), self.row_max_col]
        self._row = np.empty(n)
        self._col = np.empty(n)
        self._mask = np.empty(n, dtype=bool)
        self._tie = np.empty(n, dtype=bool)

    def best(self):
        """Pivot (p, q) with p < q at the global off-diagonal argmax, or None."""
        r = int(self.row_max_val.argmax())
        v = float(self.row_max_val[r])
        if v <= 0.0:
            return None
        c = int(self.row_max_col[r])
        return (r, c, v) if r < c else (c, r, v)

    def _rescan(self, r):
        row = self._row
        np.absolute(self.A[r], out=row)
        row[r] = -1.0
        col = row.argmax()
        self.row_max_col[r] = col
        self.row_max_val[r] = row[col]

    def refresh(self, p, q):
        """Patch the index after rows/columns p and q changed."""
        self._rescan(p)
        self._rescan(q)
        val, ind = self.row_max_val, self.row_max_col
        newmag, better, tie = self._col, self._mask, self._tie
        for col in (p, q):
            np.absolute(self.A[:, col], out=newmag)
            # a changed entry that now leads its row, or ties at a smaller column
            np.greater(newmag, val, out=better)
            np.equal(newmag, val, out=tie)
            tie &= ind > col
            better |= tie
            better[p] = better[q] = better[col] = False
            val[better] = newmag[better]
            ind[better] = col
            # rows whose tracked maximum sat at this column and shrank
            np.equal(ind, col, out=tie)
            tie &= newmag < val
            tie[p] = tie[q] = tie[col] = False
            for r in tie.nonzero()[0]:
                self._rescan(r)


def _snapshot(A, rotations, j_requested):
    lam_raw = np.diagonal(A).copy()
    perm = np.argsort(lam_raw, kind="stable")
    return FactoredTransform(
        n=A.shape[0],
        rotations=tuple(rotations),
        perm=perm,
        lambda_hat=lam_raw[perm],
        j_requested=int(j_requested),
        j_actual=len(rotations),
    )


def truncated_jacobi_snapshots(L, j_grid, tol=None):
    """One factorization pass capturing the transform at several budgets.

    j_grid must be strictly increasing and nonnegative.  Because rotation j
    depends only on rotations 1..j-1, the snapshot at budget J is identical
    to an independent truncated_jacobi(L, J) run.
    """
    L = check_symmetric(L, "matrix")
    j_grid = [int(j) for j in j_grid]
    if not j_grid or any(b <= a for a, b in zip(j_grid, j_grid[1:])) or j_grid[0] < 0:
        raise ValueError("snapshot grid must be strictly increasing and nonnegative")
    A = L.copy()
    tracker = _PivotTracker(A)
    stop_sq = None if tol is None else tol * tol * float((L * L).sum())
    n = L.shape[0]
    pair_count = n * (n - 1)
    rotations = []
    snaps = []
    grid_pos = 0
    for step in range(j_grid[-1]):
        while grid_pos < len(j_grid) and j_grid[grid_pos] == step:
            snaps.append(_snapshot(A, rotations, j_grid[grid_pos]))
            grid_pos += 1
        pivot = tracker.best()
        if pivot is None:
            break  # exactly diagonal: stop rather than pad with identity rotations
        p, q, v = pivot
        if stop_sq is not None and pair_count * v * v <= stop_sq:
            break  # off-diagonal mass provably below tolerance
        g = _plane_rotation(A, p, q)
        rotate_sym_inplace(A, p, q, g.c, g.s)
        tracker.refresh(p, q)
        rotations.append(g)
    while grid_pos < len(j_grid):
        snaps.append(_snapshot(A, rotations, j_grid[grid_pos]))
        grid_pos += 1
    return snaps


def truncated_jacobi(L, J, tol=None):
    """Factor L into at most J rotations plus estimated eigenvalues.

    Parameters
    ----------
    L : symmetric matrix to diagonalize approximately
    J : rotation budget (J = 0 yields a pure reordering by the diagonal)
    tol : optional relative tolerance; when given, iteration also stops once
        the off-diagonal norm falls below tol * ||L||_F, which reproduces the
        exact decomposition when J is large enough

    Returns a FactoredTransform whose columns are ordered by estimated
    eigenvalue (nondecreasing, stable on ties).
    """
    if J < 0:
        raise ValueError("rotation budget must be nonnegative")
    return truncated_jacobi_snapshots(L, [int(J)], tol=tol)[0]


def full_jacobi(L, tol=DEFAULT_TOLERANCE):
    """Diagonalize to convergence; the ground-truth transform for error studies.

    Stops once the off-diagonal norm is at most tol * ||L||_F, then sorts the
    eigenvalues (stable), reorders the accumulated eigenvector columns and
    applies the sign convention.  Raises ConvergenceError if the pivot count
    exceeds 20 per off-diagonal pair, which symmetric input never triggers.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    L = check_symmetric(L, "matrix")
    n = L.shape[0]
    A = L.copy()
    tracker = _PivotTracker(A)
    stop_sq = tol * tol * float((L * L).sum())
    pair_count = n * (n - 1)
    cap = ITERATION_CAP_FACTOR * (pair_count // 2)
    U = np.eye(n)
    steps = 0
    while True:
        pivot = tracker.best()
        if pivot is None:
            break
        p, q, v = pivot
        if pair_count * v * v <= stop_sq:
            break
        if steps >= cap:
            raise ConvergenceError(
                f"no convergence to tol={tol:g} within {cap} rotations"
            )
        g = _plane_rotation(A, p, q)
        rotate_sym_inplace(A, p, q, g.c, g.s)
        tracker.refresh(p, q)
        colp = U[:, p].copy()
        U[:, p] = g.c * colp + g.s * U[:, q]
        U[:, q] = g.c * U[:, q] - g.s * colp
        steps += 1
    lam_raw = np.diagonal(A).copy()
    order = np.argsort(lam_raw, kind="stable")
    U = U[:, order]
    anchor = np.argmax(np.abs(U), axis=0)  # first occurrence = lowest row
    signs = np.where(U[anchor, np.arange(n)] < 0.0, -1.0, 1.0)
    return EigenDecomposition(lam_raw[order], U * signs)
