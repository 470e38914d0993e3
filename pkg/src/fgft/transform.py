"""Factored orthogonal transforms: an ordered rotation product plus a column
permutation, applied to signals in O(J) elementary operations.

The dense matrix it represents is U_hat = R_1 ... R_J P, where P reorders
columns so that the estimated eigenvalues are nondecreasing; column k is then
the k-th approximate Fourier mode.  Forward analysis therefore reads
U_hat^T x = P^T R_J^T ... R_1^T x: rotations first, then an index gather.

All objects here are immutable after construction; analysis and synthesis are
pure functions, so concurrent application to many signals is safe.
"""

from dataclasses import dataclass

import numpy as np

from ._givens import (
    GivensRotation,
    apply_direct,
    apply_transposed,
    right_apply_columns,
)
from .validation import check_square, check_vector

FLOAT_FORMAT = "%.17g"

VERTEX = "vertex"
SPECTRAL = "spectral"


@dataclass(frozen=True)
class Signal:
    """A vector tagged with the domain it lives in (vertex or spectral)."""

    values: np.ndarray
    domain: str = VERTEX

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.ndim != 1:
            raise ValueError("signal must be one-dimensional")
        if self.domain not in (VERTEX, SPECTRAL):
            raise ValueError(f"unknown signal domain {self.domain!r}")


@dataclass(frozen=True)
class FactoredTransform:
    """Orthogonal transform factored into plane rotations.

    Fields
    ------
    n : dimension
    rotations : tuple of GivensRotation, applied first-to-last
    perm : column reordering making lambda_hat nondecreasing
    lambda_hat : estimated eigenvalues, sorted nondecreasing
    j_requested / j_actual : rotation budget vs. rotations actually used
        (fewer only when the working matrix became exactly diagonal early)
    """

    n: int
    rotations: tuple
    perm: np.ndarray
    lambda_hat: np.ndarray
    j_requested: int
    j_actual: int

    def __post_init__(self):
        object.__setattr__(self, "rotations", tuple(self.rotations))
        perm = np.asarray(self.perm, dtype=np.intp)
        lam = np.asarray(self.lambda_hat, dtype=float)
        perm.flags.writeable = False
        lam.flags.writeable = False
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "lambda_hat", lam)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise ValueError("perm is not a permutation of 0..n-1")
        if lam.shape != (self.n,) or np.any(np.diff(lam) < 0):
            raise ValueError("lambda_hat must be sorted nondecreasing")
        if self.j_actual != len(self.rotations):
            raise ValueError("j_actual disagrees with the rotation list")
        for g in self.rotations:
            if g.q >= self.n:
                raise ValueError("rotation index exceeds dimension")


def _coerce_input(t, x, expected_domain):
    if isinstance(x, Signal):
        if x.domain != expected_domain:
            raise ValueError(f"expected a {expected_domain}-domain signal, got {x.domain}")
        return check_vector(x.values, t.n, "signal"), True
    return check_vector(x, t.n, "signal"), False


def analyze(t, x):
    """Forward transform of a vertex-domain signal into spectral coefficients.

    Costs 6 elementary operations per rotation plus one index gather; agrees
    with to_dense(t).T @ x to within roundoff.
    """
    values, wrap = _coerce_input(t, x, VERTEX)
    y = apply_transposed(t.rotations, values.copy())
    out = y[t.perm]
    return Signal(out, SPECTRAL) if wrap else out


def synthesize(t, xt):
    """Inverse of analyze: spectral coefficients back to the vertex domain."""
    values, wrap = _coerce_input(t, xt, SPECTRAL)
    y = np.empty_like(values)
    y[t.perm] = values
    apply_direct(t.rotations, y)
    return Signal(y, VERTEX) if wrap else y


def to_dense(t):
    """Materialize the transform as an n x n orthonormal matrix.

    Column k is the k-th approximate mode, so extraction of a single mode is
    a column slice.
    """
    U = np.eye(t.n)
    right_apply_columns(t.rotations, U)
    return U[:, t.perm]


def approx_laplacian_residual(t, L):
    """Frobenius mismatch between L and its factored diagonalization.

    Equals the off-diagonal norm left in the working matrix after the last
    rotation: the diagonal part is captured exactly by lambda_hat.
    """
    L = check_square(L, "laplacian")
    if L.shape[0] != t.n:
        raise ValueError(f"dimension mismatch: transform has n={t.n}, matrix {L.shape[0]}")
    U = to_dense(t)
    return float(np.linalg.norm(L - (U * t.lambda_hat) @ U.T))


def save_transform(t, path):
    """Text serialization: "n J" header, J lines "p q theta" (1-based, 17
    significant digits), the permutation, then lambda_hat.  Round-trips to
    identical bits via load_transform."""
    lines = [f"{t.n} {t.j_actual}"]
    for g in t.rotations:
        lines.append(f"{g.p + 1} {g.q + 1} {FLOAT_FORMAT % g.theta}")
    lines.append(" ".join(str(int(i) + 1) for i in t.perm))
    lines.append(" ".join(FLOAT_FORMAT % v for v in t.lambda_hat))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_transform(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: malformed header, expected 'n J'")
        n, j = int(header[0]), int(header[1])
        rotations = []
        for _ in range(j):
            fields = fh.readline().split()
            if len(fields) != 3:
                raise ValueError(f"{path}: malformed rotation line")
            rotations.append(
                GivensRotation.from_angle(int(fields[0]) - 1, int(fields[1]) - 1, float(fields[2]))
            )
        perm = np.array([int(v) - 1 for v in fh.readline().split()], dtype=np.intp)
        lam = np.array([float(v) for v in fh.readline().split()])
    return FactoredTransform(n, tuple(rotations), perm, lam, j, j)


def save_signal(sig, path):
    """Single-column CSV with header "n=<n> domain=<vertex|spectral>"."""
    lines = [f"n={sig.values.shape[0]} domain={sig.domain}"]
    lines.extend(FLOAT_FORMAT % v for v in sig.values)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_signal(path):
    with open(path) as fh:
        header = fh.readline().split()
        try:
            n = int(header[0].removeprefix("n="))
            domain = header[1].removeprefix("domain=")
        except (IndexError, ValueError):
            raise ValueError(f"{path}: malformed signal header") from None
        values = np.array([float(line) for line in fh if line.strip()])
    if values.shape[0] != n:
        raise ValueError(f"{path}: header says n={n} but found {values.shape[0]} values")
    return Signal(values, domain)
