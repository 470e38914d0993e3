"""Plane (Givens) rotations and the low-level kernels that apply them.

A rotation acts on coordinates (p, q) only; as a matrix it is the identity
except for entries [p,p]=c, [p,q]=-s, [q,p]=s, [q,q]=c.  Applying one to a
vector costs 4 multiplications and 2 additions, which is what makes a
product of J of them a fast transform.
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class GivensRotation:
    """Rotation by theta in the (p, q) coordinate plane, with cached cos/sin."""

    p: int
    q: int
    theta: float
    c: float
    s: float

    def __post_init__(self):
        if not 0 <= self.p < self.q:
            raise ValueError(f"need 0 <= p < q, got p={self.p}, q={self.q}")
        if abs(self.c * self.c + self.s * self.s - 1.0) > 1e-14:
            raise ValueError("cos/sin pair is not on the unit circle")

    @classmethod
    def from_angle(cls, p, q, theta):
        theta = float(theta) % (2.0 * math.pi)
        return cls(int(p), int(q), theta, math.cos(theta), math.sin(theta))


def rotate_sym_inplace(A, p, q, c, s):
    """Conjugate a symmetric matrix by the rotation, touching rows/cols p, q only.

    The two float paths to the (p, q) / (q, p) pair can disagree in the last
    ulp, so the entry is copied across to keep the matrix exactly symmetric.
    """
    rp = A[p, :].copy()
    A[p, :] = c * rp + s * A[q, :]
    A[q, :] = c * A[q, :] - s * rp
    cp = A[:, p].copy()
    A[:, p] = c * cp + s * A[:, q]
    A[:, q] = c * A[:, q] - s * cp
    A[q, p] = A[p, q]


def apply_transposed(rotations, y):
    """In-place y <- R_J^T ... R_1^T y; 4 multiplies + 2 additions per rotation."""
    for g in rotations:
        p, q, c, s = g.p, g.q, g.c, g.s
        yp = y[p]
        yq = y[q]
        y[p] = c * yp + s * yq
        y[q] = c * yq - s * yp
    return y


def apply_direct(rotations, y):
    """In-place y <- R_1 ... R_J y (inverse order of apply_transposed)."""
    for g in reversed(rotations):
        p, q, c, s = g.p, g.q, g.c, g.s
        yp = y[p]
        yq = y[q]
        y[p] = c * yp - s * yq
        y[q] = c * yq + s * yp
    return y


def right_apply_columns(rotations, Y):
    """In-place Y <- Y R_1 ... R_J, rotating column pairs of a 2-D array."""
    for g in rotations:
        p, q, c, s = g.p, g.q, g.c, g.s
        colp = Y[:, p].copy()
        Y[:, p] = c * colp + s * Y[:, q]
        Y[:, q] = c * Y[:, q] - s * colp
    return Y


def right_apply_columns_transposed(rotations, Y):
    """In-place Y <- Y R_J^T ... R_1^T."""
    for g in reversed(rotations):
        p, q, c, s = g.p, g.q, g.c, g.s
        colp = Y[:, p].copy()
        Y[:, p] = c * colp - s * Y[:, q]
        Y[:, q] = c * Y[:, q] + s * colp
    return Y
