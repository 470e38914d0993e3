import numpy as np
import pytest
from numpy.testing import assert_allclose

from fgft import (
    FactoredTransform,
    GivensRotation,
    RngSpec,
    Signal,
    analyze,
    approx_laplacian_residual,
    erdos_renyi,
    laplacian,
    load_signal,
    load_transform,
    offdiag_norm_sq,
    save_signal,
    save_transform,
    synthesize,
    to_dense,
    truncated_jacobi,
)
from fgft._givens import apply_transposed

K2 = np.array([[1.0, -1.0], [-1.0, 1.0]])


def make_transform(n=32, J=150, seed=0, p=0.25):
    return truncated_jacobi(laplacian(erdos_renyi(n, p, RngSpec(seed))), J)


def test_analyze_empty_product_is_identity():
    t = FactoredTransform(3, (), np.arange(3), np.zeros(3), 0, 0)
    x = np.array([1.0, 2.0, 3.0])
    assert_allclose(analyze(t, x), x, rtol=0, atol=0)
    assert_allclose(synthesize(t, x), x, rtol=0, atol=0)


def test_analyze_k2_kernel_vector_concentrates_energy():
    t = truncated_jacobi(K2, 1)
    x = np.array([1.0, 1.0]) / np.sqrt(2.0)
    coeffs = analyze(t, x)
    dense = to_dense(t).T @ x
    assert_allclose(coeffs, dense, atol=1e-15)
    assert abs(abs(coeffs[0]) - 1.0) <= 1e-12  # all energy at lambda_hat = 0
    assert abs(coeffs[1]) <= 1e-12


def test_analyze_preserves_energy():
    t = make_transform()
    rng = np.random.default_rng(8)
    for _ in range(10):
        x = rng.standard_normal(t.n)
        assert_allclose(np.linalg.norm(analyze(t, x)), np.linalg.norm(x), rtol=1e-12)


def test_analyze_matches_dense_transpose():
    t = make_transform(n=64, J=500, seed=3)
    dense = to_dense(t)
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = rng.standard_normal(64)
        assert np.abs(analyze(t, x) - dense.T @ x).max() <= 1e-12 * np.linalg.norm(x)


def test_analyze_rejects_bad_input():
    t = make_transform(n=8, J=10)
    with pytest.raises(ValueError):
        analyze(t, np.ones(9))
    with pytest.raises(ValueError):
        analyze(t, Signal(np.ones(8), "spectral"))
    with pytest.raises(ValueError):
        synthesize(t, Signal(np.ones(8), "vertex"))


def test_signal_domain_round_trip():
    t = make_transform(n=8, J=12, seed=2, p=0.5)
    sig = Signal(np.arange(8.0), "vertex")
    spec = analyze(t, sig)
    assert spec.domain == "spectral"
    back = synthesize(t, spec)
    assert back.domain == "vertex"
    assert_allclose(back.values, sig.values, rtol=1e-12, atol=1e-14)


def test_synthesize_round_trip_many_vectors():
    t = make_transform(n=64, J=400, seed=5)
    rng = np.random.default_rng(0)
    X = rng.standard_normal((100, 64))
    worst = max(
        np.abs(synthesize(t, analyze(t, x)) - x).max() / np.linalg.norm(x) for x in X
    )
    assert worst <= 1e-12


def test_synthesize_impulse_gives_dense_column():
    t = make_transform(n=16, J=60, seed=7, p=0.4)
    dense = to_dense(t)
    for k in (0, 7, 15):
        impulse = np.zeros(16)
        impulse[k] = 1.0
        assert_allclose(synthesize(t, impulse), dense[:, k], atol=1e-14)


def test_to_dense_single_rotation_matches_matrix():
    g = GivensRotation.from_angle(0, 1, np.pi / 4)
    t = FactoredTransform(2, (g,), np.arange(2), np.zeros(2), 1, 1)
    c, s = g.c, g.s
    assert_allclose(to_dense(t), [[c, -s], [s, c]], rtol=0, atol=0)


def test_to_dense_orthonormal_at_scale():
    t = make_transform(n=128, J=1500, seed=1, p=0.08)
    U = to_dense(t)
    assert np.abs(U.T @ U - np.eye(128)).max() <= 1e-12


def test_to_dense_orthonormal_n256():
    t = make_transform(n=256, J=2000, seed=6, p=0.05)
    U = to_dense(t)
    assert np.abs(U.T @ U - np.eye(256)).max() <= 1e-12


def test_apply_costs_six_operations_per_rotation():
    class CountingFloat:
        __slots__ = ("value",)
        ops = 0

        def __init__(self, value):
            self.value = float(value)

        def _binary(self, other, fn):
            CountingFloat.ops += 1
            other = other.value if isinstance(other, CountingFloat) else other
            return CountingFloat(fn(self.value, other))

        def __mul__(self, other):
            return self._binary(other, lambda a, b: a * b)

        __rmul__ = __mul__

        def __add__(self, other):
            return self._binary(other, lambda a, b: a + b)

        __radd__ = __add__

        def __sub__(self, other):
            return self._binary(other, lambda a, b: a - b)

        def __rsub__(self, other):
            return self._binary(other, lambda a, b: b - a)

    t = make_transform(n=16, J=37, seed=4, p=0.5)
    y = [CountingFloat(v) for v in np.arange(16.0)]
    CountingFloat.ops = 0
    apply_transposed(t.rotations, y)
    assert CountingFloat.ops == 6 * t.j_actual


def test_residual_zero_when_fully_diagonalized():
    t = truncated_jacobi(K2, 1)
    assert approx_laplacian_residual(t, K2) <= 1e-12


def test_residual_at_zero_budget_is_offdiagonal_mass():
    L = laplacian(erdos_renyi(16, 0.4, RngSpec(9)))
    t = truncated_jacobi(L, 0)
    assert_allclose(
        approx_laplacian_residual(t, L), np.sqrt(offdiag_norm_sq(L)), rtol=1e-12
    )


def test_residual_equals_remaining_offdiagonal_norm():
    L = laplacian(erdos_renyi(24, 0.3, RngSpec(15)))
    for J in (5, 40, 120):
        t = truncated_jacobi(L, J)
        U = to_dense(t)
        remaining = offdiag_norm_sq(U.T @ L @ U)
        assert_allclose(
            approx_laplacian_residual(t, L), np.sqrt(remaining), rtol=1e-10
        )


def test_residual_nonincreasing_in_budget():
    L = laplacian(erdos_renyi(32, 0.25, RngSpec(23)))
    residuals = [approx_laplacian_residual(truncated_jacobi(L, J), L) for J in range(0, 120, 10)]
    assert all(b <= a + 1e-12 for a, b in zip(residuals, residuals[1:]))


def test_residual_dimension_mismatch():
    t = make_transform(n=8, J=5)
    with pytest.raises(ValueError):
        approx_laplacian_residual(t, K2)


def test_transform_serialization_round_trips_bitwise(tmp_path):
    t = make_transform(n=24, J=80, seed=12, p=0.3)
    path = tmp_path / "t.fgft"
    save_transform(t, path)
    back = load_transform(path)
    assert back.n == t.n
    assert back.j_actual == t.j_actual
    assert back.perm.tobytes() == t.perm.tobytes()
    assert back.lambda_hat.tobytes() == t.lambda_hat.tobytes()
    for a, b in zip(back.rotations, t.rotations):
        assert (a.p, a.q) == (b.p, b.q)
        assert a.theta == b.theta
        assert a.c == b.c and a.s == b.s
    save_transform(back, tmp_path / "t2.fgft")
    assert (tmp_path / "t.fgft").read_bytes() == (tmp_path / "t2.fgft").read_bytes()


def test_signal_serialization_round_trip(tmp_path):
    sig = Signal(np.linspace(-1, 1, 9) ** 3, "spectral")
    path = tmp_path / "x.csv"
    save_signal(sig, path)
    back = load_signal(path)
    assert back.domain == "spectral"
    assert back.values.tobytes() == sig.values.tobytes()
    assert path.read_text().splitlines()[0] == "n=9 domain=spectral"


def test_factored_transform_validates_fields():
    g = GivensRotation.from_angle(0, 1, 0.3)
    with pytest.raises(ValueError):
        FactoredTransform(2, (g,), np.array([0, 0]), np.zeros(2), 1, 1)
    with pytest.raises(ValueError):
        FactoredTransform(2, (g,), np.arange(2), np.array([2.0, 1.0]), 1, 1)
    with pytest.raises(ValueError):
        FactoredTransform(2, (g,), np.arange(2), np.zeros(2), 1, 2)
    with pytest.raises(ValueError):
        FactoredTransform(2, (GivensRotation.from_angle(1, 2, 0.1),), np.arange(2), np.zeros(2), 1, 1)


def test_givens_rotation_validates():
    with pytest.raises(ValueError):
        GivensRotation(1, 1, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        GivensRotation(0, 1, 0.0, 1.0, 0.5)
    g = GivensRotation.from_angle(0, 1, -np.pi / 2)  # wraps into [0, 2*pi)
    assert 0.0 <= g.theta < 2 * np.pi
