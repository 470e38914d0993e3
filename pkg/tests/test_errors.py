import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from fgft import (
    ErrorSurface,
    RngSpec,
    eigenvalue_density,
    erdos_renyi,
    err1,
    err1_baseline,
    err2,
    err2_baseline,
    err2_spectral,
    full_jacobi,
    global_error,
    laplacian,
    normalize_surface,
    orient,
    orient_columns,
    to_dense,
    truncated_jacobi,
    degree_permutation,
)
from fgft.errors import err1_sq_profile, err2_sq_profile

K2 = np.array([[1.0, -1.0], [-1.0, 1.0]])


def random_unit(n, rng):
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_orthonormal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diagonal(r))


@pytest.fixture(scope="module")
def oracle_16():
    L = laplacian(erdos_renyi(16, 0.5, RngSpec(77)))
    return L, full_jacobi(L)


def test_orient_basics():
    rng = np.random.default_rng(0)
    u = random_unit(12, rng)
    assert_allclose(orient(u, u), u)
    assert_allclose(orient(-u, u), u)
    # exactly orthogonal pair keeps the + sign
    e1, e2 = np.eye(12)[:, 0], -np.eye(12)[:, 1]
    assert_allclose(orient(e2, e1), e2, rtol=0, atol=0)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_orient_makes_inner_product_nonnegative(seed):
    rng = np.random.default_rng(seed)
    u = random_unit(8, rng)
    v = random_unit(8, rng)
    assert float(u @ orient(v, u)) >= 0.0


def test_err1_exact_mode_is_zero(oracle_16):
    _, exact = oracle_16
    for k in range(exact.n):
        assert err1(exact, exact.eigenvectors[:, k], k) <= 1e-12


def test_err1_two_mode_mixture(oracle_16):
    _, exact = oracle_16
    k = 5
    mix = 0.8 * exact.eigenvectors[:, k] + 0.6 * exact.eigenvectors[:, k + 1]
    assert_allclose(err1(exact, mix, k) ** 2, 0.4, atol=1e-12)


def test_err1_foreign_mode_squares_to_two(oracle_16):
    _, exact = oracle_16
    u_hat = orient(exact.eigenvectors[:, 9], exact.eigenvectors[:, 2])
    assert_allclose(err1(exact, u_hat, 2) ** 2, 2.0, atol=1e-10)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_err1_closed_form_identity(seed):
    rng = np.random.default_rng(seed)
    U = random_orthonormal(10, rng)
    exact = _as_decomposition(U)
    u_hat = orient(random_unit(10, rng), U[:, 3])
    expected_sq = 2.0 * (1.0 - float(U[:, 3] @ u_hat))
    assert abs(err1(exact, u_hat, 3) ** 2 - expected_sq) <= 1e-12


def _as_decomposition(U):
    from fgft import EigenDecomposition

    return EigenDecomposition(np.arange(U.shape[0], dtype=float), U)


def test_err1_is_bounded_by_two():
    rng = np.random.default_rng(4)
    U = random_orthonormal(12, rng)
    exact = _as_decomposition(U)
    for _ in range(50):
        u_hat = orient(random_unit(12, rng), U[:, 4])
        assert 0.0 <= err1(exact, u_hat, 4) <= 2.0


def test_err1_index_out_of_range(oracle_16):
    _, exact = oracle_16
    with pytest.raises(IndexError):
        err1(exact, exact.eigenvectors[:, 0], 16)


def test_err1_baseline_identity_oracle():
    exact = _as_decomposition(np.eye(5))
    for k in range(5):
        assert err1_baseline(exact, np.arange(5), k) == 0.0


def test_err1_baseline_closed_form(oracle_16):
    g = erdos_renyi(16, 0.5, RngSpec(77))
    _, exact = oracle_16
    sigma = degree_permutation(g)
    for k in range(16):
        expected_sq = 2.0 * (1.0 - abs(exact.eigenvectors[int(sigma[k]), k]))
        assert abs(err1_baseline(exact, sigma, k) ** 2 - expected_sq) <= 1e-12


def test_err1_baseline_k2():
    exact = full_jacobi(K2)
    base = err1_baseline(exact, np.array([0, 1]), 0)
    assert_allclose(base**2, 2.0 * (1.0 - 1.0 / np.sqrt(2.0)), atol=1e-12)


def test_err2_exact_mode_zero(oracle_16):
    L, exact = oracle_16
    for k in (0, 7, 15):
        assert err2(exact.eigenvalues, L, exact.eigenvectors[:, k], k) <= 1e-10


def test_err2_two_mode_mixture(oracle_16):
    L, exact = oracle_16
    k = 6
    lam = exact.eigenvalues
    mix = 0.8 * exact.eigenvectors[:, k] + 0.6 * exact.eigenvectors[:, k + 1]
    expected_sq = (lam[k + 1] - lam[k]) ** 2 * (1.0 - 0.8**2)
    assert_allclose(err2(lam, L, mix, k) ** 2, expected_sq, atol=1e-10)
    assert_allclose(err2_spectral(exact, mix, k) ** 2, expected_sq, atol=1e-10)


def test_err2_degenerate_eigenspace_vector():
    K4 = 4.0 * np.eye(4) - np.ones((4, 4))
    exact = full_jacobi(K4)
    rng = np.random.default_rng(1)
    mix = rng.standard_normal(3) @ exact.eigenvectors[:, 1:].T
    mix /= np.linalg.norm(mix)
    assert err2(exact.eigenvalues, K4, mix, 2) <= 1e-10


def test_err2_sign_invariant(oracle_16):
    L, exact = oracle_16
    rng = np.random.default_rng(3)
    u_hat = random_unit(16, rng)
    assert err2(exact.eigenvalues, L, u_hat, 4) == err2(
        exact.eigenvalues, L, -u_hat, 4
    )


def test_err2_matches_spectral_expansion_on_random_vectors():
    L = laplacian(erdos_renyi(64, 0.15, RngSpec(21)))
    exact = full_jacobi(L)
    rng = np.random.default_rng(17)
    for _ in range(100):
        u_hat = random_unit(64, rng)
        k = int(rng.integers(64))
        direct = err2(exact.eigenvalues, L, u_hat, k)
        expansion = err2_spectral(exact, u_hat, k)
        assert abs(direct - expansion) <= 1e-9 * max(direct, 1e-6)


def test_err2_bounded_by_spectral_range(oracle_16):
    L, exact = oracle_16
    lam = exact.eigenvalues
    rng = np.random.default_rng(9)
    for _ in range(40):
        u_hat = random_unit(16, rng)
        k = int(rng.integers(16))
        assert err2(lam, L, u_hat, k) <= (lam[-1] - lam[0]) + 1e-9


def test_err2_baseline_cases(oracle_16):
    empty_L = np.zeros((4, 4))
    lam = np.zeros(4)
    for k in range(4):
        assert err2_baseline(empty_L, lam, np.arange(4), k) == 0.0

    exact = full_jacobi(K2)
    assert_allclose(
        err2_baseline(K2, exact.eigenvalues, np.array([0, 1]), 0), np.sqrt(2.0)
    )

    L, exact16 = oracle_16
    sigma = degree_permutation(erdos_renyi(16, 0.5, RngSpec(77)))
    for k in (0, 5, 15):
        s = int(sigma[k])
        lam_k = exact16.eigenvalues[k]
        expected = np.sqrt(
            (L[:, s] ** 2).sum() - 2.0 * lam_k * L[s, s] + lam_k**2
        )
        assert_allclose(err2_baseline(L, exact16.eigenvalues, sigma, k), expected, rtol=1e-9)


def _surface(values, j_grid, baseline, kind="err1"):
    n = values.shape[0]
    return ErrorSurface(kind, values, j_grid, baseline, np.ones(n, dtype=np.int64), 0.25)


def test_normalize_surface_semantics():
    values = np.array([[4.0, 1.0], [9.0, 3.0], [0.5, 0.25]])
    baseline = values[:, 0].copy()
    norm = normalize_surface(_surface(values, (0, 10), baseline))
    assert norm.kind == "err1_norm"
    assert_allclose(norm.values[:, 0], 1.0)
    assert_allclose(norm.values[1, 1], 3.0 / 9.0)

    half = _surface(np.array([[4.0, 1.0]]), (0, 10), np.array([4.0]))
    assert_allclose(normalize_surface(half).values[0, 1], 0.25)

    zero_base = _surface(np.array([[0.0, 1.0]]), (0, 10), np.array([0.0]))
    out = normalize_surface(zero_base)
    assert np.isnan(out.values[0]).all()

    with pytest.raises(ValueError):
        normalize_surface(norm)


def test_error_surface_validation():
    with pytest.raises(ValueError):
        _surface(np.array([[1.0, -2.0]]), (0, 5), np.array([1.0]))
    with pytest.raises(ValueError):
        _surface(np.array([[1.0, 2.0]]), (0, 5), np.array([1.0]), kind="bogus")


def test_eigenvalue_density_examples():
    f = eigenvalue_density(np.array([0.0, 0.1, 0.2, 3.0]), 0.25)
    assert f.tolist() == [3, 3, 3, 1]
    f = eigenvalue_density(np.full(6, 2.5), 0.25)
    assert f.tolist() == [6] * 6
    with pytest.raises(ValueError):
        eigenvalue_density(np.array([0.0, 1.0]), 0.0)


@given(
    st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=40),
    st.floats(0.01, 3.0),
)
@settings(max_examples=60, deadline=None)
def test_eigenvalue_density_matches_double_loop(raw, delta):
    lam = np.sort(np.asarray(raw))
    fast = eigenvalue_density(lam, delta)
    lo, hi = lam - delta, lam + delta
    slow = [
        sum(1 for x in lam if lo[k] <= x <= hi[k]) for k in range(lam.size)
    ]
    assert fast.tolist() == slow


def test_global_error_zero_and_orientation(oracle_16):
    _, exact = oracle_16
    U = exact.eigenvectors
    assert global_error(exact, U) == 0.0
    flipped = U.copy()
    flipped[:, 3] *= -1.0
    assert global_error(exact, orient_columns(U, flipped)) == 0.0


def test_global_error_matches_err1_sum():
    rng = np.random.default_rng(12)
    L = laplacian(erdos_renyi(32, 0.3, RngSpec(41)))
    exact = full_jacobi(L)
    U_hat = orient_columns(exact.eigenvectors, random_orthonormal(32, rng))
    total = err1_sq_profile(exact.eigenvectors, U_hat).mean()
    assert abs(global_error(exact, U_hat) ** 2 - total) <= 1e-10


def test_profiles_match_scalar_operations():
    L = laplacian(erdos_renyi(20, 0.3, RngSpec(51)))
    exact = full_jacobi(L)
    t = truncated_jacobi(L, 30)
    U_hat = orient_columns(exact.eigenvectors, to_dense(t))
    e1 = err1_sq_profile(exact.eigenvectors, U_hat)
    e2 = err2_sq_profile(L, exact.eigenvalues, U_hat)
    for k in range(20):
        assert_allclose(e1[k], err1(exact, U_hat[:, k], k) ** 2, atol=1e-12)
        assert_allclose(
            e2[k], err2(exact.eigenvalues, L, U_hat[:, k], k) ** 2, atol=1e-12
        )
