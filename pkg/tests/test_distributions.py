import numpy as np
import pytest
from scipy import integrate, special

from swipt_sinr.distributions import (
    BetaIIParams,
    ScalarLaw,
    WishartParams,
    beta2_logpdf,
    beta_prime_law,
    gamma_law_from_wishart,
    log_multivariate_gamma,
    wishart_logpdf,
    wishart_sample,
)

# ---------------------------------------------------------------------------
# multivariate gamma


def test_multigamma_collapses_to_scalar_gamma():
    for x in (0.7, 1.0, 3.5, 12.0):
        assert log_multivariate_gamma(1, x) == pytest.approx(
            float(special.gammaln(x)), rel=1e-14
        )


def test_multigamma_p2_closed_form():
    # Gamma(2) Gamma(1.5) pi^{1/2} = pi / 2
    assert log_multivariate_gamma(2, 2.0) == pytest.approx(np.log(np.pi / 2), abs=1e-12)


def test_multigamma_p3_extended_precision_oracle():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 50
    expected = mpmath.log(
        mpmath.pi ** mpmath.mpf("1.5")
        * mpmath.gamma(5)
        * mpmath.gamma(mpmath.mpf("4.5"))
        * mpmath.gamma(4)
    )
    assert log_multivariate_gamma(3, 5.0) == pytest.approx(float(expected), rel=1e-14)


def test_multigamma_pole():
    with pytest.raises(ValueError, match="pole"):
        log_multivariate_gamma(3, 1.0)


# ---------------------------------------------------------------------------
# Wishart parameters and pdf


def test_wishart_params_validation():
    with pytest.raises(ValueError, match="dof"):
        WishartParams(dim=3, dof=1.5, scale=np.eye(3, dtype=complex))
    with pytest.raises(ValueError, match="Hermitian"):
        WishartParams(dim=2, dof=6, scale=np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError, match="shape"):
        WishartParams(dim=2, dof=6, scale=np.eye(3, dtype=complex))


def _scalar_wishart_logpdf(x, dof, scale):
    # Scaled chi-square density: x ~ scale * chi2_dof.
    shape = dof / 2.0
    return (
        (shape - 1.0) * np.log(x)
        - x / (2.0 * scale)
        - special.gammaln(shape)
        - shape * np.log(2.0 * scale)
    )


def test_wishart_logpdf_dim1_matches_scalar_formula():
    params = WishartParams(dim=1, dof=16, scale=np.array([[1.0 + 0j]]))
    grid = np.linspace(0.5, 40.0, 100)
    ours = np.array([wishart_logpdf(np.array([[x + 0j]]), params) for x in grid])
    ref = _scalar_wishart_logpdf(grid, 16, 1.0)
    np.testing.assert_allclose(ours, ref, atol=1e-10)


def test_wishart_logpdf_dim1_unit_mass():
    params = WishartParams(dim=1, dof=16, scale=np.array([[0.8 + 0j]]))
    mass, err = integrate.quad(
        lambda x: np.exp(wishart_logpdf(np.array([[x + 0j]]), params)), 1e-9, 400.0
    )
    assert err < 1e-7
    assert mass == pytest.approx(1.0, abs=1e-4)


def test_wishart_logpdf_dim1_mode_location():
    dof, scale = 16, 0.7
    params = WishartParams(dim=1, dof=dof, scale=np.array([[scale + 0j]]))
    grid = np.linspace(0.01, 40.0, 20001)
    vals = _scalar_wishart_logpdf(grid, dof, scale)
    ours = np.array([wishart_logpdf(np.array([[x + 0j]]), params) for x in grid[::200]])
    np.testing.assert_allclose(ours, vals[::200], atol=1e-10)
    assert grid[np.argmax(vals)] == pytest.approx((dof - 2) * scale, rel=1e-3)


def test_wishart_logpdf_rejects_non_pd():
    params = WishartParams(dim=2, dof=8, scale=np.eye(2, dtype=complex))
    with pytest.raises(ValueError, match="positive definite"):
        wishart_logpdf(np.diag([1.0, 0.0]).astype(complex), params)


# ---------------------------------------------------------------------------
# Wishart sampler


def test_wishart_sample_mean():
    rng = np.random.default_rng(10)
    scale = np.array([[1.0, 0.3 + 0.1j], [0.3 - 0.1j, 0.5]])
    params = WishartParams(dim=2, dof=16, scale=scale)
    draws = wishart_sample(params, rng, size=100_000)
    np.testing.assert_allclose(draws.mean(axis=0), 8 * scale, rtol=0.02)


def test_wishart_sample_zero_scale():
    rng = np.random.default_rng(11)
    params = WishartParams(dim=2, dof=8, scale=np.zeros((2, 2), dtype=complex))
    np.testing.assert_array_equal(wishart_sample(params, rng), np.zeros((2, 2)))


def test_wishart_sample_is_hermitian_psd():
    rng = np.random.default_rng(12)
    params = WishartParams(dim=3, dof=10, scale=np.eye(3, dtype=complex))
    draws = wishart_sample(params, rng, size=50)
    for d in draws:
        assert np.abs(d - d.conj().T).max() < 1e-12
        assert np.linalg.eigvalsh(d)[0] > -1e-12


def test_wishart_sampler_matches_scalar_cdf():
    rng = np.random.default_rng(13)
    params = WishartParams(dim=1, dof=16, scale=np.array([[1.0 + 0j]]))
    draws = wishart_sample(params, rng, size=100_000)[:, 0, 0].real
    law = gamma_law_from_wishart(params)
    xs = np.sort(draws)
    i = np.arange(1, xs.size + 1) / xs.size
    cdf = law.cdf(xs)
    ks = max(np.max(i - cdf), np.max(cdf - (i - 1 / xs.size)))
    assert ks <= 0.02


# ---------------------------------------------------------------------------
# Beta type II


def test_beta2_dim1_matches_beta_prime_at_unity():
    params = BetaIIParams(n1=4.0, n2=6.0, dim=1)
    expected = (
        (params.n1 - 1.0) * np.log(1.0)
        - (params.n1 + params.n2) * np.log(2.0)
        - float(special.betaln(params.n1, params.n2))
    )
    assert beta2_logpdf(np.array([[1.0 + 0j]]), params) == pytest.approx(
        expected, abs=1e-10
    )


def test_beta2_dim1_matches_beta_prime_on_grid():
    params = BetaIIParams(n1=8.25, n2=22.9, dim=1)
    grid = np.linspace(0.05, 3.0, 100)
    ours = np.array([beta2_logpdf(np.array([[x + 0j]]), params) for x in grid])
    ref = (
        (params.n1 - 1.0) * np.log(grid)
        - (params.n1 + params.n2) * np.log1p(grid)
        - float(special.betaln(params.n1, params.n2))
    )
    np.testing.assert_allclose(ours, ref, atol=1e-10)


def test_beta2_dim1_unit_mass():
    params = BetaIIParams(n1=8.25, n2=22.9, dim=1)

    # Substitute u = x / (1 + x) to integrate over a finite interval.
    def integrand(u):
        x = u / (1.0 - u)
        return np.exp(beta2_logpdf(np.array([[x + 0j]]), params)) / (1.0 - u) ** 2

    mass, err = integrate.quad(integrand, 1e-12, 1.0 - 1e-12, limit=200)
    assert mass == pytest.approx(1.0, abs=1e-3)


def test_beta2_dim2_finite_near_identity():
    params = BetaIIParams(n1=8.0, n2=20.0, dim=2)
    rng = np.random.default_rng(14)
    for _ in range(10):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        x = np.eye(2) + 0.05 * (a + a.conj().T)
        val = beta2_logpdf(x.astype(complex), params)
        assert np.isfinite(val)


def test_beta2_rejects_non_normalizable():
    params = BetaIIParams(n1=0.2, n2=5.0, dim=2)
    assert not params.is_normalizable
    with pytest.raises(ValueError, match="normalizable"):
        beta2_logpdf(np.eye(2, dtype=complex), params)


# ---------------------------------------------------------------------------
# scalar laws


def test_scalar_cdf_at_origin():
    for law in (ScalarLaw("gamma_of_wishart", (3.0, 1.0)), ScalarLaw("beta_prime", (4.0, 5.0))):
        assert law.cdf(0.0) == 0.0
        assert law.cdf(-1.0) == 0.0


def test_gamma_law_exponential_special_case():
    law = ScalarLaw("gamma_of_wishart", (1.0, 1.0))
    assert law.cdf(np.log(2.0)) == pytest.approx(0.5, abs=1e-12)


def test_beta_prime_median_against_sampling():
    rng = np.random.default_rng(15)
    law = ScalarLaw("beta_prime", (8.0, 22.0))
    samples = law.sample(rng, 1_000_000)
    assert law.median() == pytest.approx(np.quantile(samples, 0.5), rel=5e-3)


def test_scalar_cdf_monotone():
    rng = np.random.default_rng(16)
    for law in (ScalarLaw("gamma_of_wishart", (2.5, 0.7)), ScalarLaw("beta_prime", (3.0, 4.0))):
        pairs = rng.uniform(0, 20, size=(50, 2))
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        assert np.all(law.cdf(lo) <= law.cdf(hi) + 1e-15)


def test_moment_existence_flags():
    mean, flag = ScalarLaw("beta_prime", (3.0, 0.9)).mean()
    assert mean is None and "N2 <= 1" in flag
    var, flag = ScalarLaw("beta_prime", (3.0, 1.5)).var()
    assert var is None and "N2 <= 2" in flag
    mean, flag = ScalarLaw("gamma_of_wishart", (2.0, 3.0)).mean()
    assert mean == pytest.approx(6.0) and flag is None


def test_beta_prime_law_requires_dim1():
    with pytest.raises(ValueError, match="dim == 1"):
        beta_prime_law(BetaIIParams(n1=4.0, n2=5.0, dim=2))
