"""Statistical-model tests: density identities, exact sampling, fitting, dip."""

import math

import numpy as np
import pytest
from scipy import stats

from mediumband import statmodel as sm
from mediumband.errors import ParameterError

# Reference fitted parameters for the default protocol at four delay
# spreads: (K, sigma_I_sq, sigma_O_sq) keyed by percentage delay spread.
REFERENCE_FITS = {
    20.0: (0.9218, 0.0008, 0.4818),
    40.0: (0.9336, 0.0031, 0.4580),
    60.0: (0.9502, 0.0074, 0.4338),
    80.0: (0.9668, 0.0131, 0.4054),
}


def _params(pds: float) -> sm.GaussianHoleParams:
    k, si_sq, so_sq = REFERENCE_FITS[pds]
    return sm.GaussianHoleParams.from_variances(k, si_sq, so_sq)


def _random_params(rng: np.random.Generator) -> sm.GaussianHoleParams:
    k = float(rng.uniform(0.0, 1.0))
    so_sq = float(rng.uniform(0.1, 1.0))
    si_sq = float(rng.uniform(0.0, 0.6)) * so_sq
    return sm.GaussianHoleParams.from_variances(k, si_sq, so_sq)


def _quad_grid(params: sm.GaussianHoleParams, n: int = 100_001):
    lim = 12.0 * params.sigma_O
    return np.linspace(-lim, lim, n)


def test_pdf_normalizes_to_one():
    rng = np.random.default_rng(1)
    cases = [_params(p) for p in REFERENCE_FITS]
    cases.append(sm.GaussianHoleParams(K=0.0, sigma_I=0.1, sigma_O=0.7))
    cases.extend(_random_params(rng) for _ in range(100))
    for params in cases:
        x = _quad_grid(params)
        f = sm.pdf(params, x)
        assert np.all(f >= 0.0)
        assert np.trapezoid(f, x) == pytest.approx(1.0, abs=1e-6)


def test_pdf_gaussian_limits():
    x = np.linspace(-5.0, 5.0, 2001)
    for params in (
        sm.GaussianHoleParams(K=0.0, sigma_I=0.3, sigma_O=0.7),
        sm.GaussianHoleParams(K=0.8, sigma_I=0.0, sigma_O=0.7),
    ):
        assert params.is_gaussian
        ref = stats.norm.pdf(x, scale=0.7)
        assert np.max(np.abs(sm.pdf(params, x) - ref)) < 1e-12
    assert not _params(20.0).is_gaussian


def test_pdf_symmetric_with_modes_off_origin():
    for pds, params in ((p, _params(p)) for p in REFERENCE_FITS):
        x = np.linspace(0.0, 4.0 * params.sigma_O, 40_001)
        f = sm.pdf(params, x)
        assert np.max(np.abs(sm.pdf(params, -x) - f)) < 1e-15
        i_max = int(np.argmax(f))
        assert x[i_max] > 0.05, f"pds={pds}"
        assert f[i_max] > sm.pdf(params, 0.0)
        # Density decreases monotonically beyond the mode.
        assert np.all(np.diff(f[i_max:]) <= 1e-15)


def test_complex_pdf_is_marginal_product():
    params = _params(60.0)
    x = np.linspace(-2.0, 2.0, 41)
    y = np.linspace(-1.5, 1.5, 31)
    got = sm.complex_pdf(params, x[:, None], y[None, :])
    expected = sm.pdf(params, x)[:, None] * sm.pdf(params, y)[None, :]
    np.testing.assert_allclose(got, expected, rtol=1e-14)


def test_parameter_validation():
    with pytest.raises(ParameterError):
        sm.GaussianHoleParams(K=-0.1, sigma_I=0.1, sigma_O=0.7)
    with pytest.raises(ParameterError):
        sm.GaussianHoleParams(K=1.1, sigma_I=0.1, sigma_O=0.7)
    with pytest.raises(ParameterError):
        sm.GaussianHoleParams(K=0.5, sigma_I=0.7, sigma_O=0.7)
    with pytest.raises(ParameterError):
        sm.GaussianHoleParams(K=0.5, sigma_I=-0.1, sigma_O=0.7)
    with pytest.raises(ParameterError):
        sm.GaussianHoleParams(K=0.5, sigma_I=0.1, sigma_O=0.0)
    with pytest.raises(ParameterError):
        sm.GaussianHoleParams.from_variances(0.5, -1e-6, 0.5)
    # Variance constructor squares consistently.
    params = sm.GaussianHoleParams.from_variances(0.9, 0.0074, 0.4338)
    assert params.sigma_I_sq == pytest.approx(0.0074, rel=1e-12)
    assert params.sigma_O_sq == pytest.approx(0.4338, rel=1e-12)
    lam1 = math.sqrt(0.4338 * 0.0074 / (0.4338 + 0.0074))
    assert params.lambda_1 == pytest.approx(lam1, rel=1e-12)
    assert params.lambda_0 == pytest.approx(math.sqrt(0.4338), rel=1e-12)


def _exact_cdf(params: sm.GaussianHoleParams, x: np.ndarray) -> np.ndarray:
    lam0, lam1 = params.lambda_0, params.lambda_1
    num = lam0 * stats.norm.cdf(x / lam0)
    if lam1 > 0.0:
        num = num - params.K * lam1 * stats.norm.cdf(x / lam1)
    return num / (lam0 - params.K * lam1)


def test_sampler_matches_density():
    # Kolmogorov-Smirnov against the closed-form CDF at the asymptotic
    # 1% critical value; seeds are fixed so the check is deterministic.
    n = 200_000
    threshold = 1.63 / math.sqrt(n)
    cases = [_params(20.0), _params(80.0), _random_params(np.random.default_rng(9))]
    for i, params in enumerate(cases):
        xs = np.sort(sm.sample(params, np.random.default_rng(150 + i), n))
        model = _exact_cdf(params, xs)
        empirical = np.arange(1, n + 1) / n
        ks = np.max(np.maximum(np.abs(model - empirical), np.abs(model - empirical + 1.0 / n)))
        assert ks < threshold, f"case {i}: ks={ks:.5f}"


def test_sampler_scalar_and_edge_counts():
    params = _params(40.0)
    rng = np.random.default_rng(3)
    value = sm.sample(params, rng)
    assert isinstance(value, float)
    assert sm.sample(params, rng, 0).shape == (0,)
    with pytest.raises(ParameterError):
        sm.sample(params, rng, -1)


def test_acceptance_rate_matches_rejection_run():
    params = _params(60.0)
    rate = sm.acceptance_rate(params)
    lam0, lam1 = params.lambda_0, params.lambda_1
    assert rate == pytest.approx((lam0 - params.K * lam1) / lam0, rel=1e-15)
    rng = np.random.default_rng(11)
    proposals = rng.normal(0.0, lam0, 2_000_000)
    u = rng.uniform(0.0, 1.0, proposals.size)
    accepted = float(np.mean(u < sm.acceptance_probability(params, proposals)))
    assert accepted == pytest.approx(rate, abs=0.002)
    # Probability endpoints: 1 - K at the origin, 1 far out.
    assert sm.acceptance_probability(params, 0.0) == pytest.approx(1.0 - params.K, rel=1e-12)
    assert sm.acceptance_probability(params, 100.0) == pytest.approx(1.0, abs=1e-12)


def test_moments_match_quadrature_and_samples():
    for params in (_params(20.0), _params(80.0), _random_params(np.random.default_rng(4))):
        m = sm.moments(params)
        x = _quad_grid(params, 400_001)
        f = sm.pdf(params, x)
        var_quad = float(np.trapezoid(x**2 * f, x))
        m4_quad = float(np.trapezoid(x**4 * f, x))
        assert m["variance"] == pytest.approx(var_quad, rel=1e-9)
        assert m["fourth_moment"] == pytest.approx(m4_quad, rel=1e-9)
    params = _params(60.0)
    m = sm.moments(params)
    n = 1_000_000
    xs = sm.sample(params, np.random.default_rng(8), n)
    se_var = math.sqrt((m["fourth_moment"] - m["variance"] ** 2) / n)
    assert float(np.var(xs)) == pytest.approx(m["variance"], abs=3.0 * se_var)
    assert abs(float(np.mean(xs))) < 3.0 * math.sqrt(m["variance"] / n)


def test_fit_recovers_parameters():
    params = _params(60.0)
    xs = sm.sample(params, np.random.default_rng(21), 1_000_000)
    result = sm.fit(xs)
    assert result.converged
    assert result.n_samples == xs.size
    assert math.isfinite(result.loglik)
    assert result.params.K == pytest.approx(params.K, abs=0.02)
    assert result.params.sigma_O_sq == pytest.approx(params.sigma_O_sq, abs=0.01)
    assert result.params.sigma_I_sq == pytest.approx(params.sigma_I_sq, rel=0.30)
    # Total log-likelihood beats a mismatched parameter point.
    worse = sm.GaussianHoleParams.from_variances(0.5, params.sigma_I_sq, params.sigma_O_sq)
    loglik_worse = float(np.sum(np.log(sm.pdf(worse, xs))))
    assert result.loglik > loglik_worse


def test_fit_gaussian_input_yields_no_hole():
    # With no hole in the data, K and sigma_I are jointly unidentified
    # (a zero-width notch costs no likelihood), so the invariant is that
    # the fitted notch removes a negligible share of probability mass.
    xs = np.random.default_rng(33).normal(0.0, math.sqrt(0.5), 500_000)
    result = sm.fit(xs)
    assert 1.0 - sm.acceptance_rate(result.params) < 1e-3
    assert result.params.sigma_O_sq == pytest.approx(0.5, abs=0.01)


def test_fit_requires_enough_samples():
    xs = np.random.default_rng(0).normal(0.0, 1.0, 9_999)
    with pytest.raises(ParameterError):
        sm.fit(xs)


def test_dip_gaussian_is_unimodal():
    xs = np.random.default_rng(14).normal(0.0, 0.7, 1_000_000)
    d = sm.dip_statistic(xs)
    assert not d.is_bimodal
    assert d.dip_depth < 0.05


def test_dip_matches_analytic_depth():
    params = _params(60.0)
    xs = sm.sample(params, np.random.default_rng(15), 1_000_000)
    d = sm.dip_statistic(xs)
    assert d.is_bimodal
    assert d.dip_depth == pytest.approx(sm.analytic_dip_depth(params), abs=0.05)


def test_dip_deepens_with_wider_hole():
    d20 = sm.dip_statistic(sm.sample(_params(20.0), np.random.default_rng(16), 400_000))
    d80 = sm.dip_statistic(sm.sample(_params(80.0), np.random.default_rng(17), 400_000))
    assert d20.is_bimodal and d80.is_bimodal
    assert d80.dip_depth > d20.dip_depth


def test_dip_input_validation():
    rng = np.random.default_rng(2)
    with pytest.raises(ParameterError):
        sm.dip_statistic(rng.normal(size=99_999))
    with pytest.raises(ParameterError):
        sm.dip_statistic(np.zeros(100_000))


def test_analytic_dip_depth_reference_rows():
    # Depth grows with the delay spread of the fitted row.
    depths = [sm.analytic_dip_depth(_params(p)) for p in sorted(REFERENCE_FITS)]
    assert all(0.9 < d < 1.0 for d in depths)
    assert all(a < b for a, b in zip(depths, depths[1:]))
    gaussian = sm.GaussianHoleParams(K=0.0, sigma_I=0.0, sigma_O=0.7)
    assert sm.analytic_dip_depth(gaussian) == pytest.approx(0.0, abs=1e-12)


def test_serialization_round_trip():
    params = _params(40.0)
    text = sm.to_text(params)
    back = sm.from_text(text)
    assert back.K == params.K
    assert back.sigma_I == params.sigma_I
    assert back.sigma_O == params.sigma_O
    # Comments and blank lines are tolerated.
    decorated = "# fitted parameters\n\n" + text + "\n# end\n"
    assert sm.from_text(decorated) == back


def test_from_text_errors():
    with pytest.raises(ParameterError):
        sm.from_text("K 0.5\n")
    with pytest.raises(ParameterError):
        sm.from_text("K = not-a-number\n")
    with pytest.raises(ParameterError):
        sm.from_text("K = 0.5\nsigma_I_sq = 0.01\n")
    with pytest.raises(ParameterError):
        sm.from_text("K = 0.5\nsigma_I_sq = 0.01\nsigma_O_sq = -1.0\n")
