"""Gaussian-hole marginal distribution: density, exact sampler, moments,
maximum-likelihood fitting, and bimodality quantification.

The density is a weighted difference of two zero-mean Gaussian kernels,

    f(x) = (e^{-x^2/2 lambda_0^2} - K e^{-x^2/2 lambda_1^2}) / Z,
    Z    = sqrt(2 pi) (lambda_0 - K lambda_1),

with lambda_0 = sigma_O and lambda_1 = sigma_O sigma_I / sqrt(sigma_O^2 +
sigma_I^2). K in [0, 1] is the hole depth; K = 0 or sigma_I = 0 reduces f
to a plain Gaussian with standard deviation sigma_O.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ._kernels_np import gh_neg_mean_loglik
from .errors import FitFailure, ParameterError

# Fine-histogram discipline for the dip statistic: bin count over
# [-4 sigma, 4 sigma], moving-average smoothing width (bins), the depth
# threshold separating Monte Carlo noise from a genuine hole, and the
# minimum distance (bins) of the density maximum from the origin.
# Dip estimator: a fine histogram (odd bin count so one bin is centered
# exactly at the origin) convolved with a Gaussian kernel of standard
# deviation DIP_BANDWIDTH_SIGMAS * sigma. The bandwidth is wide enough to
# average over sub-resolution artifacts of extreme-value timing (whose
# displaced mass stays within ~0.01 of the origin) yet narrow enough to
# resolve the genuine density holes, whose half-widths exceed 0.03 sigma.
DIP_BINS = 4001
DIP_RANGE_SIGMAS = 4.25
DIP_BANDWIDTH_SIGMAS = 0.03
DIP_THRESHOLD = 0.05
# A maximum closer to the origin than this is treated as a notched
# unimodal density rather than separated modes: extreme-value timing can
# pile displaced probability just outside a sub-bandwidth notch, while
# genuine hole distributions put their modes beyond 0.14 sigma.
DIP_MODE_MIN_OFFSET_SIGMAS = 0.1

_MIN_FIT_SAMPLES = 10_000
_MIN_DIP_SAMPLES = 100_000


@dataclass(frozen=True)
class GaussianHoleParams:
    """Parameters (K, sigma_I, sigma_O) of the Gaussian-hole density.

    Parameters
    ----------
    K : float
        Hole depth, in [0, 1].
    sigma_I : float
        Hole width, >= 0 and strictly less than ``sigma_O``.
    sigma_O : float
        Outer Gaussian standard deviation, > 0.
    """

    K: float
    sigma_I: float
    sigma_O: float

    def __post_init__(self):
        if not (math.isfinite(self.K) and 0.0 <= self.K <= 1.0):
            raise ParameterError(f"K must lie in [0, 1], got {self.K}")
        if not (math.isfinite(self.sigma_O) and self.sigma_O > 0.0):
            raise ParameterError(f"sigma_O must be finite and > 0, got {self.sigma_O}")
        if not (math.isfinite(self.sigma_I) and 0.0 <= self.sigma_I < self.sigma_O):
            raise ParameterError(
                f"sigma_I must satisfy 0 <= sigma_I < sigma_O, got sigma_I={self.sigma_I}, sigma_O={self.sigma_O}"
            )
        if self.K * self.lambda_1 >= self.lambda_0:
            raise ParameterError("degenerate normalization: K * lambda_1 >= lambda_0")

    @classmethod
    def from_variances(cls, K: float, sigma_I_sq: float, sigma_O_sq: float) -> "GaussianHoleParams":
        if sigma_I_sq < 0.0 or sigma_O_sq <= 0.0:
            raise ParameterError(f"variances must satisfy sigma_I_sq >= 0, sigma_O_sq > 0, got {sigma_I_sq}, {sigma_O_sq}")
        return cls(K=K, sigma_I=math.sqrt(sigma_I_sq), sigma_O=math.sqrt(sigma_O_sq))

    @property
    def sigma_I_sq(self) -> float:
        return self.sigma_I**2

    @property
    def sigma_O_sq(self) -> float:
        return self.sigma_O**2

    @property
    def lambda_0(self) -> float:
        return self.sigma_O

    @property
    def lambda_1(self) -> float:
        if self.sigma_I == 0.0:
            return 0.0
        return math.sqrt(self.sigma_O_sq * self.sigma_I_sq / (self.sigma_O_sq + self.sigma_I_sq))

    @property
    def is_gaussian(self) -> bool:
        """True when the density degenerates to a plain Gaussian."""
        return self.K == 0.0 or self.sigma_I == 0.0


def pdf(params: GaussianHoleParams, x):
    """Gaussian-hole density, vectorized over ``x``."""
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    xsq = np.atleast_1d(x) ** 2
    lam0 = params.lambda_0
    lam1 = params.lambda_1
    outer = np.exp(-xsq / (2.0 * lam0**2))
    if params.is_gaussian:
        # K = 0 or sigma_I = 0: the hole has zero weight and the density
        # is exactly Gaussian with standard deviation sigma_O.
        out = outer / (math.sqrt(2.0 * math.pi) * lam0)
    else:
        norm = math.sqrt(2.0 * math.pi) * (lam0 - params.K * lam1)
        out = (outer - params.K * np.exp(-xsq / (2.0 * lam1**2))) / norm
    return float(out[0]) if scalar else out


def complex_pdf(params: GaussianHoleParams, x, y):
    """Product density f(x) f(y) of two independent identical marginals."""
    return pdf(params, x) * pdf(params, y)


def acceptance_probability(params: GaussianHoleParams, x):
    """Rejection-sampler acceptance probability at proposal value ``x``."""
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    xsq = np.atleast_1d(x) ** 2
    lam0 = params.lambda_0
    lam1 = params.lambda_1
    if params.is_gaussian:
        out = np.ones_like(xsq)
    else:
        out = 1.0 - params.K * np.exp(-xsq * (1.0 / (2.0 * lam1**2) - 1.0 / (2.0 * lam0**2)))
    return float(out[0]) if scalar else out


def acceptance_rate(params: GaussianHoleParams) -> float:
    """Expected acceptance rate (lambda_0 - K lambda_1) / lambda_0."""
    return (params.lambda_0 - params.K * params.lambda_1) / params.lambda_0


def sample(params: GaussianHoleParams, rng: np.random.Generator, n: int = None):
    """Draw exact variates by rejection from the lambda_0 Gaussian envelope.

    Proposals x ~ N(0, lambda_0^2) are accepted with probability
    1 - K e^{-x^2 (1/(2 lambda_1^2) - 1/(2 lambda_0^2))}, which reproduces
    the density exactly. Returns a scalar when ``n`` is None, else an
    array of shape (n,).
    """
    scalar = n is None
    count = 1 if scalar else int(n)
    if count < 0:
        raise ParameterError(f"sample count must be >= 0, got {n}")
    lam0 = params.lambda_0
    if params.is_gaussian:
        out = rng.normal(0.0, lam0, size=count)
        return float(out[0]) if scalar else out
    rate = acceptance_rate(params)
    out = np.empty(count)
    filled = 0
    while filled < count:
        remaining = count - filled
        m = max(1024, int(1.2 * remaining / rate) + 16)
        proposals = rng.normal(0.0, lam0, size=m)
        u = rng.uniform(0.0, 1.0, size=m)
        accepted = proposals[u < acceptance_probability(params, proposals)]
        take = min(accepted.size, remaining)
        out[filled : filled + take] = accepted[:take]
        filled += take
    return float(out[0]) if scalar else out


def moments(params: GaussianHoleParams) -> dict:
    """Closed-form central moments of the density.

    Returns
    -------
    dict
        ``variance`` = (lambda_0^3 - K lambda_1^3)/(lambda_0 - K lambda_1)
        and ``fourth_moment`` = 3 (lambda_0^5 - K lambda_1^5)/(lambda_0 -
        K lambda_1).
    """
    lam0 = params.lambda_0
    lam1 = params.lambda_1
    denom = lam0 - params.K * lam1
    return {
        "variance": (lam0**3 - params.K * lam1**3) / denom,
        "fourth_moment": 3.0 * (lam0**5 - params.K * lam1**5) / denom,
    }


@dataclass(frozen=True)
class FitResult:
    """Maximum-likelihood fit output.

    ``loglik`` is the total log-likelihood of the input samples at the
    fitted parameters.
    """

    params: GaussianHoleParams
    loglik: float
    n_samples: int
    converged: bool
    n_iterations: int


def _transform(theta):
    """Map unconstrained optimizer coordinates to (K, sigma_I_sq, sigma_O_sq)."""
    k = 1.0 / (1.0 + math.exp(-min(max(theta[0], -40.0), 40.0)))
    return k, math.exp(theta[1]), math.exp(theta[2])


def _neg_mean_loglik(theta, xsq):
    k, si_sq, so_sq = _transform(theta)
    if not (math.isfinite(si_sq) and math.isfinite(so_sq)) or si_sq >= so_sq:
        # Penalty wall keeps the search inside sigma_I < sigma_O.
        return 1e6 + theta[1] - theta[2]
    lam0_sq = so_sq
    lam1_sq = so_sq * si_sq / (so_sq + si_sq)
    return gh_neg_mean_loglik(xsq, k, math.sqrt(lam0_sq), math.sqrt(lam1_sq))


def fit(samples) -> FitResult:
    """Maximum-likelihood Gaussian-hole parameters for ``samples``.

    Initialization follows the sample variance (sigma_O_sq = variance,
    K = 0.9, sigma_I_sq = 0.01 variance); a derivative-free simplex
    search then refines the exact log-likelihood in unconstrained
    coordinates (logit K, log variances).

    Raises
    ------
    FitFailure
        If the optimizer fails to improve on the initial point or
        returns an invalid optimum. The exception carries the best
        parameters seen so far.
    """
    x = np.ascontiguousarray(samples, dtype=np.float64).ravel()
    if x.size < _MIN_FIT_SAMPLES:
        raise ParameterError(f"fit needs at least {_MIN_FIT_SAMPLES} samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ParameterError("samples must be finite")
    xsq = x**2
    variance = float(np.var(x))
    if variance <= 0.0:
        raise ParameterError("samples are degenerate (zero variance)")

    theta0 = np.array([math.log(0.9 / 0.1), math.log(0.01 * variance), math.log(variance)])
    nll0 = _neg_mean_loglik(theta0, xsq)
    result = optimize.minimize(
        _neg_mean_loglik,
        theta0,
        args=(xsq,),
        method="Nelder-Mead",
        options={"xatol": 1e-5, "fatol": 1e-10, "maxiter": 3000, "maxfev": 4000},
    )
    k, si_sq, so_sq = _transform(result.x)
    improved = math.isfinite(result.fun) and result.fun < nll0 - 1e-13
    if not improved or si_sq >= so_sq:
        best = None
        if math.isfinite(result.fun) and si_sq < so_sq:
            best = GaussianHoleParams.from_variances(k, si_sq, so_sq)
        raise FitFailure(
            "likelihood optimization failed to improve on the moment initialization",
            best_params=best,
            partial=FitResult(
                params=best if best is not None else GaussianHoleParams.from_variances(0.9, 0.01 * variance, variance),
                loglik=-float(result.fun) * x.size,
                n_samples=x.size,
                converged=False,
                n_iterations=int(result.nit),
            ),
        )
    params = GaussianHoleParams.from_variances(k, si_sq, so_sq)
    return FitResult(
        params=params,
        loglik=-float(result.fun) * x.size,
        n_samples=x.size,
        converged=bool(result.success),
        n_iterations=int(result.nit),
    )


@dataclass(frozen=True)
class DipStatistic:
    """Depth of the density dip at the origin and the bimodality verdict."""

    dip_depth: float
    is_bimodal: bool


def dip_statistic(samples) -> DipStatistic:
    """Kernel-density dip statistic of a sample's density at the origin.

    A binned Gaussian kernel-density estimate f over [-4.25 sigma,
    4.25 sigma] with bandwidth 0.03 sigma gives dip_depth =
    1 - f(0)/max f. The sample is called bimodal when the dip exceeds
    0.05 and the maximum is attained away from the origin (beyond
    0.1 sigma).
    """
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size < _MIN_DIP_SAMPLES:
        raise ParameterError(f"dip statistic needs at least {_MIN_DIP_SAMPLES} samples, got {x.size}")
    sigma = float(np.std(x))
    if sigma <= 0.0:
        raise ParameterError("samples are degenerate (zero variance)")
    lim = DIP_RANGE_SIGMAS * sigma
    counts, _ = np.histogram(x, bins=DIP_BINS, range=(-lim, lim))
    width = 2.0 * lim / DIP_BINS
    bw_bins = DIP_BANDWIDTH_SIGMAS * sigma / width
    radius = int(math.ceil(4.0 * bw_bins))
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-0.5 * (offsets / bw_bins) ** 2)
    kernel /= np.sum(kernel)
    smoothed = np.convolve(counts.astype(np.float64), kernel, mode="same")
    center = DIP_BINS // 2
    i_max = int(np.argmax(smoothed))
    f_max = smoothed[i_max]
    depth = 1.0 - smoothed[center] / f_max if f_max > 0.0 else 0.0
    offset_bins = DIP_MODE_MIN_OFFSET_SIGMAS * sigma / width
    bimodal = depth > DIP_THRESHOLD and abs(i_max - center) > offset_bins
    return DipStatistic(dip_depth=float(depth), is_bimodal=bool(bimodal))


def analytic_dip_depth(params: GaussianHoleParams) -> float:
    """Dip depth 1 - f(0)/max f evaluated from the density itself."""
    grid = np.linspace(-4.0 * params.sigma_O, 4.0 * params.sigma_O, 8001)
    values = pdf(params, grid)
    return float(1.0 - pdf(params, 0.0) / np.max(values))


def to_text(params: GaussianHoleParams) -> str:
    """Serialize parameters to the flat key-value interchange format."""
    return (
        f"K = {params.K:.17e}\n"
        f"sigma_I_sq = {params.sigma_I_sq:.17e}\n"
        f"sigma_O_sq = {params.sigma_O_sq:.17e}\n"
    )


def from_text(text: str) -> GaussianHoleParams:
    """Parse parameters from the flat key-value interchange format."""
    values = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {line_no}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        try:
            values[key.strip()] = float(value)
        except ValueError as exc:
            raise ParameterError(f"line {line_no}: bad numeric value in {raw!r}") from exc
    missing = {"K", "sigma_I_sq", "sigma_O_sq"} - values.keys()
    if missing:
        raise ParameterError(f"missing keys: {sorted(missing)}")
    return GaussianHoleParams.from_variances(values["K"], values["sigma_I_sq"], values["sigma_O_sq"])
