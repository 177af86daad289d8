"""Multipath channel generation, pulse shaping, timing synchronization, and
symbol-spaced tap extraction.

Time quantities at the public API are in seconds; internally everything is
normalized to symbol periods before hitting the numeric kernels.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import (
    OBJ_COMPONENT,
    OBJ_MAGNITUDE,
    rc_pulse,
    sync_batch,
    taps_batch,
)
from .errors import ConfigurationError, ParameterError

# Timing-search discipline: coarse grid density (points per symbol period),
# golden-section refinement tolerance (symbol periods), and the half-symbol
# extension of the search window on both sides of [0, T_m].
SYNC_RESOLUTION = 128
SYNC_TOL = 1e-6
SYNC_MARGIN = 0.5

# Single-instant timing objectives. "magnitude" maximizes |c_0(t)|^2;
# "component" maximizes |Re c_0(t)|; "sir" maximizes the ratio of center tap
# power to residual tap power. Production extraction synchronizes each
# quadrature rail separately (synchronize_dual), which reuses the component
# objective per rail.
SYNC_OBJECTIVES = ("magnitude", "component", "sir")


@dataclass(frozen=True)
class ChannelProtocol:
    """Parameters of the random multipath ensemble.

    Parameters
    ----------
    n_paths : int
        Number of propagation paths N.
    delay_spread : float
        Upper limit T_m of the uniform path-delay distribution, seconds.
    symbol_period : float
        Symbol period T_s, seconds.
    """

    n_paths: int = 10
    delay_spread: float = 0.2
    symbol_period: float = 1.0

    def __post_init__(self):
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ConfigurationError(f"n_paths must be a positive integer, got {self.n_paths}")
        if not math.isfinite(self.delay_spread) or self.delay_spread < 0.0:
            raise ConfigurationError(f"delay_spread must be finite and >= 0, got {self.delay_spread}")
        if not math.isfinite(self.symbol_period) or self.symbol_period <= 0.0:
            raise ConfigurationError(f"symbol_period must be finite and > 0, got {self.symbol_period}")


@dataclass(frozen=True)
class PulseShape:
    """Raised-cosine composite pulse (TX and RX square-root pair combined).

    Parameters
    ----------
    rolloff : float
        Excess-bandwidth factor beta, in (0, 1].
    span : int
        Truncation length in symbol periods (two half-widths); must be an
        even integer >= 2. The pulse is identically zero outside
        |t| > span/2 symbol periods.
    oversampling : int
        Samples per symbol for waveform export; unused by tap extraction.
    """

    rolloff: float = 0.22
    span: int = 12
    oversampling: int = 16

    def __post_init__(self):
        if not (0.0 < self.rolloff <= 1.0):
            raise ConfigurationError(f"rolloff must be in (0, 1], got {self.rolloff}")
        if int(self.span) != self.span or self.span < 2 or self.span % 2 != 0:
            raise ConfigurationError(f"span must be an even integer >= 2, got {self.span}")
        if int(self.oversampling) != self.oversampling or self.oversampling < 1:
            raise ConfigurationError(f"oversampling must be a positive integer, got {self.oversampling}")

    @property
    def half_span(self) -> float:
        return self.span / 2.0


@dataclass(frozen=True, eq=False)
class MultipathProfile:
    """One realization of the random multipath channel.

    Parameters
    ----------
    amplitudes, phases, delays : ndarray
        Per-path linear gains alpha_n >= 0, phases phi_n in [0, 2pi)
        radians, and delays tau_n in [0, delay_spread] seconds. Equal
        lengths N >= 1.
    delay_spread : float
        T_m, seconds.
    symbol_period : float
        T_s, seconds.
    """

    amplitudes: np.ndarray
    phases: np.ndarray
    delays: np.ndarray
    delay_spread: float
    symbol_period: float

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.float64)
        phs = np.asarray(self.phases, dtype=np.float64)
        dly = np.asarray(self.delays, dtype=np.float64)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "phases", phs)
        object.__setattr__(self, "delays", dly)
        if amp.ndim != 1 or amp.shape != phs.shape or amp.shape != dly.shape:
            raise ParameterError("amplitudes, phases, delays must be equal-length 1-d arrays")
        if amp.size < 1:
            raise ParameterError("a profile needs at least one path")
        if not (np.all(np.isfinite(amp)) and np.all(np.isfinite(phs)) and np.all(np.isfinite(dly))):
            raise ParameterError("path parameters must be finite")
        if np.any(amp < 0.0):
            raise ParameterError("amplitudes must be nonnegative")
        if not math.isfinite(self.delay_spread) or self.delay_spread < 0.0:
            raise ParameterError(f"delay_spread must be finite and >= 0, got {self.delay_spread}")
        if not math.isfinite(self.symbol_period) or self.symbol_period <= 0.0:
            raise ParameterError(f"symbol_period must be finite and > 0, got {self.symbol_period}")
        if np.any(dly < 0.0) or np.any(dly > self.delay_spread):
            raise ParameterError("delays must lie in [0, delay_spread]")

    @property
    def n_paths(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """Symbol-spaced composite channel taps c_k and derived quantities.

    Parameters
    ----------
    taps : ndarray
        Complex taps c_k for consecutive integer k starting at ``k_min``.
    k_min : int
        Index of ``taps[0]``; k = 0 must be covered.
    timing_offset : float
        Receiver sampling instant t_0, seconds. The production
        synchronizer searches [-T_s/2, T_m + T_s/2), so t_0 may fall
        slightly outside [0, T_s).
    source_profile : MultipathProfile
        The realization these taps were extracted from.
    quadrature_offset : float or None
        Sampling instant of the imaginary rail when the two rails were
        synchronized separately; None for single-instant extraction.
    """

    taps: np.ndarray
    k_min: int
    timing_offset: float
    source_profile: MultipathProfile
    quadrature_offset: float | None = None

    def __post_init__(self):
        taps = np.ascontiguousarray(self.taps, dtype=np.complex128)
        object.__setattr__(self, "taps", taps)
        if taps.ndim != 1 or taps.size < 1:
            raise ParameterError("taps must be a nonempty 1-d array")
        if not (self.k_min <= 0 <= self.k_min + taps.size - 1):
            raise ParameterError("tap index range must contain k = 0")
        if not np.all(np.isfinite(taps.view(np.float64))):
            raise ParameterError("taps must be finite")

    @property
    def k_max(self) -> int:
        return self.k_min + self.taps.size - 1

    @property
    def g(self) -> complex:
        """Desired fading factor, the k = 0 tap."""
        return complex(self.taps[-self.k_min])

    def tap(self, k: int) -> complex:
        """Return c_k, zero outside the stored index range."""
        if self.k_min <= k <= self.k_max:
            return complex(self.taps[k - self.k_min])
        return 0.0 + 0.0j

    @property
    def residual_power(self) -> float:
        """Total power of the non-center taps."""
        power = np.abs(self.taps) ** 2
        return float(np.sum(power) - power[-self.k_min])

    @property
    def sir_db(self) -> float:
        """Center-tap to residual-tap power ratio in dB; +inf if ISI-free."""
        desired = abs(self.g) ** 2
        isi = self.residual_power
        if isi <= 0.0:
            return math.inf
        return 10.0 * math.log10(desired / isi)


def composite_pulse(pulse: PulseShape, t, symbol_period: float = 1.0):
    """Evaluate the raised-cosine composite pulse p(t).

    Parameters
    ----------
    pulse : PulseShape
    t : float or ndarray
        Time in seconds.
    symbol_period : float
        Symbol period T_s, seconds.

    Returns
    -------
    float or ndarray
        p(t); exactly zero outside |t| > span/2 * T_s, with p(0) = 1 and
        p(k T_s) = 0 for nonzero integer k. The removable singularity at
        t = T_s/(2 beta) takes its limit value.
    """
    if symbol_period <= 0.0:
        raise ConfigurationError(f"symbol_period must be > 0, got {symbol_period}")
    x = np.asarray(t, dtype=np.float64) / symbol_period
    scalar = x.ndim == 0
    out = rc_pulse(np.atleast_1d(x), pulse.rolloff, pulse.half_span)
    return float(out[0]) if scalar else out


def pds(delay_spread: float, symbol_period: float) -> float:
    """Percentage delay spread, 100 * T_m / T_s.

    Parameters
    ----------
    delay_spread : float
        T_m >= 0, seconds.
    symbol_period : float
        T_s > 0, seconds.
    """
    if not math.isfinite(symbol_period) or symbol_period <= 0.0:
        raise ConfigurationError(f"symbol_period must be finite and > 0, got {symbol_period}")
    if not math.isfinite(delay_spread) or delay_spread < 0.0:
        raise ConfigurationError(f"delay_spread must be finite and >= 0, got {delay_spread}")
    return 100.0 * delay_spread / symbol_period


def delay_spread_for_pds(pds_percent: float, symbol_period: float) -> float:
    """Inverse of :func:`pds`: the T_m realizing a given percentage."""
    if not math.isfinite(pds_percent) or pds_percent < 0.0:
        raise ConfigurationError(f"pds must be finite and >= 0, got {pds_percent}")
    if not math.isfinite(symbol_period) or symbol_period <= 0.0:
        raise ConfigurationError(f"symbol_period must be finite and > 0, got {symbol_period}")
    return pds_percent / 100.0 * symbol_period


def sample_profile_batch(config, rng: np.random.Generator, n: int):
    """Draw ``n`` multipath realizations as flat arrays.

    Draw order is fixed (amplitudes, then phases, then delays) so that a
    given stream position always yields the same ensemble member.

    Parameters
    ----------
    config : object
        Anything with ``n_paths``, ``delay_spread``, ``symbol_period``
        attributes, e.g. :class:`ChannelProtocol`.
    rng : numpy.random.Generator
    n : int
        Number of realizations.

    Returns
    -------
    (ndarray, ndarray, ndarray)
        ``(amplitudes, phases, delays)`` each of shape (n, n_paths);
        delays in seconds.
    """
    n_paths = int(config.n_paths)
    if n_paths < 1:
        raise ConfigurationError(f"n_paths must be >= 1, got {config.n_paths}")
    t_m = float(config.delay_spread)
    if not math.isfinite(t_m) or t_m < 0.0:
        raise ConfigurationError(f"delay_spread must be finite and >= 0, got {t_m}")
    if n < 1:
        raise ConfigurationError(f"batch size must be >= 1, got {n}")
    # Rayleigh scale sqrt(1/(2N)) gives E[alpha^2] = 1/N, so the expected
    # total path power is 1.
    scale = math.sqrt(1.0 / (2.0 * n_paths))
    amplitudes = rng.rayleigh(scale=scale, size=(n, n_paths))
    phases = rng.uniform(0.0, 2.0 * math.pi, size=(n, n_paths))
    delays = rng.uniform(0.0, t_m, size=(n, n_paths)) if t_m > 0.0 else np.zeros((n, n_paths))
    return amplitudes, phases, delays


def sample_profile(config, rng: np.random.Generator) -> MultipathProfile:
    """Draw one multipath realization.

    See :func:`sample_profile_batch` for the distributional contract:
    delays i.i.d. U[0, T_m], phases i.i.d. U[0, 2pi), amplitudes i.i.d.
    Rayleigh with E[alpha^2] = 1/N.
    """
    amplitudes, phases, delays = sample_profile_batch(config, rng, 1)
    return MultipathProfile(
        amplitudes=amplitudes[0],
        phases=phases[0],
        delays=delays[0],
        delay_spread=float(config.delay_spread),
        symbol_period=float(config.symbol_period),
    )


def path_weights(amplitudes: np.ndarray, phases: np.ndarray):
    """Cartesian weights of the complex path gains alpha_n e^{-j phi_n}."""
    wr = amplitudes * np.cos(phases)
    wi = -amplitudes * np.sin(phases)
    return wr, wi


def narrowband_factor(profile: MultipathProfile) -> complex:
    """Narrowband fading factor h = sum_n alpha_n e^{-j phi_n}."""
    wr, wi = path_weights(profile.amplitudes, profile.phases)
    return complex(np.sum(wr), np.sum(wi))


def narrowband_factor_batch(amplitudes: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """Vectorized :func:`narrowband_factor` over shape (B, N) path arrays."""
    wr, wi = path_weights(amplitudes, phases)
    return np.sum(wr, axis=1) + 1j * np.sum(wi, axis=1)


def tap_halfwidth(pulse: PulseShape, delay_spread_sym: float) -> int:
    """Symmetric tap index bound covering the synchronized search window.

    For t_0 in [-1/2, T_m + 1/2] and delays in [0, T_m] (symbol units),
    p(t_0 + k - tau) vanishes for |k| > span/2 + ceil(T_m + 1/2).
    """
    return pulse.span // 2 + int(math.ceil(delay_spread_sym + SYNC_MARGIN))


def synchronize_batch(
    wr: np.ndarray,
    wi: np.ndarray,
    delays_sym: np.ndarray,
    pulse: PulseShape,
    delay_spread_sym: float,
    objective: str = "magnitude",
) -> np.ndarray:
    """Timing offsets for a batch of profiles, in symbol periods.

    Searches t in [-1/2, T_m + 1/2) on a 1/SYNC_RESOLUTION grid and
    refines the best bracket by golden-section to SYNC_TOL.

    Parameters
    ----------
    wr, wi : ndarray
        Path weights, shape (B, N), from :func:`path_weights`.
    delays_sym : ndarray
        Path delays in symbol periods, shape (B, N).
    pulse : PulseShape
    delay_spread_sym : float
        T_m in symbol periods; defines the search window.
    objective : str
        One of ``"magnitude"`` (max |c_0|^2), ``"component"``
        (max |Re c_0|), or ``"sir"``.
    """
    if objective not in SYNC_OBJECTIVES:
        raise ConfigurationError(f"unknown timing objective {objective!r}; expected one of {SYNC_OBJECTIVES}")
    lo = -SYNC_MARGIN
    hi = delay_spread_sym + SYNC_MARGIN
    if objective == "sir":
        return _synchronize_sir(wr, wi, delays_sym, pulse, delay_spread_sym, lo, hi)
    obj = OBJ_COMPONENT if objective == "component" else OBJ_MAGNITUDE
    return sync_batch(
        wr, wi, delays_sym, pulse.rolloff, pulse.half_span, lo, hi, float(SYNC_RESOLUTION), SYNC_TOL, obj
    )


def synchronize(profile: MultipathProfile, pulse: PulseShape, objective: str = "magnitude") -> float:
    """Receiver sampling instant t_0 for one profile, in seconds.

    Maximizes the configured timing objective over
    t in [-T_s/2, T_m + T_s/2); see :func:`synchronize_batch`.
    """
    t_s = profile.symbol_period
    wr, wi = path_weights(profile.amplitudes, profile.phases)
    t0_sym = synchronize_batch(
        wr[None, :],
        wi[None, :],
        profile.delays[None, :] / t_s,
        pulse,
        profile.delay_spread / t_s,
        objective,
    )
    return float(t0_sym[0]) * t_s


def synchronize_dual_batch(
    wr: np.ndarray,
    wi: np.ndarray,
    delays_sym: np.ndarray,
    pulse: PulseShape,
    delay_spread_sym: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-rail timing offsets for a batch of profiles, in symbol periods.

    The real and imaginary parts of c_0(t) are conditionally independent
    Gaussian processes given the delays, so each rail is synchronized at
    its own best instant: t_i maximizes |Re c_0(t)| and t_q maximizes
    |Im c_0(t)|. Sampling the in-phase rail at t_i and the quadrature
    rail at t_q concentrates both components away from zero, which is the
    deep-fading-avoidance mechanism, and leaves the two components of the
    resulting g identically distributed and nearly independent.
    """
    lo = -SYNC_MARGIN
    hi = delay_spread_sym + SYNC_MARGIN
    res = float(SYNC_RESOLUTION)
    t_i = sync_batch(wr, wi, delays_sym, pulse.rolloff, pulse.half_span, lo, hi, res, SYNC_TOL, OBJ_COMPONENT)
    # Swapping the weight arguments makes the component objective read
    # Im c_0(t) instead of Re c_0(t).
    t_q = sync_batch(wi, wr, delays_sym, pulse.rolloff, pulse.half_span, lo, hi, res, SYNC_TOL, OBJ_COMPONENT)
    return t_i, t_q


def synchronize_dual(profile: MultipathProfile, pulse: PulseShape) -> tuple[float, float]:
    """Per-rail sampling instants (t_i, t_q) for one profile, in seconds."""
    t_s = profile.symbol_period
    wr, wi = path_weights(profile.amplitudes, profile.phases)
    t_i, t_q = synchronize_dual_batch(
        wr[None, :],
        wi[None, :],
        profile.delays[None, :] / t_s,
        pulse,
        profile.delay_spread / t_s,
    )
    return float(t_i[0]) * t_s, float(t_q[0]) * t_s


def effective_taps_batch(
    wr: np.ndarray,
    wi: np.ndarray,
    delays_sym: np.ndarray,
    pulse: PulseShape,
    t0_sym: np.ndarray,
    k_side: int,
) -> np.ndarray:
    """Complex taps c_k, k in [-k_side, k_side], shape (B, 2 k_side + 1)."""
    return taps_batch(wr, wi, delays_sym, pulse.rolloff, pulse.half_span, t0_sym, -k_side, k_side)


def effective_taps(profile: MultipathProfile, pulse: PulseShape, t_0: float) -> DiscreteChannel:
    """Extract the symbol-spaced taps at sampling instant ``t_0`` (seconds).

    c_k = sum_n alpha_n e^{-j phi_n} p(t_0 + k T_s - tau_n). The index
    range covers the entire pulse support shifted by the delays, so no tap
    energy is truncated; k = 0 is always included.
    """
    if not math.isfinite(t_0):
        raise ParameterError(f"timing offset must be finite, got {t_0}")
    t_s = profile.symbol_period
    t0_sym = t_0 / t_s
    tm_sym = profile.delay_spread / t_s
    hs = pulse.half_span
    # p(t0 + k - tau) is nonzero only for k in [ -t0 - hs, T_m - t0 + hs ].
    k_lo = min(0, int(math.ceil(-t0_sym - hs)))
    k_hi = max(0, int(math.floor(tm_sym - t0_sym + hs)))
    wr, wi = path_weights(profile.amplitudes, profile.phases)
    taps = taps_batch(
        wr[None, :],
        wi[None, :],
        profile.delays[None, :] / t_s,
        pulse.rolloff,
        hs,
        np.array([t0_sym]),
        k_lo,
        k_hi,
    )
    return DiscreteChannel(taps=taps[0], k_min=k_lo, timing_offset=t_0, source_profile=profile)


def effective_taps_dual_batch(
    wr: np.ndarray,
    wi: np.ndarray,
    delays_sym: np.ndarray,
    pulse: PulseShape,
    ti_sym: np.ndarray,
    tq_sym: np.ndarray,
    k_side: int,
) -> np.ndarray:
    """Composite taps with each rail sampled at its own instant.

    Row k of the result is Re c_k(t_i) + j Im c_k(t_q): the in-phase rail
    of the receiver samples at t_i and the quadrature rail at t_q, so the
    effective discrete channel mixes the two tap sequences rail-wise.
    Shape (B, 2 k_side + 1).
    """
    rolloff, hs = pulse.rolloff, pulse.half_span
    taps_i = taps_batch(wr, wi, delays_sym, rolloff, hs, ti_sym, -k_side, k_side)
    taps_q = taps_batch(wr, wi, delays_sym, rolloff, hs, tq_sym, -k_side, k_side)
    return taps_i.real + 1j * taps_q.imag


def effective_taps_dual(
    profile: MultipathProfile, pulse: PulseShape, t_i: float, t_q: float
) -> DiscreteChannel:
    """Extract rail-wise taps at instants ``t_i``, ``t_q`` (seconds)."""
    if not (math.isfinite(t_i) and math.isfinite(t_q)):
        raise ParameterError(f"timing offsets must be finite, got ({t_i}, {t_q})")
    t_s = profile.symbol_period
    tm_sym = profile.delay_spread / t_s
    hs = pulse.half_span
    lo_sym = min(t_i, t_q) / t_s
    hi_sym = max(t_i, t_q) / t_s
    k_lo = min(0, int(math.ceil(-hi_sym - hs)))
    k_hi = max(0, int(math.floor(tm_sym - lo_sym + hs)))
    wr, wi = path_weights(profile.amplitudes, profile.phases)
    delays = profile.delays[None, :] / t_s
    taps_i = taps_batch(wr[None, :], wi[None, :], delays, pulse.rolloff, hs, np.array([t_i / t_s]), k_lo, k_hi)
    taps_q = taps_batch(wr[None, :], wi[None, :], delays, pulse.rolloff, hs, np.array([t_q / t_s]), k_lo, k_hi)
    taps = taps_i[0].real + 1j * taps_q[0].imag
    return DiscreteChannel(
        taps=taps, k_min=k_lo, timing_offset=t_i, source_profile=profile, quadrature_offset=t_q
    )


def _sir_metric(taps: np.ndarray, k0: int) -> np.ndarray:
    """Per-profile linear SIR from a (B, K) tap matrix; +inf when ISI-free."""
    power = np.abs(taps) ** 2
    desired = power[:, k0]
    residual = np.sum(power, axis=1) - desired
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(residual > 0.0, desired / np.maximum(residual, 1e-300), np.inf)
    return out


def _synchronize_sir(wr, wi, delays_sym, pulse, delay_spread_sym, lo, hi):
    """Grid plus golden-section timing search under the SIR objective.

    Mirrors the kernel searcher's discipline (same grid, same bracket,
    midpoint-vs-grid final choice) but evaluates the full tap vector at
    every candidate instant.
    """
    b = wr.shape[0]
    k_side = tap_halfwidth(pulse, delay_spread_sym)

    def metric(t0_sym):
        taps = effective_taps_batch(wr, wi, delays_sym, pulse, t0_sym, k_side)
        return _sir_metric(taps, k_side)

    res = float(SYNC_RESOLUTION)
    n_grid = max(1, int(round((hi - lo) * res)))
    best_m = np.full(b, -np.inf)
    best_t = np.full(b, lo)
    for i in range(n_grid):
        t = lo + i / res
        m = metric(np.full(b, t))
        better = m > best_m
        best_m = np.where(better, m, best_m)
        best_t = np.where(better, t, best_t)

    a = best_t - 1.0 / res
    bb = best_t + 1.0 / res
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    invphi2 = 1.0 - invphi
    c = a + invphi2 * (bb - a)
    d = a + invphi * (bb - a)
    fc = metric(c)
    fd = metric(d)
    n_iter = max(0, int(math.ceil(math.log(SYNC_TOL / (2.0 / res)) / math.log(invphi))))
    for _ in range(n_iter):
        left = fc > fd
        a = np.where(left, a, c)
        bb = np.where(left, d, bb)
        fc_old = fc
        fd_old = fd
        c = a + invphi2 * (bb - a)
        d = a + invphi * (bb - a)
        x = np.where(left, c, d)
        fx = metric(x)
        fc = np.where(left, fx, fd_old)
        fd = np.where(left, fc_old, fx)
    mid = 0.5 * (a + bb)
    f_mid = metric(mid)
    return np.where(f_mid >= best_m, mid, best_t)
