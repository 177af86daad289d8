"""Deterministic Monte Carlo experiment drivers: BER sweeps, marginal-PDF
ensembles, SIR trends, paired scatter ensembles, and their CSV/manifest
outputs.

Determinism contract: every random draw comes from a Philox stream seeded
by (master_seed, experiment id, point id, batch index), batches have fixed
sizes, and results are merged in batch order with the stopping decision
replayed over the ordered prefix. Outputs are therefore byte-identical for
a given config regardless of worker count.
"""

import gzip
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__, channel, statmodel
from .channel import ChannelProtocol, PulseShape
from .detection import rayleigh_ber_analytic
from .errors import ConfigurationError
from ._backend import ber_detect_batch

EXP_CALIBRATION = 0
EXP_BER_MEDIUMBAND = 1
EXP_PDF = 2
EXP_SIR = 3
EXP_SCATTER = 4
EXP_BER_NARROWBAND = 5

SCHEME_NARROWBAND = "narrowband-rayleigh-sim"
SCHEME_1TAP = "1-tap"
SCHEME_2TAP = "2-tap-sic"
SCHEME_LOWER = "lower-bound"
SCHEME_ANALYTIC = "rayleigh-analytic"
MEDIUMBAND_SCHEMES = (SCHEME_1TAP, SCHEME_2TAP, SCHEME_LOWER)
ALL_SCHEMES = (SCHEME_NARROWBAND, SCHEME_1TAP, SCHEME_2TAP, SCHEME_LOWER, SCHEME_ANALYTIC)

# Reported BER points with fewer errors than this carry the undersampled
# flag (readable off the errors column downstream).
UNDERSAMPLED_ERRORS = 100

# Timing rules a config may select. "dual-component" synchronizes each
# quadrature rail at its own instant and is the production rule; the
# single-instant objectives are kept for comparison runs.
SYNC_OBJECTIVES = ("dual-component",) + channel.SYNC_OBJECTIVES

_CALIBRATION_PROFILES = 100_000


@dataclass(frozen=True)
class SimConfig:
    """Full experiment description.

    Defaults reproduce the reference protocol: 10 equal-power Rayleigh
    paths, uniform delays, raised-cosine pulse with rolloff 0.22 spanning
    12 symbol periods, BPSK, 100-bit frames.
    """

    n_paths: int = 10
    symbol_period: float = 1.0
    rolloff: float = 0.22
    span: int = 12
    frame_len: int = 100
    pds_list: tuple = (20.0,)
    snr_grid_db: tuple = tuple(float(s) for s in range(0, 51, 5))
    schemes: tuple = ALL_SCHEMES
    target_errors: int = 200
    max_bits: int = 100_000_000
    pdf_samples: int = 1_000_000
    sir_realizations: int = 10_000
    scatter_samples: int = 100_000
    master_seed: int = 1
    sync_objective: str = "dual-component"
    ber_batch_frames: int = 1000
    ensemble_batch: int = 25_000

    def __post_init__(self):
        object.__setattr__(self, "pds_list", tuple(float(p) for p in self.pds_list))
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))
        object.__setattr__(self, "schemes", tuple(str(s) for s in self.schemes))
        if self.n_paths < 1:
            raise ConfigurationError(f"n_paths must be >= 1, got {self.n_paths}")
        if not (math.isfinite(self.symbol_period) and self.symbol_period > 0.0):
            raise ConfigurationError(f"symbol_period must be > 0, got {self.symbol_period}")
        if not (0.0 < self.rolloff <= 1.0):
            raise ConfigurationError(f"rolloff must be in (0, 1], got {self.rolloff}")
        if self.span < 2 or self.span % 2 != 0:
            raise ConfigurationError(f"span must be an even integer >= 2, got {self.span}")
        if self.frame_len < 1:
            raise ConfigurationError(f"frame_len must be >= 1, got {self.frame_len}")
        for p in self.pds_list:
            if not (math.isfinite(p) and 0.0 <= p <= 100.0):
                raise ConfigurationError(f"pds values must lie in [0, 100], got {p}")
        if not self.pds_list:
            raise ConfigurationError("pds_list must not be empty")
        for s in self.snr_grid_db:
            if not (math.isfinite(s) and -100.0 <= s <= 200.0):
                raise ConfigurationError(f"snr values must lie in [-100, 200] dB, got {s}")
        if not self.snr_grid_db:
            raise ConfigurationError("snr_grid_db must not be empty")
        unknown = set(self.schemes) - set(ALL_SCHEMES)
        if unknown:
            raise ConfigurationError(f"unknown schemes {sorted(unknown)}; known: {ALL_SCHEMES}")
        if not self.schemes:
            raise ConfigurationError("schemes must not be empty")
        if self.target_errors < 1:
            raise ConfigurationError(f"target_errors must be >= 1, got {self.target_errors}")
        if self.max_bits < self.frame_len * self.ber_batch_frames:
            raise ConfigurationError("max_bits must cover at least one frame batch")
        for name in ("pdf_samples", "sir_realizations", "scatter_samples", "ber_batch_frames", "ensemble_batch"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not (0 <= self.master_seed < 2**64):
            raise ConfigurationError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.sync_objective not in SYNC_OBJECTIVES:
            raise ConfigurationError(
                f"sync_objective must be one of {SYNC_OBJECTIVES}, got {self.sync_objective!r}"
            )

    def protocol(self, pds_percent: float) -> ChannelProtocol:
        return ChannelProtocol(
            n_paths=self.n_paths,
            delay_spread=channel.delay_spread_for_pds(pds_percent, self.symbol_period),
            symbol_period=self.symbol_period,
        )

    def pulse(self) -> PulseShape:
        return PulseShape(rolloff=self.rolloff, span=self.span)

    def to_dict(self) -> dict:
        return {f.name: list(v) if isinstance(v := getattr(self, f.name), tuple) else v for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys {sorted(unknown)}")
        kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
        return cls(**kwargs)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                lines.append(f"{f.name} = {','.join(str(x) for x in v)}")
            else:
                lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SimConfig":
        """Parse the flat ``key = value`` config format (# comments allowed).

        A JSON run manifest (or its ``config`` object) is also accepted,
        so a manifest can be fed straight back to reproduce a run.
        """
        stripped = text.lstrip()
        if stripped.startswith("{"):
            data = json.loads(text)
            return cls.from_dict(data.get("config", data))
        int_keys = {
            "n_paths", "span", "frame_len", "target_errors", "max_bits", "pdf_samples",
            "sir_realizations", "scatter_samples", "master_seed", "ber_batch_frames", "ensemble_batch",
        }
        float_keys = {"symbol_period", "rolloff"}
        float_tuple_keys = {"pds_list", "snr_grid_db"}
        str_tuple_keys = {"schemes"}
        kwargs = {}
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"config line {line_no}: expected 'key = value', got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            try:
                if key in int_keys:
                    kwargs[key] = int(value)
                elif key in float_keys:
                    kwargs[key] = float(value)
                elif key in float_tuple_keys:
                    kwargs[key] = tuple(float(x) for x in value.split(",") if x.strip())
                elif key in str_tuple_keys:
                    kwargs[key] = tuple(x.strip() for x in value.split(",") if x.strip())
                elif key == "sync_objective":
                    kwargs[key] = value
                else:
                    raise ConfigurationError(f"config line {line_no}: unknown key {key!r}")
            except ValueError as exc:
                raise ConfigurationError(f"config line {line_no}: bad value for {key!r}: {value!r}") from exc
        return cls(**kwargs)


@dataclass(frozen=True)
class BerPoint:
    gamma_bar_db: float
    bits: int
    errors: int

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits > 0 else math.nan

    @property
    def stderr(self) -> float:
        if self.bits <= 0:
            return 0.0
        p = self.ber
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.bits)

    @property
    def undersampled(self) -> bool:
        return self.bits > 0 and self.errors < UNDERSAMPLED_ERRORS


@dataclass(frozen=True)
class BerCurve:
    scheme: str
    pds: float
    points: tuple


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """One PDS point's synchronized-tap ensemble and its summaries."""

    pds: float
    re_g: np.ndarray
    im_g: np.ndarray
    fit_result: statmodel.FitResult
    dip: statmodel.DipStatistic
    mean_sir_db: float

    @property
    def n_samples(self) -> int:
        return self.re_g.size


def _rng(master_seed: int, exp_id: int, a: int = 0, b: int = 0, c: int = 0) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(exp_id, a, b, c))
    return np.random.Generator(np.random.Philox(seq))


def _pds_key(pds_percent: float) -> int:
    return int(round(pds_percent * 1000.0))


def _snr_key(snr_db: float) -> int:
    return int(round((snr_db + 100.0) * 1000.0))


def _map_ordered(fn, n_tasks: int, threads: int):
    """Evaluate fn(0..n_tasks-1), returning results in index order."""
    if threads <= 1 or n_tasks <= 1:
        return [fn(i) for i in range(n_tasks)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n_tasks)))


def _ensemble_batch_sizes(total: int, batch: int):
    sizes = [batch] * (total // batch)
    if total % batch:
        sizes.append(total % batch)
    return sizes


def _synced_taps(config: SimConfig, protocol: ChannelProtocol, pulse: PulseShape, rng, n: int):
    """Draw n profiles, synchronize, and extract the full tap matrix."""
    amp, phs, dly = channel.sample_profile_batch(protocol, rng, n)
    wr, wi = channel.path_weights(amp, phs)
    t_s = protocol.symbol_period
    tm_sym = protocol.delay_spread / t_s
    delays_sym = dly / t_s
    k_side = channel.tap_halfwidth(pulse, tm_sym)
    if config.sync_objective == "dual-component":
        t_i, t_q = channel.synchronize_dual_batch(wr, wi, delays_sym, pulse, tm_sym)
        taps = channel.effective_taps_dual_batch(wr, wi, delays_sym, pulse, t_i, t_q, k_side)
    else:
        t0 = channel.synchronize_batch(wr, wi, delays_sym, pulse, tm_sym, config.sync_objective)
        taps = channel.effective_taps_batch(wr, wi, delays_sym, pulse, t0, k_side)
    return taps, k_side, (amp, phs)


def signal_power(config: SimConfig, pds_percent: float, threads: int = 1) -> float:
    """Ensemble-average total tap power under the active protocol.

    Defines the SnrPoint signal-power normalization. The PDS=0 channel is
    the exact unit-power single tap, so its value is 1 by construction.
    """
    if pds_percent == 0.0:
        return 1.0
    protocol = config.protocol(pds_percent)
    pulse = config.pulse()
    pkey = _pds_key(pds_percent)
    sizes = _ensemble_batch_sizes(_CALIBRATION_PROFILES, config.ensemble_batch)

    def task(i: int) -> float:
        rng = _rng(config.master_seed, EXP_CALIBRATION, pkey, 0, i)
        taps, _, _ = _synced_taps(config, protocol, pulse, rng, sizes[i])
        return float(np.sum(np.abs(taps) ** 2))

    totals = _map_ordered(task, len(sizes), threads)
    return float(sum(totals) / _CALIBRATION_PROFILES)


def _ber_batch_mediumband(config, protocol, pulse, pkey, skey, batch_idx, sigma_w):
    rng = _rng(config.master_seed, EXP_BER_MEDIUMBAND, pkey, skey, batch_idx)
    n_frames = config.ber_batch_frames
    frame_len = config.frame_len
    taps, k_side, _ = _synced_taps(config, protocol, pulse, rng, n_frames)
    bits = rng.integers(0, 2, size=(n_frames, frame_len), dtype=np.uint8)
    z = rng.standard_normal((n_frames, frame_len, 2))
    noise = (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)
    e1, e2, elb, _ = ber_detect_batch(taps, k_side, bits, noise, sigma_w)
    return {SCHEME_1TAP: e1, SCHEME_2TAP: e2, SCHEME_LOWER: elb}


def _ber_batch_narrowband(config, protocol_flat, skey, batch_idx, sigma_w):
    rng = _rng(config.master_seed, EXP_BER_NARROWBAND, 0, skey, batch_idx)
    n_frames = config.ber_batch_frames
    frame_len = config.frame_len
    amp, phs, _ = channel.sample_profile_batch(protocol_flat, rng, n_frames)
    h = channel.narrowband_factor_batch(amp, phs)
    bits = rng.integers(0, 2, size=(n_frames, frame_len), dtype=np.uint8)
    z = rng.standard_normal((n_frames, frame_len, 2))
    noise = (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)
    e1, _, _, _ = ber_detect_batch(h[:, None], 0, bits, noise, sigma_w)
    return {SCHEME_NARROWBAND: e1}


def _run_ber_point(config: SimConfig, tracked, batch_fn, threads: int):
    """Run frame batches until every tracked scheme meets the error target.

    Batches are merged in index order and the stopping batch is located by
    replaying cumulative counts over that order, so the result does not
    depend on how many batches a wave computed in parallel.
    """
    bits_per_batch = config.ber_batch_frames * config.frame_len
    max_batches = max(1, config.max_bits // bits_per_batch)
    wave = max(1, threads)
    counts = []

    def stop_index() -> int:
        cum = dict.fromkeys(tracked, 0)
        for i, batch_counts in enumerate(counts):
            for s in tracked:
                cum[s] += batch_counts[s]
            if all(cum[s] >= config.target_errors for s in tracked) or i + 1 >= max_batches:
                return i
        return -1

    while True:
        start = len(counts)
        n_new = min(wave, max_batches - start)
        counts.extend(_map_ordered(lambda i: batch_fn(start + i), n_new, threads))
        stop = stop_index()
        if stop >= 0:
            break

    totals = dict.fromkeys(tracked, 0)
    for batch_counts in counts[: stop + 1]:
        for s in tracked:
            totals[s] += batch_counts[s]
    bits = (stop + 1) * bits_per_batch
    return {s: BerPoint(gamma_bar_db=math.nan, bits=bits, errors=totals[s]) for s in tracked}


def run_ber_sweep(config: SimConfig, threads: int = 1) -> list:
    """Monte Carlo BER curves for every configured (scheme, PDS, SNR).

    The mediumband schemes (1-tap, 2-tap SIC, lower bound) share frames,
    channels, and noise pointwise, so their curves are paired; the
    narrowband simulation and the analytic reference are PDS-independent
    and reported once, labeled PDS 0.
    """
    pulse = config.pulse()
    curves = []

    if SCHEME_NARROWBAND in config.schemes:
        protocol_flat = config.protocol(0.0)
        points = []
        for snr_db in config.snr_grid_db:
            sigma_w = math.sqrt(10.0 ** (-snr_db / 10.0))
            skey = _snr_key(snr_db)
            got = _run_ber_point(
                config,
                (SCHEME_NARROWBAND,),
                lambda i, sk=skey, sw=sigma_w: _ber_batch_narrowband(config, protocol_flat, sk, i, sw),
                threads,
            )
            points.append(replace(got[SCHEME_NARROWBAND], gamma_bar_db=snr_db))
        curves.append(BerCurve(scheme=SCHEME_NARROWBAND, pds=0.0, points=tuple(points)))

    if SCHEME_ANALYTIC in config.schemes:
        points = tuple(
            BerPoint(gamma_bar_db=snr_db, bits=0, errors=0) for snr_db in config.snr_grid_db
        )
        curves.append(BerCurve(scheme=SCHEME_ANALYTIC, pds=0.0, points=points))

    tracked = tuple(s for s in MEDIUMBAND_SCHEMES if s in config.schemes)
    if tracked:
        for pds_percent in config.pds_list:
            protocol = config.protocol(pds_percent)
            p_signal = signal_power(config, pds_percent, threads)
            pkey = _pds_key(pds_percent)
            per_scheme_points = {s: [] for s in tracked}
            for snr_db in config.snr_grid_db:
                sigma_w = math.sqrt(p_signal * 10.0 ** (-snr_db / 10.0))
                skey = _snr_key(snr_db)
                got = _run_ber_point(
                    config,
                    tracked,
                    lambda i, sk=skey, sw=sigma_w: _ber_batch_mediumband(
                        config, protocol, pulse, pkey, sk, i, sw
                    ),
                    threads,
                )
                for s in tracked:
                    per_scheme_points[s].append(replace(got[s], gamma_bar_db=snr_db))
            for s in tracked:
                curves.append(BerCurve(scheme=s, pds=pds_percent, points=tuple(per_scheme_points[s])))
    return curves


def _ensemble_g_and_sir(config: SimConfig, pds_percent: float, total: int, exp_id: int, threads: int):
    """Synchronized g samples and per-realization linear SIR for one PDS."""
    protocol = config.protocol(pds_percent)
    pulse = config.pulse()
    pkey = _pds_key(pds_percent)
    sizes = _ensemble_batch_sizes(total, config.ensemble_batch)

    def task(i: int):
        rng = _rng(config.master_seed, exp_id, pkey, 0, i)
        taps, k_side, _ = _synced_taps(config, protocol, pulse, rng, sizes[i])
        g = taps[:, k_side]
        power = np.abs(taps) ** 2
        residual = np.sum(power, axis=1) - power[:, k_side]
        with np.errstate(divide="ignore"):
            sir_db = 10.0 * np.log10(power[:, k_side] / np.maximum(residual, 1e-300))
        return g, sir_db

    parts = _map_ordered(task, len(sizes), threads)
    g = np.concatenate([p[0] for p in parts])
    sir_db = np.concatenate([p[1] for p in parts])
    return g, sir_db


def run_pdf_ensemble(config: SimConfig, pds_percent: float = None, threads: int = 1) -> EnsembleStats:
    """Synchronized-g ensemble with fitted hole parameters and dip verdict.

    Draws ``config.pdf_samples`` profiles at one PDS (default: the first
    configured), fits the Gaussian-hole model to Re{g}, and summarizes
    bimodality and mean SIR. Fit failures propagate with partial results
    attached to the exception.
    """
    if pds_percent is None:
        pds_percent = config.pds_list[0]
    g, sir_db = _ensemble_g_and_sir(config, pds_percent, config.pdf_samples, EXP_PDF, threads)
    fit_result = statmodel.fit(g.real)
    dip = statmodel.dip_statistic(g.real) if g.size >= 100_000 else statmodel.DipStatistic(0.0, False)
    return EnsembleStats(
        pds=pds_percent,
        re_g=np.ascontiguousarray(g.real),
        im_g=np.ascontiguousarray(g.imag),
        fit_result=fit_result,
        dip=dip,
        mean_sir_db=float(np.mean(sir_db)),
    )


def run_sir_sweep(config: SimConfig, threads: int = 1) -> list:
    """Ensemble-mean SIR (dB) per configured PDS.

    Returns a list of ``(pds, mean_sir_db, realizations)`` rows in
    ``config.pds_list`` order.
    """
    rows = []
    for pds_percent in config.pds_list:
        _, sir_db = _ensemble_g_and_sir(config, pds_percent, config.sir_realizations, EXP_SIR, threads)
        rows.append((pds_percent, float(np.mean(sir_db)), int(sir_db.size)))
    return rows


def run_scatter(config: SimConfig, pds_percent: float = None, threads: int = 1):
    """Matched-seed narrowband and synchronized factors from identical profiles.

    Returns ``(h, g)`` complex arrays of length ``config.scatter_samples``;
    ``h[i]`` and ``g[i]`` come from the same multipath realization.
    """
    if pds_percent is None:
        pds_percent = config.pds_list[0]
    protocol = config.protocol(pds_percent)
    pulse = config.pulse()
    pkey = _pds_key(pds_percent)
    sizes = _ensemble_batch_sizes(config.scatter_samples, config.ensemble_batch)

    def task(i: int):
        rng = _rng(config.master_seed, EXP_SCATTER, pkey, 0, i)
        taps, k_side, (amp, phs) = _synced_taps(config, protocol, pulse, rng, sizes[i])
        return channel.narrowband_factor_batch(amp, phs), taps[:, k_side]

    parts = _map_ordered(task, len(sizes), threads)
    h = np.concatenate([p[0] for p in parts])
    g = np.concatenate([p[1] for p in parts])
    return h, g


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17e")


def _write_csv(path: str, header, rows, gzip_out: bool = False):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) if not isinstance(v, str) else v for v in row) + "\n")
    data = buf.getvalue().encode()
    if gzip_out:
        # mtime pinned and filename omitted so identical runs produce
        # identical bytes regardless of output path.
        with open(path, "wb") as fh:
            with gzip.GzipFile(filename="", fileobj=fh, mode="wb", mtime=0) as gz:
                gz.write(data)
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def write_ber_csv(path: str, curves):
    rows = []
    for curve in curves:
        for pt in curve.points:
            ber = rayleigh_ber_analytic(pt.gamma_bar_db) if curve.scheme == SCHEME_ANALYTIC else pt.ber
            stderr = 0.0 if curve.scheme == SCHEME_ANALYTIC else pt.stderr
            rows.append((curve.scheme, curve.pds, pt.gamma_bar_db, pt.bits, pt.errors, ber, stderr))
    _write_csv(path, ("scheme", "pds", "gamma_bar_db", "bits", "errors", "ber", "stderr"), rows)


def write_pdf_csv(path: str, stats_list, gzip_out: bool = False):
    rows = []
    for stats in stats_list:
        for i in range(stats.n_samples):
            rows.append((stats.pds, i, stats.re_g[i], stats.im_g[i]))
    _write_csv(path, ("pds", "sample_index", "re_g", "im_g"), rows, gzip_out=gzip_out)


def write_fit_csv(path: str, fit_rows):
    """fit_rows: iterable of (pds, FitResult)."""
    rows = []
    for pds_percent, result in fit_rows:
        p = result.params
        rows.append((pds_percent, p.K, p.sigma_I_sq, p.sigma_O_sq, result.loglik))
    _write_csv(path, ("pds", "K", "sigma_I_sq", "sigma_O_sq", "loglik"), rows)


def write_sir_csv(path: str, sir_rows):
    _write_csv(path, ("pds", "mean_sir_db", "realizations"), sir_rows)


def write_scatter_csv(path: str, pds_percent: float, h: np.ndarray, g: np.ndarray, gzip_out: bool = False):
    rows = (
        (pds_percent, i, h[i].real, h[i].imag, g[i].real, g[i].imag)
        for i in range(h.size)
    )
    _write_csv(path, ("pds", "sample_index", "re_h", "im_h", "re_g", "im_g"), rows, gzip_out=gzip_out)


def write_manifest(path: str, config: SimConfig, command: str, outputs, started: float, finished: float, extra: dict = None):
    manifest = {
        "tool": "mediumband",
        "version": __version__,
        "command": command,
        "config": config.to_dict(),
        "master_seed": config.master_seed,
        "started": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "finished": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(finished)),
        "wall_seconds": round(finished - started, 3),
        "outputs": list(outputs),
    }
    if extra:
        manifest.update(extra)
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
