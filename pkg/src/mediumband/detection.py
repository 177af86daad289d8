"""BPSK transmission over symbol-spaced channel taps and the three
receivers: 1-tap coherent detection, 2-tap successive interference
cancellation, and the ISI-free genie lower bound; plus the analytic
flat-Rayleigh baseline.

These are single-frame reference implementations in plain numpy; the
Monte Carlo driver in :mod:`mediumband.experiments` uses the batched
numeric kernels, which the tests pin against these functions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import DiscreteChannel
from .errors import DegenerateChannelError, ParameterError

FRAME_LEN_DEFAULT = 100


@dataclass(frozen=True, eq=False)
class Frame:
    """One BPSK frame.

    Parameters
    ----------
    bits : ndarray
        0/1 integers, length >= 1.
    """

    bits: np.ndarray

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=np.int8)
        object.__setattr__(self, "bits", bits)
        if bits.ndim != 1 or bits.size < 1:
            raise ParameterError("bits must be a nonempty 1-d array")
        if not np.all((bits == 0) | (bits == 1)):
            raise ParameterError("bits must be 0 or 1")

    @property
    def frame_len(self) -> int:
        return self.bits.size

    @property
    def symbols(self) -> np.ndarray:
        """BPSK mapping s = 1 - 2 b (bit 0 -> +1, bit 1 -> -1)."""
        return 1.0 - 2.0 * self.bits.astype(np.float64)

    @classmethod
    def random(cls, rng: np.random.Generator, frame_len: int = FRAME_LEN_DEFAULT) -> "Frame":
        return cls(bits=rng.integers(0, 2, size=frame_len, dtype=np.int8))


@dataclass(frozen=True)
class SnrPoint:
    """Average received SNR and the noise variance it implies.

    Parameters
    ----------
    gamma_bar_db : float
        Ratio of average received signal power to average noise power,
        decibels.
    signal_power : float
        Ensemble-average total tap power of the active channel protocol
        (1.0 for the unit-normalized narrowband channel).
    """

    gamma_bar_db: float
    signal_power: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.gamma_bar_db):
            raise ParameterError(f"gamma_bar_db must be finite, got {self.gamma_bar_db}")
        if not (math.isfinite(self.signal_power) and self.signal_power > 0.0):
            raise ParameterError(f"signal_power must be finite and > 0, got {self.signal_power}")

    @property
    def noise_variance(self) -> float:
        """Complex noise variance sigma_w^2 per received sample."""
        return self.signal_power * 10.0 ** (-self.gamma_bar_db / 10.0)


def _complex_noise(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    """White complex Gaussian noise with E|w|^2 = variance."""
    z = rng.standard_normal(2 * n)
    return math.sqrt(variance / 2.0) * (z[0::2] + 1j * z[1::2])


def transmit(frame: Frame, channel: DiscreteChannel, snr: SnrPoint, rng: np.random.Generator) -> np.ndarray:
    """Received samples r_k = sum_m c_m s_{k-m} + w_k.

    Symbols outside the frame are zero (zero-padded edges); the noise is
    white complex Gaussian with variance ``snr.noise_variance`` per
    sample. Returns a complex array of length ``frame.frame_len``.
    """
    s = frame.symbols
    L = s.size
    r = np.zeros(L, dtype=np.complex128)
    for m in range(channel.k_min, channel.k_max + 1):
        c = channel.tap(m)
        if c == 0.0 or abs(m) >= L:
            continue
        # s_{k-m}: shift the symbol sequence by m with zero padding.
        if m >= 0:
            r[m:] += c * s[: L - m]
        else:
            r[:m] += c * s[-m:]
    return r + _complex_noise(rng, L, snr.noise_variance)


def lower_bound_transmit(frame: Frame, g: complex, snr: SnrPoint, rng: np.random.Generator) -> np.ndarray:
    """ISI-free genie channel r_k = g s_k + w_k.

    The noise variance follows the same :class:`SnrPoint` convention as
    :func:`transmit` (signal power from the full-tap ensemble), so lower
    bound curves are directly comparable to the detector curves.
    """
    return g * frame.symbols + _complex_noise(rng, frame.frame_len, snr.noise_variance)


def detect_1tap(received: np.ndarray, g: complex) -> np.ndarray:
    """Coherent symbol-by-symbol decisions treating all ISI as noise.

    bit = 0 when Re(conj(g) r) >= 0, else 1; the tie at an exactly zero
    metric resolves to bit 0.
    """
    if g == 0.0:
        raise DegenerateChannelError("desired tap g is zero")
    metric = np.real(np.conj(g) * np.asarray(received))
    return (metric < 0.0).astype(np.int8)


def detect_2tap_sic(received: np.ndarray, c_0: complex, c_j: complex, j: int):
    """Two-tap successive interference cancellation decisions.

    Decisions run in an order that guarantees the interfering symbol of
    each decision is already detected: forward for a postcursor (j > 0),
    reverse for a precursor (j < 0). Each decision subtracts the
    reconstructed interferer, r'_k = r_k - c_j s_hat_{k-j}, then applies
    the 1-tap rule; out-of-frame symbols are treated as zero.

    Returns
    -------
    (ndarray, bool)
        Detected bits and a flag that is True when |c_j| > |c_0| (SIC
        ordering violated; detection still proceeds).
    """
    if c_0 == 0.0:
        raise DegenerateChannelError("desired tap c_0 is zero")
    if j == 0:
        raise ParameterError("interferer offset j must be nonzero")
    r = np.asarray(received)
    L = r.size
    violated = abs(c_j) > abs(c_0)
    bits = np.zeros(L, dtype=np.int8)
    s_hat = np.zeros(L)
    order = range(L) if j > 0 else range(L - 1, -1, -1)
    for k in order:
        src = k - j
        interferer = s_hat[src] if 0 <= src < L else 0.0
        metric = (np.conj(c_0) * (r[k] - c_j * interferer)).real
        bit = 0 if metric >= 0.0 else 1
        bits[k] = bit
        s_hat[k] = 1.0 - 2.0 * bit
    return bits, violated


def sic_interferer(channel: DiscreteChannel):
    """Largest-magnitude non-desired tap and its offset, ``(c_j, j)``.

    Ties resolve to the most negative offset, matching the batched
    kernel's first-maximum scan.
    """
    mags = np.abs(channel.taps)
    mags[-channel.k_min] = -1.0
    idx = int(np.argmax(mags))
    return complex(channel.taps[idx]), idx + channel.k_min


def rayleigh_ber_analytic(gamma_bar_db):
    """Average coherent-BPSK BER over flat Rayleigh fading, E|h|^2 = 1.

    0.5 (1 - sqrt(gbar / (1 + gbar))) with gbar in linear scale.
    """
    g = np.asarray(gamma_bar_db, dtype=np.float64)
    scalar = g.ndim == 0
    gbar = 10.0 ** (np.atleast_1d(g) / 10.0)
    out = 0.5 * (1.0 - np.sqrt(gbar / (1.0 + gbar)))
    return float(out[0]) if scalar else out


def snr_at_ber_analytic(ber: float) -> float:
    """Inverse of :func:`rayleigh_ber_analytic`, in dB."""
    if not (0.0 < ber < 0.5):
        raise ParameterError(f"ber must lie in (0, 0.5), got {ber}")
    # 1 - 2 ber = sqrt(g/(1+g))  =>  g = q^2 / (1 - q^2) with q = 1 - 2 ber.
    q = 1.0 - 2.0 * ber
    return 10.0 * math.log10(q * q / (1.0 - q * q))
