"""Parity between the compiled kernels and the pure-NumPy fallback."""

import os
import subprocess
import sys

import numpy as np
import pytest

from mediumband import _backend
from mediumband import _kernels_np
from mediumband import channel as ch

_kernels = pytest.importorskip("mediumband._kernels")

PULSE = ch.PulseShape()


def _profiles(n: int, pds: float = 60.0, seed: int = 101):
    protocol = ch.ChannelProtocol(n_paths=10, delay_spread=pds / 100.0, symbol_period=1.0)
    amp, phs, dly = ch.sample_profile_batch(protocol, np.random.default_rng(seed), n)
    wr, wi = ch.path_weights(amp, phs)
    return wr, wi, dly, protocol.delay_spread


def test_pulse_parity():
    rng = np.random.default_rng(1)
    x = np.concatenate([
        rng.uniform(-7.0, 7.0, 4000),
        np.arange(-6.0, 7.0),
        [1.0 / (2.0 * PULSE.rolloff), -1.0 / (2.0 * PULSE.rolloff)],
        [6.0 - 1e-12, -6.0 + 1e-12, 6.0 + 1e-12],
    ])
    a = _kernels.rc_pulse(x, PULSE.rolloff, PULSE.half_span)
    b = _kernels_np.rc_pulse(x, PULSE.rolloff, PULSE.half_span)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_sync_parity():
    wr, wi, dly, tm = _profiles(64)
    lo, hi = -ch.SYNC_MARGIN, tm + ch.SYNC_MARGIN
    res = float(ch.SYNC_RESOLUTION)
    for objective in (_backend.OBJ_MAGNITUDE, _backend.OBJ_COMPONENT):
        a = _kernels.sync_batch(wr, wi, dly, PULSE.rolloff, PULSE.half_span,
                                lo, hi, res, ch.SYNC_TOL, objective)
        b = _kernels_np.sync_batch(wr, wi, dly, PULSE.rolloff, PULSE.half_span,
                                   lo, hi, res, ch.SYNC_TOL, objective)
        assert np.max(np.abs(a - b)) < 2.0 * ch.SYNC_TOL


def test_taps_parity():
    wr, wi, dly, tm = _profiles(64)
    t0 = np.random.default_rng(2).uniform(-0.5, tm + 0.5, wr.shape[0])
    k_side = ch.tap_halfwidth(PULSE, tm)
    a = _kernels.taps_batch(wr, wi, dly, PULSE.rolloff, PULSE.half_span, t0, -k_side, k_side)
    b = _kernels_np.taps_batch(wr, wi, dly, PULSE.rolloff, PULSE.half_span, t0, -k_side, k_side)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_ber_detect_parity():
    rng = np.random.default_rng(3)
    wr, wi, dly, tm = _profiles(200)
    t_i, t_q = ch.synchronize_dual_batch(wr, wi, dly, PULSE, tm)
    k_side = ch.tap_halfwidth(PULSE, tm)
    taps = ch.effective_taps_dual_batch(wr, wi, dly, PULSE, t_i, t_q, k_side)
    frame_len = 100
    bits = rng.integers(0, 2, size=(200, frame_len), dtype=np.uint8)
    noise = (rng.standard_normal((200, frame_len)) + 1j * rng.standard_normal((200, frame_len)))
    sigma_w = 0.4
    a = _kernels.ber_detect_batch(taps, k_side, bits, noise, sigma_w)
    b = _kernels_np.ber_detect_batch(taps, k_side, bits, noise, sigma_w)
    # Integer error counts must agree exactly.
    assert tuple(int(x) for x in a) == tuple(int(x) for x in b)


def test_full_pipeline_parity():
    wr, wi, dly, tm = _profiles(32, pds=40.0, seed=7)
    previous = _backend.set_backend(_kernels_np)
    try:
        t_np = ch.synchronize_dual_batch(wr, wi, dly, PULSE, tm)
        taps_np = ch.effective_taps_dual_batch(
            wr, wi, dly, PULSE, t_np[0], t_np[1], ch.tap_halfwidth(PULSE, tm)
        )
    finally:
        _backend.set_backend(previous)
    t_cy = ch.synchronize_dual_batch(wr, wi, dly, PULSE, tm)
    taps_cy = ch.effective_taps_dual_batch(
        wr, wi, dly, PULSE, t_cy[0], t_cy[1], ch.tap_halfwidth(PULSE, tm)
    )
    assert np.max(np.abs(t_np[0] - t_cy[0])) < 2.0 * ch.SYNC_TOL
    assert np.max(np.abs(t_np[1] - t_cy[1])) < 2.0 * ch.SYNC_TOL
    # Tap differences are bounded by the timing tolerance times the pulse
    # slope, far below any statistical scale used in the experiments.
    assert np.max(np.abs(taps_np - taps_cy)) < 1e-5


def test_backend_env_forcing():
    script = "from mediumband import _backend; print(_backend.backend_name())"
    for forced in ("python", "cython"):
        env = dict(os.environ, MEDIUMBAND_BACKEND=forced)
        out = subprocess.run(
            [sys.executable, "-c", script], env=env, capture_output=True, text=True
        )
        assert out.returncode == 0, out.stderr
        assert out.stdout.strip() == forced


def test_set_backend_swaps_and_restores():
    assert _backend.get_backend() is _kernels
    previous = _backend.set_backend(_kernels_np)
    try:
        assert previous is _kernels
        assert _backend.backend_name() == "python"
    finally:
        _backend.set_backend(previous)
    assert _backend.backend_name() == "cython"
