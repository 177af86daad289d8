"""Throughput comparison of the compiled and pure-NumPy kernel backends.

Times the four kernel entry points on identical inputs and reports the
per-call wall time of each backend plus the speedup. Run from the
repository root:

    python3 benchmarks/bench_kernels.py [--batch 20000] [--repeats 3]
"""

import argparse
import importlib
import time

import numpy as np

from mediumband import _backend
from mediumband import channel


def _inputs(batch: int, pds_percent: float, seed: int):
    protocol = channel.ChannelProtocol(10, pds_percent / 100.0, 1.0)
    pulse = channel.PulseShape()
    rng = np.random.default_rng(seed)
    amp, phs, dly = channel.sample_profile_batch(protocol, rng, batch)
    wr, wi = channel.path_weights(amp, phs)
    return pulse, wr, wi, dly, protocol.delay_spread


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--batch", type=int, default=20_000, help="profiles per kernel call")
    parser.add_argument("--repeats", type=int, default=3, help="timed repetitions, best kept")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = {"numpy": importlib.import_module("mediumband._kernels_np")}
    try:
        backends["cython"] = importlib.import_module("mediumband._kernels")
    except ImportError:
        print("compiled backend not built; timing the NumPy fallback only")

    pulse, wr, wi, dly, tm = _inputs(args.batch, 60.0, args.seed)
    lo, hi = -channel.SYNC_MARGIN, tm + channel.SYNC_MARGIN
    res = float(channel.SYNC_RESOLUTION)
    k_side = channel.tap_halfwidth(pulse, tm)
    t0 = np.random.default_rng(args.seed + 1).uniform(lo, hi, args.batch)
    x = np.random.default_rng(args.seed + 2).uniform(-6.0, 6.0, args.batch * 10)

    n_taps = 2 * k_side + 1
    rng = np.random.default_rng(args.seed + 3)
    taps = (rng.standard_normal((args.batch, n_taps)) + 1j * rng.standard_normal((args.batch, n_taps))) / 4.0
    bits = rng.integers(0, 2, (args.batch, 100), dtype=np.uint8)
    noise = (rng.standard_normal((args.batch, 100)) + 1j * rng.standard_normal((args.batch, 100))) / np.sqrt(2.0)

    cases = {
        "rc_pulse": lambda k: k.rc_pulse(x, pulse.rolloff, pulse.half_span),
        "sync_batch": lambda k: k.sync_batch(
            wr, wi, dly, pulse.rolloff, pulse.half_span, lo, hi, res, channel.SYNC_TOL, _backend.OBJ_COMPONENT
        ),
        "taps_batch": lambda k: k.taps_batch(
            wr, wi, dly, pulse.rolloff, pulse.half_span, t0, -k_side, k_side
        ),
        "ber_detect_batch": lambda k: k.ber_detect_batch(taps, k_side, bits, noise, 0.3),
    }

    print(f"batch={args.batch} repeats={args.repeats} (best wall time per call)")
    header = f"{'kernel':<18}" + "".join(f"{name:>12}" for name in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, call in cases.items():
        times = {bk: _time(lambda k=kernels: call(k), args.repeats) for bk, kernels in backends.items()}
        row = f"{name:<18}" + "".join(f"{times[bk] * 1e3:>10.1f}ms" for bk in backends)
        if len(backends) == 2:
            row += f"{times['numpy'] / times['cython']:>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
