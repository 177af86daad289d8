"""Command-line front end for the simulation experiments.

Subcommands: ``ber | pdf | sir | scatter | fit``. Each resolves a
SimConfig from built-in defaults, an optional ``--config`` file (flat
``key = value`` text or a previous run manifest), and command-line flags
(flags win), then writes ``<cmd>.csv`` plus ``<cmd>_manifest.json`` into
``--out-dir``. ``MEDIUMBAND_SEED`` supplies the master seed when neither
a flag nor the config file does.

Exit codes: 0 success, 2 configuration or input error, 3 runtime or fit
failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import gzip
import json
import math
import os
import sys
import time

import numpy as np

from . import experiments, statmodel
from .errors import ConfigurationError, FitFailure, MediumbandError, ParameterError
from .experiments import SimConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

# Fit inputs below this many samples per PDS are rejected.
MIN_FIT_INPUT_SAMPLES = 10_000


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", metavar="FILE", help="config file (key = value lines, or a run manifest)")
    parser.add_argument("--seed", type=int, help="master seed (overrides config file and MEDIUMBAND_SEED)")
    parser.add_argument("--out-dir", default=".", metavar="DIR", help="output directory (default: current)")
    parser.add_argument("--threads", type=int, default=None, help="worker cap (default: machine parallelism)")
    parser.add_argument(
        "--pds", type=float, action="append", metavar="PERCENT", help="percentage delay spread; repeatable"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mediumband",
        description="Monte Carlo experiments for mediumband fading channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ber = sub.add_parser("ber", help="BER-vs-SNR sweep for all schemes")
    _add_common(p_ber)
    p_ber.add_argument("--snr-min", type=float, default=None)
    p_ber.add_argument("--snr-max", type=float, default=None)
    p_ber.add_argument("--snr-step", type=float, default=None)
    p_ber.add_argument("--schemes", help="comma-separated scheme list (default: all)")
    p_ber.add_argument("--target-errors", type=int, help="stop each point after this many bit errors")
    p_ber.add_argument("--max-bits", type=int, help="hard per-point bit budget")

    p_pdf = sub.add_parser("pdf", help="synchronized-g sample ensemble per PDS")
    _add_common(p_pdf)
    p_pdf.add_argument("--samples", type=int, help="ensemble size per PDS")
    p_pdf.add_argument("--gzip", action="store_true", help="gzip pdf.csv")

    p_sir = sub.add_parser("sir", help="mean SIR per PDS")
    _add_common(p_sir)
    p_sir.add_argument("--realizations", type=int, help="channels per PDS")

    p_scatter = sub.add_parser("scatter", help="paired narrowband/synchronized factor samples")
    _add_common(p_scatter)
    p_scatter.add_argument("--samples", type=int, help="pair count per PDS")
    p_scatter.add_argument("--gzip", action="store_true", help="gzip scatter.csv")

    p_fit = sub.add_parser("fit", help="fit the hole model to samples")
    _add_common(p_fit)
    p_fit.add_argument("--input", metavar="PDF_CSV", help="fit previously generated pdf.csv[.gz] instead of simulating")
    p_fit.add_argument("--samples", type=int, help="ensemble size per PDS when simulating")
    return parser


def _snr_grid(snr_min: float, snr_max: float, snr_step: float) -> tuple:
    if snr_step <= 0.0:
        raise ConfigurationError(f"--snr-step must be > 0, got {snr_step}")
    if snr_max < snr_min:
        raise ConfigurationError(f"--snr-max must be >= --snr-min, got {snr_max} < {snr_min}")
    n = int(math.floor((snr_max - snr_min) / snr_step + 1e-9))
    return tuple(snr_min + i * snr_step for i in range(n + 1))


def resolve_config(args) -> SimConfig:
    """Defaults, then config file, then flags; seed falls back to the env."""
    config_had_seed = False
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
        config = SimConfig.from_text(text)
        stripped = text.lstrip()
        if stripped.startswith("{"):
            data = json.loads(text)
            config_had_seed = "master_seed" in data.get("config", data) or "master_seed" in data
        else:
            keys = [line.split("=", 1)[0].strip() for line in text.splitlines() if "=" in line.split("#", 1)[0]]
            config_had_seed = "master_seed" in keys
    else:
        config = SimConfig()

    overrides = {}
    if args.pds:
        overrides["pds_list"] = tuple(args.pds)
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    elif not config_had_seed and os.environ.get("MEDIUMBAND_SEED"):
        try:
            overrides["master_seed"] = int(os.environ["MEDIUMBAND_SEED"])
        except ValueError:
            raise ConfigurationError(
                f"MEDIUMBAND_SEED must be an integer, got {os.environ['MEDIUMBAND_SEED']!r}"
            )

    cmd = args.command
    if cmd == "ber":
        if any(v is not None for v in (args.snr_min, args.snr_max, args.snr_step)):
            snr_min = 0.0 if args.snr_min is None else args.snr_min
            snr_max = 50.0 if args.snr_max is None else args.snr_max
            snr_step = 5.0 if args.snr_step is None else args.snr_step
            overrides["snr_grid_db"] = _snr_grid(snr_min, snr_max, snr_step)
        if args.schemes:
            overrides["schemes"] = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
        if args.target_errors is not None:
            overrides["target_errors"] = args.target_errors
        if args.max_bits is not None:
            overrides["max_bits"] = args.max_bits
    elif cmd == "pdf" or (cmd == "fit" and not args.input):
        if args.samples is not None:
            overrides["pdf_samples"] = args.samples
    elif cmd == "sir":
        if args.realizations is not None:
            overrides["sir_realizations"] = args.realizations
    elif cmd == "scatter":
        if args.samples is not None:
            overrides["scatter_samples"] = args.samples

    return dataclasses.replace(config, **overrides) if overrides else config


def _threads(args) -> int:
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigurationError(f"--threads must be >= 1, got {args.threads}")
        return args.threads
    return os.cpu_count() or 1


def _out_path(args, name: str) -> str:
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, name)


def _finish(args, config: SimConfig, started: float, outputs, extra: dict = None) -> int:
    manifest = _out_path(args, f"{args.command}_manifest.json")
    experiments.write_manifest(manifest, config, args.command_line, outputs, started, time.time(), extra=extra)
    for path in list(outputs) + [manifest]:
        print(path)
    return EXIT_OK


def cmd_ber(args) -> int:
    config = resolve_config(args)
    started = time.time()
    curves = experiments.run_ber_sweep(config, threads=_threads(args))
    out = _out_path(args, "ber.csv")
    experiments.write_ber_csv(out, curves)
    return _finish(args, config, started, [out])


def cmd_pdf(args) -> int:
    config = resolve_config(args)
    started = time.time()
    threads = _threads(args)
    stats_list = [experiments.run_pdf_ensemble(config, p, threads=threads) for p in config.pds_list]
    out = _out_path(args, "pdf.csv.gz" if args.gzip else "pdf.csv")
    experiments.write_pdf_csv(out, stats_list, gzip_out=args.gzip)
    fit_out = _out_path(args, "fit.csv")
    experiments.write_fit_csv(fit_out, [(s.pds, s.fit_result) for s in stats_list])
    return _finish(args, config, started, [out, fit_out])


def cmd_sir(args) -> int:
    config = resolve_config(args)
    started = time.time()
    rows = experiments.run_sir_sweep(config, threads=_threads(args))
    out = _out_path(args, "sir.csv")
    experiments.write_sir_csv(out, rows)
    return _finish(args, config, started, [out])


def cmd_scatter(args) -> int:
    config = resolve_config(args)
    started = time.time()
    threads = _threads(args)
    out = _out_path(args, "scatter.csv.gz" if args.gzip else "scatter.csv")
    pds0 = config.pds_list[0]
    h, g = experiments.run_scatter(config, pds0, threads=threads)
    experiments.write_scatter_csv(out, pds0, h, g, gzip_out=args.gzip)
    return _finish(args, config, started, [out])


def _read_pdf_samples(path: str):
    """Samples of Re{g} grouped by PDS, in first-appearance order."""
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rt", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return []
        try:
            i_pds = header.index("pds")
            i_re = header.index("re_g")
        except ValueError:
            raise ConfigurationError(f"{path}: expected 'pds' and 're_g' columns, got {header}")
        groups: dict = {}
        order = []
        for row in reader:
            if not row:
                continue
            try:
                pds_val = float(row[i_pds])
                re_g = float(row[i_re])
            except (ValueError, IndexError):
                raise ConfigurationError(f"{path}: malformed row {row!r}")
            if pds_val not in groups:
                groups[pds_val] = []
                order.append(pds_val)
            groups[pds_val].append(re_g)
    return [(p, np.asarray(groups[p])) for p in order]


def cmd_fit(args) -> int:
    config = resolve_config(args)
    started = time.time()
    if args.input:
        groups = _read_pdf_samples(args.input)
        total = sum(g.size for _, g in groups)
        if total < MIN_FIT_INPUT_SAMPLES:
            raise FitFailure(
                f"insufficient samples in {args.input}: {total} < {MIN_FIT_INPUT_SAMPLES}"
            )
        for pds_val, samples in groups:
            if samples.size < MIN_FIT_INPUT_SAMPLES:
                raise FitFailure(
                    f"insufficient samples for pds={pds_val:g}: {samples.size} < {MIN_FIT_INPUT_SAMPLES}"
                )
        fit_rows = [(pds_val, statmodel.fit(samples)) for pds_val, samples in groups]
        extra = {"input": args.input}
    else:
        threads = _threads(args)
        stats_list = [experiments.run_pdf_ensemble(config, p, threads=threads) for p in config.pds_list]
        fit_rows = [(s.pds, s.fit_result) for s in stats_list]
        extra = None
    out = _out_path(args, "fit.csv")
    experiments.write_fit_csv(out, fit_rows)
    return _finish(args, config, started, [out], extra=extra)


_COMMANDS = {"ber": cmd_ber, "pdf": cmd_pdf, "sir": cmd_sir, "scatter": cmd_scatter, "fit": cmd_fit}


def main(argv=None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    args = parser.parse_args(raw)
    args.command_line = " ".join(["mediumband"] + raw)
    try:
        return _COMMANDS[args.command](args)
    except FitFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (
        ConfigurationError,
        ParameterError,
        FileNotFoundError,
        IsADirectoryError,
        PermissionError,
        json.JSONDecodeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MediumbandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
