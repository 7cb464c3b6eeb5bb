"""Command-line front end: config-driven sweeps with reproducible output.

Every run embeds its effective normalized config, the config hash, library
versions, and the kernel backend into the output header, so a result file
is self-describing.  Headers carry no timestamps or worker counts: rerunning
the same config and seed yields byte-identical files at any thread count.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from typing import Sequence

import numpy as np
import scipy

from . import __version__, analytic, squeezing
from .config import RunConfig, load_config
from .dicke import PhaseTriple
from .errors import EmptyRangeError, SpinlockError
from .kernels import active_backend
from .lockin import LockInSchedule
from .montecarlo import (
    INTEGRANDS,
    McConfig,
    contrast_curve,
    measurement_range,
    sensitivity_curve,
)
from .noise import resolve_phases, synth_noise

SUBCOMMANDS = (
    "contrast",
    "sensitivity",
    "verify-bch",
    "oracle-compare",
    "noise-preview",
)

CSV_COLUMNS = {
    "contrast": ("tau_arm_ms", "contrast", "stderr", "n_atoms", "alpha"),
    "sensitivity": ("T_ms", "sensitivity_hz_per_sqrt_hz", "stderr", "n_atoms"),
    "verify-bch": ("g_tau", "bch_error"),
    "oracle-compare": (
        "n_atoms",
        "alpha",
        "beta",
        "gamma",
        "ordering",
        "quantity",
        "formula",
        "oracle",
        "abs_diff",
    ),
    "noise-preview": ("t_s", "noise_hz"),
}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _mc_config(cfg: RunConfig, n_atoms: int) -> McConfig:
    return McConfig(
        samples=cfg.samples,
        master_seed=cfg.master_seed,
        n_atoms=n_atoms,
        n_photons=cfg.n_photons,
        chi=cfg.chi,
        squeeze_duration=cfg.squeeze_duration,
    )


def run_contrast(cfg: RunConfig, threads: int):
    grid_s = [x * 1e-3 for x in cfg.tau_arm_grid_ms]
    curve = contrast_curve(
        cfg.components(),
        cfg.n_pulses,
        grid_s,
        _mc_config(cfg, cfg.n_atoms[0]),
        integrand=cfg.integrand,
        toggle=cfg.toggle,
        threads=threads,
    )
    rows = [
        (p.x, p.estimate, p.stderr, cfg.n_atoms[0], cfg.alpha) for p in curve
    ]
    try:
        low, high = measurement_range(curve, cfg.threshold)
        comments = [f"measurement-range-ms {_fmt(low)} {_fmt(high)}"]
    except EmptyRangeError:
        comments = ["measurement-range-ms none"]
    return rows, comments


def run_sensitivity(cfg: RunConfig, threads: int):
    grid_s = [x * 1e-3 for x in cfg.duration_grid_ms]
    curves = sensitivity_curve(
        cfg.components(),
        cfg.n_atoms,
        grid_s,
        cfg.n_pulses,
        _mc_config(cfg, cfg.n_atoms[0]),
        integrand=cfg.integrand,
        toggle=cfg.toggle,
        threads=threads,
    )
    rows = []
    comments = []
    for n_atoms in cfg.n_atoms:
        curve = curves[n_atoms]
        rows.extend((p.x, p.estimate, p.stderr, n_atoms) for p in curve)
        best = min(curve, key=lambda p: p.estimate)
        comments.append(
            f"min-sensitivity n_atoms={n_atoms} value={_fmt(best.estimate)}"
            f" at_T_ms={_fmt(best.x)}"
        )
    return rows, comments


def run_verify_bch(cfg: RunConfig, threads: int):
    del threads  # dense linear algebra; grid is tiny
    errors = []
    for g_tau in cfg.g_tau_grid:
        params = squeezing.SqueezeParams.from_g_tau(1.0, g_tau, cfg.n_photons)
        errors.append(squeezing.bch_error(params, cfg.n_photons, cfg.n_atoms[0]))
    rows = list(zip(cfg.g_tau_grid, errors))
    comments = []
    if len(rows) >= 2:
        slope = np.polyfit(np.log(cfg.g_tau_grid), np.log(errors), 1)[0]
        comments.append(f"fitted-slope {_fmt(float(slope))}")
    return rows, comments


def run_oracle_compare(cfg: RunConfig, threads: int):
    del threads
    rows = []
    for n_atoms in cfg.compare_n_atoms:
        for alpha in cfg.compare_alphas:
            for beta in cfg.compare_betas:
                for gamma in cfg.compare_gammas:
                    for ordering in cfg.compare_orderings:
                        report = analytic.oracle_comparison(
                            PhaseTriple(alpha, beta, gamma), n_atoms, ordering
                        )
                        for quantity in ("jx", "jz", "dphi"):
                            entry = report[quantity]
                            rows.append(
                                (
                                    n_atoms,
                                    alpha,
                                    beta,
                                    gamma,
                                    ordering,
                                    quantity,
                                    entry["formula"],
                                    entry["oracle"],
                                    entry["abs_diff"],
                                )
                            )
    worst = max(
        (r for r in rows if math.isfinite(r[-1])), key=lambda r: r[-1], default=None
    )
    comments = []
    if worst is not None:
        comments.append(
            f"worst-abs-diff {_fmt(worst[-1])} at n_atoms={worst[0]}"
            f" alpha={_fmt(worst[1])} beta={_fmt(worst[2])}"
            f" gamma={_fmt(worst[3])} ordering={worst[4]} quantity={worst[5]}"
        )
    return rows, comments


def run_noise_preview(cfg: RunConfig, threads: int):
    del threads
    if cfg.tau_arm_grid_ms is not None:
        tau_arm = cfg.tau_arm_grid_ms[0] * 1e-3
    else:
        tau_arm = cfg.duration_grid_ms[0] * 1e-3 / (cfg.n_pulses + 1)
    schedule = LockInSchedule(n_pulses=cfg.n_pulses, tau_arm=tau_arm)
    components = cfg.components()
    rng = np.random.Generator(
        np.random.Philox(seed=np.random.SeedSequence((cfg.master_seed, 0)))
    )
    theta = resolve_phases(components, rng)
    times = np.linspace(0.0, schedule.total_duration, cfg.preview_points)
    if components:
        values = synth_noise(components, theta, times)
    else:
        values = np.zeros_like(times)
    rows = list(zip(times.tolist(), np.asarray(values, dtype=float).tolist()))
    return rows, []


RUNNERS = {
    "contrast": run_contrast,
    "sensitivity": run_sensitivity,
    "verify-bch": run_verify_bch,
    "oracle-compare": run_oracle_compare,
    "noise-preview": run_noise_preview,
}


def header_lines(cfg: RunConfig, extra_comments: Sequence[str]) -> list[str]:
    lines = [
        f"spinlock {__version__}",
        f"python {sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}"
        f" numpy {np.__version__} scipy {scipy.__version__}",
        f"backend {active_backend()}",
        f"config-sha256 {cfg.sha256()}",
        f"config {cfg.canonical_json()}",
    ]
    lines.extend(extra_comments)
    return lines


def write_csv(stream, cfg: RunConfig, rows, extra_comments: Sequence[str]) -> None:
    for line in header_lines(cfg, extra_comments):
        stream.write(f"# {line}\n")
    stream.write(",".join(CSV_COLUMNS[cfg.experiment]) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(stream, cfg: RunConfig, rows, extra_comments: Sequence[str]) -> None:
    doc = {
        "spinlock": __version__,
        "python": f"{sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}",
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "backend": active_backend(),
        "config_sha256": cfg.sha256(),
        "config": cfg.to_dict(),
        "notes": list(extra_comments),
        "columns": list(CSV_COLUMNS[cfg.experiment]),
        "rows": [list(row) for row in rows],
    }
    json.dump(doc, stream, indent=2)
    stream.write("\n")


def emit(cfg: RunConfig, rows, extra_comments: Sequence[str]) -> None:
    writer = write_csv if cfg.output_format == "csv" else write_json
    if cfg.output_path == "-":
        writer(sys.stdout, cfg, rows, extra_comments)
        return
    with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as handle:
        writer(handle, cfg, rows, extra_comments)


def apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    updates = {}
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.samples is not None:
        updates["samples"] = args.samples
    if args.no_toggle:
        updates["toggle"] = False
    if args.contrast_integrand is not None:
        updates["integrand"] = args.contrast_integrand
    if args.output is not None:
        updates["output_path"] = args.output
    if not updates:
        return cfg
    merged = dataclasses.replace(cfg, **updates)
    # re-validate the merged document exactly as if it had been loaded
    from .config import parse_config

    return parse_config(merged.to_dict())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinlock",
        description="Phase-locked collective-spin magnetometry sweeps",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        cmd = sub.add_parser(name, help=f"run a {name} experiment from a config file")
        cmd.add_argument("--config", required=True, help="JSON config file path")
        cmd.add_argument(
            "--seed", type=int, default=None, help="override mc.master_seed"
        )
        cmd.add_argument(
            "--samples", type=int, default=None, help="override mc.samples"
        )
        cmd.add_argument(
            "--threads",
            type=int,
            default=None,
            help="worker threads (speed only, never results); default"
            " SPINLOCK_THREADS or 1",
        )
        cmd.add_argument(
            "--no-toggle",
            action="store_true",
            help="disable pi-pulse demodulation: plain integral of the noise",
        )
        cmd.add_argument(
            "--contrast-integrand",
            choices=INTEGRANDS,
            default=None,
            help="fringe integrand: normalized amplitude (ramsey) or"
            " cos of the phase-resolution formula (eq23)",
        )
        cmd.add_argument(
            "--output", default=None, help="output path ('-' for stdout)"
        )
    return parser


def resolve_threads(flag_value: int | None) -> int:
    if flag_value is not None:
        value = flag_value
    else:
        env = os.environ.get("SPINLOCK_THREADS", "").strip()
        if not env:
            return 1
        try:
            value = int(env)
        except ValueError:
            raise SpinlockError(f"SPINLOCK_THREADS={env!r} is not an integer")
    if value < 1:
        raise SpinlockError(f"thread count must be >= 1, got {value}")
    return value


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if cfg.experiment != args.command:
            raise SpinlockError(
                f"config declares experiment {cfg.experiment!r} but the"
                f" {args.command!r} subcommand was invoked"
            )
        cfg = apply_overrides(cfg, args)
        threads = resolve_threads(args.threads)
        rows, comments = RUNNERS[cfg.experiment](cfg, threads)
        emit(cfg, rows, comments)
    except SpinlockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
