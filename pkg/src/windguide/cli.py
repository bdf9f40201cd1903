"""Command-line front end.

Subcommands: ``run``, ``heading-sweep``, ``frequency-sweep`` and
``validate-config``. Artifacts go to ``--out`` (else ``$WINDGUIDE_OUT``, else
``./windguide-out``). Errors are reported on stderr as
``windguide: error[<class>]: <message>`` with a class-specific exit status.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config_file
from .scenario import (TRAJECTORY_COLUMNS, SimulationError, benefit, frequency_sweep, heading_sweep,
                       run)

OUT_ENV = "WINDGUIDE_OUT"
DEFAULT_OUT = "windguide-out"

# exit status per error class; argparse usage errors exit with 2
EXIT_CODES = {"ok": 0, "usage-error": 2, "config-error": 3, "simulation-error": 4, "io-error": 5}

TRAJECTORY_HEADER = ("time_s",) + TRAJECTORY_COLUMNS
METRICS_HEADER = ("kind", "psi0_deg", "omega_w", "p_bar_avg", "p_bar_avg_reference", "benefit")


def fmt(value) -> str:
    """Locale-independent 9-significant-digit text for CSV cells."""
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    return "{:.9g}".format(float(value))


def write_csv(path: Path, header, rows) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path


def write_trajectory(path: Path, metrics) -> Path:
    traj = metrics.trajectory_summary
    cols = [traj.columns[name] for name in TRAJECTORY_COLUMNS]
    rows = ([t] + [c[i] for c in cols] for i, t in enumerate(traj.time))
    return write_csv(path, TRAJECTORY_HEADER, rows)


def plot_benefit(path: Path, sweep) -> Path:
    """Static SVG of relative benefit (percent) against spatial frequency."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    styles = {"adjusted": "-", "adjusted-airspeed-only": "--"}
    with matplotlib.rc_context({"svg.hashsalt": "windguide", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for kind, values in sweep.benefit.items():
            ax.plot(sweep.omegas, 100.0 * np.asarray(values), styles.get(kind, ":"), marker="o",
                    label=kind)
        ax.set_xscale("log")
        ax.set_xlabel("wind spatial frequency [rad/ft]")
        ax.set_ylabel("relative benefit [%]")
        ax.axhline(0.0, color="0.6", linewidth=0.8)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


def cmd_validate(config: RunConfig, out: Path | None) -> list:
    spec = config.scenario
    print(f"config ok: kind={spec.kind} wind={spec.wind.kind} flight_time={spec.flight_time:g}s "
          f"steps={spec.n_steps}")
    return []


def _reference_of(spec):
    return replace(spec, kind="reference")


def cmd_run(config: RunConfig, out: Path) -> list:
    spec = config.scenario
    metrics = run(spec, record=True)
    ref_avg, gain = metrics.p_bar_avg, 0.0
    if spec.kind != "reference":
        ref_avg = run(_reference_of(spec), record=False).p_bar_avg
        gain = benefit(ref_avg, metrics.p_bar_avg)
    psi0 = math.degrees(spec.start_state().psi)
    written = [write_trajectory(out / "trajectory.csv", metrics)]
    written.append(write_csv(out / "metrics.csv", METRICS_HEADER,
                             [(spec.kind, psi0, spec.wind.omega_w, metrics.p_bar_avg, ref_avg, gain)]))
    print(f"p_bar_avg={metrics.p_bar_avg:.9g} reference={ref_avg:.9g} benefit={gain:.9g}")
    return written


def cmd_heading_sweep(config: RunConfig, out: Path) -> list:
    spec, d_psi0 = config.scenario, config.sweep.d_psi0
    ref = heading_sweep(_reference_of(spec), d_psi0)
    cand = ref if spec.kind == "reference" else heading_sweep(spec, d_psi0)
    gain = benefit(ref, cand)
    per_heading = (1.0 - np.asarray(cand.p_bar_avg) / np.asarray(ref.p_bar_avg))
    rows = zip(np.degrees(ref.headings), ref.p_bar_avg, cand.p_bar_avg, per_heading)
    written = [write_csv(out / "sweep.csv",
                         ("psi0_deg", "p_bar_avg_reference", f"p_bar_avg_{spec.kind}", "benefit"), rows)]
    written.append(write_csv(out / "metrics.csv", METRICS_HEADER,
                             [(spec.kind, "all", spec.wind.omega_w, cand.p_bar_heading_avg,
                               ref.p_bar_heading_avg, gain)]))
    print(f"heading-averaged p_bar: reference={ref.p_bar_heading_avg:.9g} "
          f"{spec.kind}={cand.p_bar_heading_avg:.9g} benefit={gain:.9g}")
    return written


def cmd_frequency_sweep(config: RunConfig, out: Path) -> list:
    spec, settings = config.scenario, config.sweep
    kinds = tuple(k for k in settings.kinds if k != "reference")
    sweep = frequency_sweep(spec, settings.omegas, settings.d_psi0, kinds=kinds)
    header = ["omega_w", "p_bar_reference"]
    header += [f"p_bar_{k}" for k in kinds] + [f"benefit_{k}" for k in kinds]
    rows = []
    for i, omega in enumerate(sweep.omegas):
        rows.append([omega, sweep.power["reference"][i]]
                    + [sweep.power[k][i] for k in kinds] + [sweep.benefit[k][i] for k in kinds])
    written = [write_csv(out / "sweep.csv", header, rows)]
    metric_rows = []
    for k in kinds:
        for i, omega in enumerate(sweep.omegas):
            metric_rows.append((k, "all", omega, sweep.power[k][i], sweep.power["reference"][i],
                                sweep.benefit[k][i]))
    written.append(write_csv(out / "metrics.csv", METRICS_HEADER, metric_rows))
    written.append(plot_benefit(out / "benefit.svg", sweep))
    for (kind, omega), message in sorted(sweep.errors.items()):
        print(f"warning: {kind} at omega_w={omega:g} failed: {message}", file=sys.stderr)
    for k in kinds:
        best = int(np.nanargmax(sweep.benefit[k]))
        print(f"{k}: peak benefit {sweep.benefit[k][best]:.4%} at omega_w={sweep.omegas[best]:g}")
    return written


COMMANDS = {
    "run": cmd_run,
    "heading-sweep": cmd_heading_sweep,
    "frequency-sweep": cmd_frequency_sweep,
    "validate-config": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="windguide",
                                     description="Wind-aware airspeed/heading guidance simulator.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI configuration file")
    common.add_argument("--out", help=f"output directory (default: ${OUT_ENV} or ./{DEFAULT_OUT})")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override one configuration value; repeatable")
    common.add_argument("--seed", type=int, help="seed for the stochastic wind layer")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _fail(kind: str, message: str) -> int:
    print(f"windguide: error[{kind}]: {message}", file=sys.stderr)
    return EXIT_CODES[kind]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config_file(args.config, args.overrides, args.seed)
    except ConfigError as exc:
        return _fail("config-error", str(exc))
    except OSError as exc:
        return _fail("io-error", str(exc))
    if args.command == "validate-config":
        cmd_validate(config, None)
        return 0
    out = Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if not os.access(out, os.W_OK):
            raise PermissionError(f"output directory {str(out)!r} is not writable")
        written = COMMANDS[args.command](config, out)
    except SimulationError as exc:
        return _fail("simulation-error", str(exc))
    except ConfigError as exc:
        return _fail("config-error", str(exc))
    except ValueError as exc:
        return _fail("config-error", str(exc))
    except OSError as exc:
        return _fail("io-error", str(exc))
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
