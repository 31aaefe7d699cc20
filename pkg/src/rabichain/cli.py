"""Command-line driver: simulate | sweep | design | validate.

All commands are pure functions of the configuration file; repeated runs
produce byte-identical outputs.  Exit codes: 0 success, 1 usage/config
error, 2 numeric/feasibility error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .dynamics import EigendecompositionError, run_trajectory
from .lattice import (
    CouplingRangeError,
    FabricationError,
    design,
    format_recipe,
    verify_recipe,
)
from .model import FullState
from .output import (
    intensity_map_pgm,
    intensity_map_text,
    sweep_summary_text,
    timeseries_text,
    write_bytes,
    write_text,
)
from .validate import run_validation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_VALIDATION = 3

SWEEP_DEFAULT_DT = 0.05
SIMULATE_DEFAULT_DT = 0.1


class _Parser(argparse.ArgumentParser):
    # usage errors exit with code 1 here, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def cmd_simulate(cfg: RunConfig, out_dir: Path, image: bool) -> int:
    dt = cfg.dt if cfg.dt is not None else SIMULATE_DEFAULT_DT
    traj = run_trajectory(cfg.params, cfg.initial, cfg.t_max, dt)
    if traj.truncation_flagged:
        print(
            f"note: truncation-contaminated run, top-site occupancy "
            f"{traj.top_site_occupancy:.3e}",
            file=sys.stderr,
        )
    if "timeseries" in cfg.outputs:
        write_text(out_dir / "timeseries.tsv", timeseries_text(traj))
    if "intensity_map" in cfg.outputs:
        write_text(out_dir / "intensity_map.tsv", intensity_map_text(traj))
    if image:
        write_bytes(out_dir / "intensity_map.pgm", intensity_map_pgm(traj))
    return EXIT_OK


def _sweep_point(cfg: RunConfig, omega0: float, dt: float):
    """One sweep point, using the device convention for signed omega0.

    The sign selects the initial state (excited for omega0 >= 0, ground
    otherwise) of the model with |omega0|; the two choices excite the two
    different parity chains, so the signed value reaches both.
    """
    params = replace(cfg.params, omega0=abs(omega0))
    branch = "e" if omega0 >= 0 else "g"
    initial = FullState.basis_state(branch, 0, params.n_trunc)
    t_bounce = 2.0 * math.pi / params.omega
    traj = run_trajectory(params, initial, t_bounce, dt)
    population = traj.p_e if omega0 >= 0 else traj.p_g
    return (
        omega0,
        float(traj.p_r.min()),
        float(population.min()),
        float(traj.mean_n.max()),
    )


def cmd_sweep(cfg: RunConfig, omega0_list: list[float], out_dir: Path, jobs: int) -> int:
    if not omega0_list:
        raise ConfigError("sweep needs a non-empty --omega0-list")
    dt = cfg.dt if cfg.dt is not None else SWEEP_DEFAULT_DT
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda v: _sweep_point(cfg, v, dt), omega0_list))
    else:
        rows = [_sweep_point(cfg, v, dt) for v in omega0_list]
    write_text(out_dir / "sweep.tsv", sweep_summary_text(rows))
    return EXIT_OK


def cmd_design(cfg: RunConfig, out_dir: Path) -> int:
    if cfg.design is None:
        raise ConfigError("design command needs a [design] section in the config")
    recipe = design(cfg.params, cfg.design.calibration, cfg.design.optics, cfg.design.n_guides)
    report = verify_recipe(recipe, cfg.params, cfg.design.calibration, cfg.design.optics)
    write_text(out_dir / "recipe.tsv", format_recipe(recipe))
    write_text(out_dir / "recipe_report.txt", report.to_text())
    return EXIT_OK


def cmd_validate() -> int:
    report = run_validation()
    print(report.to_text(), end="")
    return EXIT_OK if report.all_passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rabichain", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("simulate", "sweep", "design"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to run configuration")
        p.add_argument("--out", default=None, help="output directory (overrides config)")
        if name == "simulate":
            p.add_argument("--image", action="store_true", help="also emit a grayscale PGM map")
        if name == "sweep":
            p.add_argument(
                "--omega0-list", required=True,
                help="comma-separated signed omega0 values, mm^-1",
            )
            p.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")

    sub.add_parser("validate")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "validate":
            return cmd_validate()

        cfg = load_config(args.config)
        out_dir = Path(args.out) if args.out is not None else cfg.output_dir
        if args.command == "simulate":
            return cmd_simulate(cfg, out_dir, args.image)
        if args.command == "sweep":
            try:
                omega0_list = [float(s) for s in args.omega0_list.split(",") if s.strip()]
            except ValueError:
                raise ConfigError(f"bad --omega0-list: {args.omega0_list!r}") from None
            return cmd_sweep(cfg, omega0_list, out_dir, args.jobs)
        if args.command == "design":
            return cmd_design(cfg, out_dir)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CouplingRangeError, FabricationError, EigendecompositionError) as exc:
        print(f"numeric/feasibility error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
