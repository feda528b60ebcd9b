"""Command-line front end.

Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.
Every subcommand honors --config/--set, --output-dir (or the
PENNING_GYRO_OUTPUT_DIR environment variable), --json, and --seed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .config import ConfigError, RunConfig, load_config
from .core import CONST, validate_stability
from .dynamics import IntegrationError
from .equilibrium import (
    ConvergenceError,
    RelaxationConfig,
    measured_shape,
    relax,
    write_configuration_csv,
    write_report_json,
)
from .figures import generate_figure
from .modes import UnstableTrapError, compute_modes
from .response import OscillatorParams, rotation_scale_factor
from .sensing import EnsembleSpec, ODFParams, budget_json, build_budget
from .shape import (
    aspect_ratio_from_beta,
    oracle_aspect_ratio_depolarization,
    planarity_check,
    shape_beta,
    spheroid_dimensions,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="penning-gyro",
        description="Design-chain calculations for a trapped-ion vibration "
                    "gyroscope: mode frequencies, crystal shape, rotation "
                    "response, and the readout sensitivity budget.")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        dest="overrides", help="override one config field")
    parser.add_argument("--output-dir", default=None,
                        help="where files are written (default: "
                             "$PENNING_GYRO_OUTPUT_DIR or the cwd)")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output on stdout")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("constants", help="print the pinned physical constants")

    p = sub.add_parser("modes", help="trap mode frequency table")
    p.add_argument("--csv", action="store_true", help="also write modes.csv")

    p = sub.add_parser("fig", help="write one study dataset (ids 1..6)")
    p.add_argument("figure_id", type=int)

    sub.add_parser("budget", help="full sensitivity budget (budget.json)")

    p = sub.add_parser("crystal", help="relax the ion crystal and report its shape")
    p.add_argument("--ions", type=int, default=None,
                   help="override the crystal ion count")
    return parser


def _resolve_config(args) -> RunConfig:
    overrides = {}
    for item in args.overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if args.seed is not None:
        overrides["seed"] = args.seed
    return load_config(args.config, overrides)


def _outdir(args) -> str:
    outdir = args.output_dir or os.environ.get("PENNING_GYRO_OUTPUT_DIR") or "."
    os.makedirs(outdir, exist_ok=True)
    return outdir


def _cmd_constants(args, config: RunConfig) -> int:
    values = CONST.as_dict()
    if args.json:
        print(json.dumps(values, indent=2, sort_keys=True))
    else:
        for name, value in values.items():
            print(f"{name:24s} {value!r}")
    return EXIT_OK


def _cmd_modes(args, config: RunConfig) -> int:
    species, trap = config.ion(), config.trap()
    report = validate_stability(species, trap)
    modes = compute_modes(species, trap)  # raises UnstableTrapError when unstable
    rows = [("magnetron", modes.f_m), ("axial", modes.f_z),
            ("modified cyclotron", modes.f_cap_m), ("true cyclotron", modes.f_c)]
    if args.json:
        print(json.dumps({
            "schema_version": 1,
            "f_m_hz": modes.f_m, "f_z_hz": modes.f_z,
            "f_cap_m_hz": modes.f_cap_m, "f_c_hz": modes.f_c,
            "omega_m_rad_s": modes.omega_m, "omega_z_rad_s": modes.omega_z,
            "omega_cap_m_rad_s": modes.omega_cap_m, "omega_c_rad_s": modes.omega_c,
            "stable": report.stable, "stability_margin_rad_s": report.margin,
        }, indent=2, sort_keys=True))
    else:
        print(f"{config.species}  B={config.b_field_t} T  "
              f"V={config.trap_voltage_v} V  z0={config.char_length_m} m")
        for name, f in rows:
            print(f"  {name:20s} {f / 1e3:12.4f} kHz")
        print(f"  stability margin     {report.margin:12.4g} rad/s")
    if getattr(args, "csv", False):
        path = os.path.join(_outdir(args), "modes.csv")
        with open(path, "w") as fh:
            fh.write("mode,frequency_hz\n")
            for name, f in rows:
                fh.write(f"{name.replace(' ', '_')},{f!r}\n")
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_fig(args, config: RunConfig) -> int:
    paths = generate_figure(args.figure_id, config, _outdir(args))
    if args.json:
        print(json.dumps({"files": paths}))
    else:
        for p in paths:
            print(f"wrote {p}")
    return EXIT_OK


def _cmd_budget(args, config: RunConfig) -> int:
    species, trap = config.ion(), config.trap()
    modes = compute_modes(species, trap)
    wall = config.wall(modes)
    beta = shape_beta(modes, wall.omega_r)
    alpha = aspect_ratio_from_beta(beta)
    alpha_oracle = oracle_aspect_ratio_depolarization(beta)
    if abs(alpha - alpha_oracle) > 0.1 * alpha_oracle:
        print(f"warning: aspect-ratio routes disagree by more than 10% "
              f"({alpha:.4g} vs oracle {alpha_oracle:.4g})", file=sys.stderr)
    geom = spheroid_dimensions(config.n_crystal, alpha, beta, modes.omega_z, species)
    planar = planarity_check(beta, wall.delta)
    osc = OscillatorParams(omega_z=modes.omega_z, omega_r=wall.omega_r,
                           quality_factor=config.q_factor)
    scale = rotation_scale_factor(geom.r_cl, osc)
    odf = ODFParams(f0=config.odf_force_n, tau=config.precession_s,
                    gamma=config.decay_rate_hz)
    budget = build_budget(EnsembleSpec(config.n_spins), odf, scale, config.cycle_s)
    extra = {
        "beta": beta, "alpha": alpha, "alpha_oracle": alpha_oracle,
        "r_cl_m": geom.r_cl, "z_cl_m": geom.z_cl, "density_m3": geom.density_n,
        "f_z_hz": modes.f_z, "f_m_hz": modes.f_m,
        "n_crystal": config.n_crystal, "n_spins": config.n_spins,
        "planarity_pass": planar.passes,
    }
    text = budget_json(budget, extra)
    path = os.path.join(_outdir(args), "budget.json")
    with open(path, "w") as fh:
        fh.write(text)
    if args.json:
        print(text, end="")
    else:
        print(f"beta = {beta:.4f}, alpha = {alpha:.4f} "
              f"(oracle {alpha_oracle:.4f}), r_cl = {geom.r_cl * 1e2:.4f} cm")
        print(f"single-shot amplitude resolution: "
              f"{budget.delta_zc_single_shot * 1e12:.3f} pm")
        print(f"amplitude ASD: {budget.amplitude_asd * 1e12:.3f} pm/sqrt(Hz) "
              f"at {budget.repetitions_per_s:.0f} reps/s")
        print(f"rotation ASD: {budget.rotation_asd:.3e} rad/s/sqrt(Hz)")
        print(f"angle random walk: {budget.arw:.3e} rad/sqrt(h)")
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_crystal(args, config: RunConfig) -> int:
    species, trap = config.ion(), config.trap()
    modes = compute_modes(species, trap)
    wall = config.wall(modes)
    n_ions = args.ions if args.ions is not None else config.n_crystal
    relax_cfg = RelaxationConfig(initial_seed=config.seed)
    outdir = _outdir(args)
    try:
        crystal, report = relax(n_ions, species, modes, wall, relax_cfg)
    except ConvergenceError as exc:
        write_configuration_csv(exc.best_config, os.path.join(outdir, "crystal.csv"))
        write_report_json(exc.report, os.path.join(outdir, "crystal_report.json"))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    stats = measured_shape(crystal)
    write_configuration_csv(crystal, os.path.join(outdir, "crystal.csv"))
    write_report_json(report, os.path.join(outdir, "crystal_report.json"),
                      extra=stats.as_dict())
    if args.json:
        payload = report.as_dict()
        payload.update(stats.as_dict())
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"relaxed {n_ions} ions: spacing median "
              f"{stats.spacing_median * 1e6:.2f} um, alpha_md {stats.alpha_md:.3f}, "
              f"residual force {report.max_force:.3g} N")
        print(f"wrote {os.path.join(outdir, 'crystal.csv')}")
    return EXIT_OK


_HANDLERS = {
    "constants": _cmd_constants,
    "modes": _cmd_modes,
    "fig": _cmd_fig,
    "budget": _cmd_budget,
    "crystal": _cmd_crystal,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve_config(args)
        return _HANDLERS[args.command](args, config)
    except (ConfigError, UnstableTrapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, ConvergenceError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
