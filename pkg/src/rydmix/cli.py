"""Command-line front end.

Usage:
    rydmix <command> [--config file] [--out file]

Commands: spectrum, heterodyne, optimize, map, bound, validate.  Each CSV
command writes a header plus data rows with 12-significant-digit values,
'.' decimal separator and '\\n' line endings, so identical configurations
produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import heterodyne as het
from .config import COMMANDS, ConfigError, RunConfig, load_run_config
from .hamiltonian import ModelVariant
from .optimizer import InfeasibleError, optimize, sensitivity_in_field_units, sensitivity_map
from .spectroscopy import sweep_spectrum
from .system import second_order_bound
from .validation import run_checks


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def write_csv(path: Path, header: list[str], rows) -> int:
    lines = [",".join(header)]
    count = 0
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
        count += 1
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return count


def _cmd_spectrum(cfg: RunConfig) -> int:
    params = cfg.params()
    grid = np.linspace(cfg["spectrum.delta_p_min"], cfg["spectrum.delta_p_max"],
                       cfg["spectrum.points"])
    k = cfg["model.k"]
    common = dict(k=k, n_max=cfg["numerics.n_max"], m_max=cfg["numerics.m_max"])
    eff = sweep_spectrum(params, ModelVariant.EFFECTIVE, grid, **common)
    no2 = sweep_spectrum(params, ModelVariant.EFFECTIVE_NO_2ND, grid, **common)
    orig = sweep_spectrum(params, ModelVariant.ORIGINAL, grid, **common,
                          dt=cfg["numerics.dt"], burn_in=cfg["numerics.burn_in"],
                          window_periods=cfg["numerics.window_periods"])
    rows = zip(grid, orig.values, eff.values, no2.values)
    return write_csv(cfg.output,
                     ["delta_p_MHz", "im_rho21_original", "im_rho21_effective",
                      "im_rho21_no2nd"], rows)


def _cmd_heterodyne(cfg: RunConfig) -> int:
    # a bare run models a weak signal tone: omega_s falls back to
    # heterodyne.omega_s unless mw.omega_s was set explicitly
    if "mw.omega_s" in cfg.explicit:
        params = cfg.params()
    else:
        params = cfg.params(omega_s_override=cfg["heterodyne.omega_s"])
    k = cfg["model.k"]
    probe = cfg["heterodyne.delta_p_probe"]
    if probe is None:
        probe = het.default_probe_point(params, k=k, m_max=cfg["numerics.m_max"])
    common = dict(delta_p_probe=probe,
                  samples_per_period=cfg["heterodyne.samples_per_period"],
                  n_periods=cfg["heterodyne.periods"], k=k,
                  m_max=cfg["numerics.m_max"], kappa=cfg["heterodyne.kappa"])
    eff = het.synthesize(params, ModelVariant.EFFECTIVE, **common)
    no2 = het.synthesize(params, ModelVariant.EFFECTIVE_NO_2ND, **common)
    rows = zip(eff.times, eff.values, no2.values)
    return write_csv(cfg.output, ["t_us", "dT_effective", "dT_no2nd"], rows)


def _cmd_bound(cfg: RunConfig) -> int:
    ratios = np.linspace(cfg["bound.ratio_min"], cfg["bound.ratio_max"],
                         cfg["bound.points"])
    k = cfg["bound.k"]
    m_max = cfg["numerics.m_max"]
    rows = ((r, second_order_bound(r, k, m_max)) for r in ratios)
    return write_csv(cfg.output, ["a_over_omega", "upper_bound"], rows)


def _map_rows(cfg: RunConfig, deltas):
    box = cfg.box()
    baseline = cfg["sensitivity.baseline"]
    results = sensitivity_map(deltas, box)
    for delta_m, res in zip(deltas, results):
        if res is None:
            continue
        yield (delta_m, res.eta_m, res.a_star, res.omega_star, res.k_star,
               sensitivity_in_field_units(res, baseline))


_MAP_HEADER = ["delta_M_MHz", "eta_m", "a_star_MHz", "omega_star_MHz", "k_star",
               "sensitivity_nV"]


def _cmd_map(cfg: RunConfig) -> int:
    lo, hi, step = cfg["map.delta_min"], cfg["map.delta_max"], cfg["map.step"]
    if step <= 0 or hi < lo:
        raise ConfigError("map range needs delta_min <= delta_max and step > 0")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    deltas = [lo + i * step for i in range(count)]
    return write_csv(cfg.output, _MAP_HEADER, _map_rows(cfg, deltas))


def _cmd_optimize(cfg: RunConfig) -> int:
    res = optimize(cfg["optimize.delta_M"], cfg.box())
    row = (res.delta_M, res.eta_m, res.a_star, res.omega_star, res.k_star,
           sensitivity_in_field_units(res, cfg["sensitivity.baseline"]))
    return write_csv(cfg.output, _MAP_HEADER, [row])


def _cmd_validate(cfg: RunConfig) -> int:
    spec = cfg["validate.checks"]
    names = None if spec.strip().lower() == "all" else [s.strip() for s in spec.split(",") if s.strip()]
    try:
        results = run_checks(names)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    failures = 0
    for res in results:
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.detail}")
        failures += 0 if res.passed else 1
    if failures:
        raise RuntimeError(f"{failures} of {len(results)} checks failed")
    return len(results)


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "heterodyne": _cmd_heterodyne,
    "bound": _cmd_bound,
    "map": _cmd_map,
    "optimize": _cmd_optimize,
    "validate": _cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydmix",
        description="Rydberg MW-sensor simulator: spectra, heterodyne traces, "
                    "second-order bounds and RF-parameter optimisation.")
    parser.add_argument("command_pos", nargs="?", metavar="command",
                        choices=COMMANDS, help=f"one of: {', '.join(COMMANDS)}")
    parser.add_argument("--command", dest="command_flag", choices=COMMANDS,
                        help="alternative to the positional command")
    parser.add_argument("--config", type=Path, help="flat key = value config file")
    parser.add_argument("--out", type=Path, help="output CSV path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_run_config(args.config, args.command_pos or args.command_flag,
                              args.out)
    except ConfigError as exc:
        print(f"rydmix: config error: {exc}", file=sys.stderr)
        return 2
    try:
        count = _DISPATCH[cfg.command](cfg)
    except ConfigError as exc:
        print(f"rydmix: config error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"rydmix: optimizer: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # solver errors, named by origin module
        module = type(exc).__module__.rsplit(".", maxsplit=1)[-1]
        print(f"rydmix: {module}: {exc}", file=sys.stderr)
        return 1
    if cfg.command == "validate":
        print(f"all {count} checks passed")
    else:
        print(f"wrote {count} rows to {cfg.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
