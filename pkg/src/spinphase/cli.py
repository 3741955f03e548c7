"""Command-line front end: ``spinphase {simulate,verify,sweep,separability}``.

Exit codes: 0 success, 1 check failure, 2 usage or configuration error,
3 numeric-domain error (degeneracy, undefined phase or basis).
"""
import argparse
import csv
import io
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from . import __version__
from .config import DEFAULT_TOLERANCES, MIN_STEPS, ScenarioConfig, load_config
from .dynamics import PROPAGATORS, evolve, fit_coefficients
from .entanglement import concurrence, is_always_separable, separability_scan
from .errors import ConfigError, DegeneracyError, NumericDomainError, SpinPhaseError
from .model import derived_angles
from .phases import (
    OVERLAP_TOL,
    geometric_phase_pure,
    mixed_phase_series,
    pure_phase_series,
    subsystem_phase,
    subsystem_spectrum,
    wrapped_distance,
)
from .verify import CHECKS, run_checks, select_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

SIMULATE_COLUMNS = (
    "t",
    "f1_re", "f1_im", "f2_re", "f2_im", "f3_re", "f3_im", "f4_re", "f4_im",
    "gamma_ab", "gamma_ab_unwrapped", "gamma_a", "gamma_b", "concurrence", "degeneracy_flag",
)
SWEEP_AXES = ("B", "theta", "omega", "J", "t_final")
SWEEP_COLUMNS = (
    "value", "B", "theta", "omega", "J", "t_final", "alpha", "eta",
    "gamma_ab", "gamma_ab_unwrapped", "gamma_a", "gamma_b", "additivity_residual",
    "concurrence", "status",
)


class UsageError(SpinPhaseError):
    pass


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    return "%.17g" % x


def _write_csv(rows, header, out):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    text = buf.getvalue()
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _parse_tol(item: str) -> tuple[str, float]:
    name, sep, value = item.partition("=")
    if not sep:
        raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise UsageError(f"--tol {name}: {value!r} is not a number") from None


def _scenario(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    if getattr(args, "steps", None) is not None:
        cfg = replace(cfg, steps=args.steps)
    if getattr(args, "propagator", None) is not None:
        cfg = replace(cfg, propagator=args.propagator)
    for item in getattr(args, "tol", None) or ():
        cfg = cfg.with_tolerance(*_parse_tol(item))
    return cfg


# ------------------------------------------------------------------ simulate


def simulate_rows(cfg: ScenarioConfig) -> list[tuple]:
    traj = evolve(cfg.params, cfg.initial_vector(), cfg.t_final, cfg.steps, cfg.propagator)
    psi = traj.normalized()
    series = pure_phase_series(traj)
    gab = series.geometric.copy()
    gab_unwrapped = series.geometric_unwrapped.copy()
    lost = np.abs(psi @ psi[0].conj()) <= OVERLAP_TOL
    gab[lost] = np.nan
    gab_unwrapped[lost] = np.nan

    tol = cfg.tolerances["degeneracy"]
    policy = cfg.degeneracy_policy
    with warnings.catch_warnings():
        if policy == "skip":
            warnings.simplefilter("ignore", RuntimeWarning)
        spec_a = subsystem_spectrum(traj, "a", tol)
        spec_b = subsystem_spectrum(traj, "b", tol)
        ga = mixed_phase_series(spec_a, policy)
        gb = mixed_phase_series(spec_b, policy)
    flags = spec_a.degeneracy_flags | spec_b.degeneracy_flags
    conc = concurrence(psi)

    rows = []
    for i, t in enumerate(traj.times):
        amps = []
        for f in traj.states[i]:
            amps += [f.real, f.imag]
        rows.append((t, *amps, gab[i], gab_unwrapped[i], ga[i], gb[i], conc[i], bool(flags[i])))
    return rows


def cmd_simulate(args) -> int:
    cfg = _scenario(args)
    _write_csv(simulate_rows(cfg), SIMULATE_COLUMNS, args.out)
    return EXIT_OK


# -------------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    try:
        checks = select_checks(args.only)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = run_checks(checks)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


# --------------------------------------------------------------------- sweep


def sweep_point(cfg: ScenarioConfig) -> tuple:
    """Final-time observables for one configuration; failures become NaN rows."""
    p = cfg.params
    nan = math.nan
    try:
        angles = derived_angles(p)
        alpha, eta = angles.alpha, angles.eta
    except NumericDomainError:
        alpha, eta = nan, nan
    head = (p.B, p.theta, p.omega, p.J, cfg.t_final, alpha, eta)
    try:
        traj = evolve(p, cfg.initial_vector(), cfg.t_final, cfg.steps, cfg.propagator)
        pure = geometric_phase_pure(traj)
        tol = cfg.tolerances["degeneracy"]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            ga = subsystem_phase(traj, "a", cfg.degeneracy_policy, degeneracy_tol=tol)
            gb = subsystem_phase(traj, "b", cfg.degeneracy_policy, degeneracy_tol=tol)
    except DegeneracyError:
        return head + (nan,) * 6 + ("degenerate",)
    except NumericDomainError:
        return head + (nan,) * 6 + ("undefined",)
    residual = wrapped_distance(pure.geometric, ga + gb)
    conc = float(concurrence(traj.normalized()[-1]))
    return head + (pure.geometric, pure.geometric_unwrapped, ga, gb, residual, conc, "ok")


def sweep_configs(cfg: ScenarioConfig, axis: str, start: float, stop: float, count: int):
    if axis not in SWEEP_AXES:
        raise UsageError(f"--axis must be one of {SWEEP_AXES}, got {axis!r}")
    if count < 2:
        raise UsageError("--count must be >= 2")
    values = np.linspace(start, stop, count)
    out = []
    for v in values:
        v = float(v)
        if axis == "t_final":
            out.append((v, replace(cfg, t_final=v)))
        else:
            out.append((v, replace(cfg, params=cfg.params.replace(**{axis: v}))))
    return out


def cmd_sweep(args) -> int:
    cfg = _scenario(args)
    points = sweep_configs(cfg, args.axis, args.start, args.stop, args.count)
    configs = [c for _, c in points]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(sweep_point, configs))
    else:
        results = [sweep_point(c) for c in configs]
    rows = [(v, *r) for (v, _), r in zip(points, results)]
    _write_csv(rows, SWEEP_COLUMNS, args.out)
    return EXIT_OK


# -------------------------------------------------------------- separability


def cmd_separability(args) -> int:
    cfg = _scenario(args)
    p = cfg.params
    try:
        c = fit_coefficients(p, cfg.initial_vector())
    except NumericDomainError as exc:
        print(f"classification unavailable: {exc}")
        return EXIT_DOMAIN
    report = is_always_separable(c, p.J, tol=cfg.tolerances["separability"])
    canon_cyclic = abs(c[1] ** 2 + 2 * c[2] * c[3] - c[0] ** 2)
    print(f"params: B={p.B:.17g} theta={p.theta:.17g} omega={p.omega:.17g} J={p.J:.17g}")
    for k, ck in enumerate(c, start=1):
        print(f"c{k} = {ck.real:+.12e} {ck.imag:+.12e}i")
    print(f"|c1|                    = {report.c1_residual:.6e}")
    print(f"|c2^2 + 2 c3 c4|        = {report.condition_residual:.6e}")
    print(f"|c2^2 + 2 c3 c4 - c1^2| = {canon_cyclic:.6e}")
    print(f"always_separable = {str(report.always_separable).lower()}")
    print(f"cyclic_separable = {str(report.cyclic_separable).lower()}")
    if report.recurrence_period is not None:
        print(f"recurrence_period = {report.recurrence_period:.17g}")
    if args.out:
        times, conc = separability_scan(p, cfg.initial_vector(), cfg.t_final, cfg.steps + 1, cfg.propagator)
        _write_csv(zip(times, conc), ("t", "concurrence"), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinphase",
        description="Geometric phases and entanglement of two coupled spins in a rotating field.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_flags(p, out_help):
        p.add_argument("--config", metavar="PATH", help="scenario TOML file (defaults built in)")
        p.add_argument("--out", metavar="PATH", help=out_help)
        p.add_argument("--steps", type=int, metavar="N", help=f"grid intervals (>= {MIN_STEPS})")
        p.add_argument("--propagator", choices=PROPAGATORS)
        p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help=f"override a tolerance ({', '.join(DEFAULT_TOLERANCES)}); repeatable")

    p = sub.add_parser("simulate", help="trajectory, phases and concurrence per grid point")
    scenario_flags(p, "CSV output (stdout if omitted)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the oracle and property checks")
    names = sorted({c.name for c in CHECKS} | {c.group for c in CHECKS})
    p.add_argument("--only", metavar="NAME",
                   help=f"comma-separated check names, groups or numbers ({', '.join(names)})")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="final-time observables along one parameter axis")
    scenario_flags(p, "CSV output (stdout if omitted)")
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, default=11)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("separability", help="classify the initial state's entanglement dynamics")
    scenario_flags(p, "optional CSV of C(t)")
    p.set_defaults(func=cmd_separability)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"spinphase: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericDomainError as exc:
        print(f"spinphase: numeric error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
