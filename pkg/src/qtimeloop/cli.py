"""Command-line front end.

Three subcommands: ``solve`` runs a JSON problem config through the
closed-form solver (optionally cross-checked by the loop-unrolling
iteration), ``scenario`` runs one of the named worked cases and reports
PASS/FAIL per identity, ``scan`` sweeps the feedback phase and writes a
CSV lineshape plus an optional SVG plot.

Exit codes: 0 success, 1 config/usage error or violated identity,
2 singular loop denominator, 3 iteration did not converge.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .config import ConfigError, load_config, parse_config
from .linalg import SingularMatrixError, SplitterParams, norm_sq, random_unitary
from .network import SingularDenominatorError, solve_closed_form, transmitted_probability
from .oracle import NotConvergedError, solve_by_iteration
from .records import build_run_record, record_to_csv
from .scenarios import (
    GrandfatherParams,
    build_grandfather,
    build_undo,
    grandfather_amplitude_ratios,
    grandfather_transmission,
    perturbative_check,
    phase_scan,
    special_case_suite,
)
from .svgplot import polyline_plot

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SINGULAR = 2
EXIT_NOT_CONVERGED = 3

# numeric-vs-formula FWHM disagreement beyond this marks the width law
# as out of its small-coupling regime
WIDTH_REGIME_TOL = 0.05


class _Parser(argparse.ArgumentParser):
    # usage mistakes are config errors: exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _max_relative_difference(reference, other) -> float:
    reference = np.asarray(reference)
    other = np.asarray(other)
    diff = float(np.max(np.abs(reference - other)))
    scale = float(np.max(np.abs(reference)))
    return diff / scale if scale > 0.0 else diff


def _random_state(seed: int, dim: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / math.sqrt(norm_sq(v))


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    net, psi = parse_config(cfg)
    solution = solve_closed_form(net, psi)
    oracle = None
    if args.oracle:
        oracle_solution, report = solve_by_iteration(net, psi, tol=args.tol, max_iter=args.max_iter)
        oracle = {
            "iterations": report.iterations_used,
            "relative_difference": _max_relative_difference(
                solution.psi3p, oracle_solution.psi3p
            ),
        }
    timestamp = None if args.no_timestamp else _utc_now()
    record = build_run_record(cfg, solution, version=__version__, timestamp=timestamp, oracle=oracle)
    if args.format == "json":
        text = json.dumps(record, indent=2) + "\n"
    else:
        text = record_to_csv(record)
    _write_output(text, args.out)
    return EXIT_OK


def _report_checks(checks) -> bool:
    """Print one PASS/FAIL line per (label, residual, tolerance) check."""
    passed = True
    for label, residual, tol in checks:
        ok = residual <= tol
        passed = passed and ok
        print(f"  {'PASS' if ok else 'FAIL'}  {label} (residual {residual:.3e}, tol {tol:g})")
    return passed


def _scenario_special(name: str):
    def run(args):
        case = next(r for r in special_case_suite(args.seed, dim=args.dim) if r.name == name)
        print(f"{name}: seed={args.seed} dim={args.dim}")
        passed = _report_checks(
            [("psi3' matches the exact limit", case.residual, case.tolerance)]
        )
        payload = {
            "scenario": name,
            "seed": args.seed,
            "dim": args.dim,
            "residual": case.residual,
            "tolerance": case.tolerance,
            "passed": passed,
        }
        return passed, payload

    return run


def _scenario_grandfather(args):
    params = GrandfatherParams(beta=args.beta, theta=args.theta, phi=args.phi)
    ratios = grandfather_amplitude_ratios(params)
    sol = solve_closed_form(build_grandfather(params), np.ones(1, dtype=complex))
    transmitted = transmitted_probability(sol)
    analytic = grandfather_transmission(args.beta, args.phi)
    tol = 1e-10
    checks = [("transmitted matches the lineshape formula", abs(transmitted - analytic), tol)]
    if args.phi == 0.0:
        alpha = math.sqrt(1.0 - args.beta * args.beta)
        expected = (0.0, 1.0 / args.beta, alpha / args.beta)
        labels = ("|psi1/psi| = 0", "|psi2/psi| = 1/beta", "|psi4/psi| = alpha/beta")
        checks += [
            (label, abs(got - want), tol)
            for label, got, want in zip(labels, ratios, expected)
        ]
    print(f"grandfather: beta={args.beta:g} theta={args.theta:g} phi={args.phi:g}")
    print(
        f"  ratios |psi1/psi|={ratios[0]:.6g} |psi2/psi|={ratios[1]:.6g} "
        f"|psi4/psi|={ratios[2]:.6g}"
    )
    print(f"  transmitted={transmitted:.12g} analytic={analytic:.12g}")
    passed = _report_checks(checks)
    payload = {
        "scenario": "grandfather",
        "beta": args.beta,
        "theta": args.theta,
        "phi": args.phi,
        "ratios": list(ratios),
        "transmitted": transmitted,
        "analytic": analytic,
        "passed": passed,
    }
    return passed, payload


def _scenario_undo(args):
    g1 = random_unitary(args.dim, args.seed)
    g2 = random_unitary(args.dim, args.seed + 1)
    net = build_undo(g1, g2, SplitterParams.from_beta(args.beta))
    psi = _random_state(args.seed + 2, args.dim)
    sol = solve_closed_form(net, psi)
    residual = float(np.max(np.abs(sol.psi3p - g1 @ psi)))
    tol = 1e-11
    print(f"undo: seed={args.seed} dim={args.dim} beta={args.beta:g}")
    passed = _report_checks([("psi3' = g1 psi (backward trip cancels the loop)", residual, tol)])
    payload = {
        "scenario": "undo",
        "seed": args.seed,
        "dim": args.dim,
        "beta": args.beta,
        "residual": residual,
        "tolerance": tol,
        "passed": passed,
    }
    return passed, payload


def _scenario_perturbative(args):
    g1 = random_unitary(args.dim, args.seed)
    g2 = random_unitary(args.dim, args.seed + 1)
    m = random_unitary(args.dim, args.seed + 2)
    psi = _random_state(args.seed + 3, args.dim)
    _, _, relative_error = perturbative_check(g1, g2, m, psi, gamma=args.gamma)
    tol = 1e-6
    print(f"perturbative: seed={args.seed} dim={args.dim} gamma={args.gamma:g}")
    passed = _report_checks(
        [("finite-difference derivative matches the first-order formula", relative_error, tol)]
    )
    payload = {
        "scenario": "perturbative",
        "seed": args.seed,
        "dim": args.dim,
        "gamma": args.gamma,
        "relative_error": relative_error,
        "tolerance": tol,
        "passed": passed,
    }
    return passed, payload


_SCENARIOS = {
    "no-feedback": _scenario_special("no-feedback"),
    "full-feedback": _scenario_special("full-feedback"),
    "equal-paths": _scenario_special("equal-paths"),
    "grandfather": _scenario_grandfather,
    "undo": _scenario_undo,
    "perturbative": _scenario_perturbative,
}


def cmd_scenario(args) -> int:
    passed, payload = _SCENARIOS[args.name](args)
    if args.out:
        payload = {"tool": "qtimeloop", "version": __version__, **payload}
        _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK if passed else EXIT_CONFIG


def cmd_scan(args) -> int:
    if args.points < 3:
        raise ConfigError("--points must be at least 3")
    if not args.phi_min < args.phi_max:
        raise ConfigError("invalid range: need --phi-min < --phi-max")
    params = GrandfatherParams(beta=args.beta, theta=args.theta)
    result = phase_scan(params, args.phi_min, args.phi_max, args.points)

    lines = ["phi,transmitted,analytic,abs_error"]
    xs, ys = [], []
    for phi, transmitted in result.points:
        analytic = grandfather_transmission(args.beta, phi)
        lines.append(f"{phi!r},{transmitted!r},{analytic!r},{abs(transmitted - analytic)!r}")
        xs.append(phi)
        ys.append(transmitted)
    numeric = result.fwhm_numeric
    lines.append(f"# fwhm_numeric = {'none' if numeric is None else repr(numeric)}")
    lines.append(f"# fwhm_predicted = {result.fwhm_predicted!r}")
    if numeric is not None and abs(numeric / result.fwhm_predicted - 1.0) > WIDTH_REGIME_TOL:
        lines.append("# width formula out of small-beta regime")
    _write_output("\n".join(lines) + "\n", args.out)

    if args.svg:
        svg = polyline_plot(
            xs,
            ys,
            x_label="phi (rad)",
            y_label="transmitted probability",
            title=f"beta={args.beta:g} theta={args.theta:g}",
        )
        with open(args.svg, "w", encoding="utf-8", newline="") as fh:
            fh.write(svg)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="qtimeloop",
        description="Simulator for two-coupler feedback-in-time networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="solve a JSON problem config")
    solve.add_argument("config", help="path to the JSON network description")
    solve.add_argument("--oracle", action="store_true",
                       help="cross-check against the loop-unrolling solver")
    solve.add_argument("--tol", type=float, default=1e-12, help="oracle update tolerance")
    solve.add_argument("--max-iter", type=int, default=1_000_000, help="oracle iteration budget")
    solve.add_argument("--out", help="write the record here instead of stdout")
    solve.add_argument("--format", choices=("json", "csv"), default="json")
    solve.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp so reruns are byte-identical")
    solve.set_defaults(func=cmd_solve)

    scenario = sub.add_parser("scenario", help="run a named worked case")
    scenario.add_argument(
        "name",
        choices=("no-feedback", "full-feedback", "equal-paths", "grandfather", "undo", "perturbative"),
    )
    scenario.add_argument("--seed", type=int, default=0)
    scenario.add_argument("--dim", type=int, default=4)
    scenario.add_argument("--beta", type=float, default=0.1)
    scenario.add_argument("--theta", type=float, default=0.0)
    scenario.add_argument("--phi", type=float, default=0.0)
    scenario.add_argument("--gamma", type=float, default=1e-4,
                          help="expansion parameter for the perturbative scenario")
    scenario.add_argument("--out", help="also write a JSON summary here")
    scenario.set_defaults(func=cmd_scenario)

    scan = sub.add_parser("scan", help="sweep the feedback phase, extract the resonance width")
    scan.add_argument("--beta", type=float, required=True)
    scan.add_argument("--theta", type=float, default=0.0)
    scan.add_argument("--phi-min", dest="phi_min", type=float, default=-math.pi)
    scan.add_argument("--phi-max", dest="phi_max", type=float, default=math.pi)
    scan.add_argument("--points", type=int, default=4001)
    scan.add_argument("--out", help="CSV output path (stdout when omitted)")
    scan.add_argument("--svg", help="optional SVG plot path")
    scan.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help/--version and usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularDenominatorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except NotConvergedError as exc:
        report = exc.report
        print(
            f"error: {exc} [spectral radius estimate "
            f"{report.loop_spectral_radius_estimate:.4g}]",
            file=sys.stderr,
        )
        return EXIT_NOT_CONVERGED
    except (SingularMatrixError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
