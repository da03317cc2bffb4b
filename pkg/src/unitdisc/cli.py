"""Command-line front end: ``unitdisc {analyze,gallery,simulate,sweep}``.

Exit codes: 0 all checks pass, 1 usage, 2 parse error, 3 invalid matrix,
4 parameter out of range, 5 numerical failure or failed check.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import constructions as cons
from .discrimination import diamond_distance, one_shot_success, spectral_report
from .errors import (
    DimensionMismatch,
    InvalidEpsilon,
    NotHermitian,
    NotUnitary,
    ParamOutOfRange,
    ParseError,
    UnitdiscError,
)
from .linalg import check_same_dims, check_unitary, ket, matrix_from_json, op_norm, partial_trace, projector
from .report import Check, Report
from .simulator import (
    brute_force_distinguishability,
    copy_from_reflection,
    hamsim_discriminator,
    heisenberg_sweep,
    one_bit_qpe,
    run_experiment,
    swap_test,
)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_MATRIX, EXIT_RANGE, EXIT_NUMERIC = range(6)

DEFAULT_TOL = 1e-9
NO_BOUND = "none"

CLAIM_IDS = {
    "qpe": "claim_qpe",
    "entanglement": "claim_qep",
    "ssv": "claim_ssv",
    "qae": "cor_qae",
    "gibbs": "claim_qgs",
    "hamsim": "claim_hs",
    "learning": "claim_learning",
    "gsp": "claim_gsp",
    "sbqp_oracle": "thm_orsep_gadget",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return matrix_from_json(text)


def cmd_analyze(args) -> Report:
    U1 = check_unitary(_load_matrix(args.u1))
    U2 = check_unitary(_load_matrix(args.u2))
    check_same_dims(U1, U2)
    rep = spectral_report(U1, U2)
    res = rep.as_dict()
    if res["query_lower_bound"] is None:
        res["query_lower_bound"] = NO_BOUND
    res["dim"] = int(U1.shape[0])
    dd, mp = rep.diamond_distance, rep.min_phase_opnorm
    checks = [
        Check("diamond_le_min_phase_opnorm", dd, mp, 1e-8, "bound"),
        Check("min_phase_opnorm_le_twice_diamond", mp, 2 * dd, 1e-8, "bound"),
    ]
    return Report(
        "analyze",
        inputs={"u1": args.u1, "u2": args.u2},
        results=res,
        checks=checks,
    )


def _case_row(case: cons.ConstructionCase, tol: float) -> tuple[dict, dict, Check]:
    dd = diamond_distance(case.U1, case.U2)
    opn = op_norm(case.U1 - case.U2)
    claim = CLAIM_IDS[case.name]
    measured = {"diamond_distance": dd, "opnorm": opn}
    predicted = {
        "half_diamond": case.predicted_half_diamond,
        "lower_bound": case.predicted_lower_bound,
        "prediction": case.prediction,
    }
    if case.opnorm_bound is not None:
        predicted["opnorm_bound"] = case.opnorm_bound
    if "opnorm_closed_form" in case.extras:
        predicted["opnorm_closed_form"] = case.extras["opnorm_closed_form"]

    if case.name == "sbqp_oracle":
        acc = one_bit_qpe(case.U2, ket(0, 2))
        measured["qpe_acceptance"] = acc
        predicted["qpe_acceptance"] = case.extras["acceptance"]
        predicted["acceptance_floor"] = case.extras["acceptance_floor"]
        check = Check(claim, acc, case.extras["acceptance"], tol)
    elif case.prediction == "bound":
        check = Check(claim, opn, case.opnorm_bound, tol, "bound")
    else:
        check = Check(claim, dd, case.predicted_half_diamond, tol)
    if case.name == "entanglement":
        measured["entropy_gap"] = case.extras["entropy_gap"]
    if case.name in ("ssv", "qae"):
        predicted["support_bound"] = case.extras["bound"]
    if case.name == "qae":
        measured["alpha1_sqrt"] = case.extras["alpha1_sqrt"]
        measured["alpha2_sqrt"] = case.extras["alpha2_sqrt"]
    if case.name == "gsp":
        measured["spectral_gap"] = list(case.extras["spectral_gap"])
    return measured, predicted, check


def _parse_overrides(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        try:
            out[key] = float(val)
        except ValueError as exc:
            raise UsageError(f"--param {key}: {val!r} is not a number") from exc
    return out


def cmd_gallery(args) -> Report:
    names = [args.case] if args.case else list(cons.CASE_NAMES)
    overrides = _parse_overrides(args.param)
    if overrides and not args.case:
        raise UsageError("--param requires a case name")
    tol = args.tolerance if args.tolerance is not None else DEFAULT_TOL
    results, predictions, checks, inputs = {}, {}, [], {}
    for name in names:
        case = cons.build_case(name, **overrides) if args.case else cons.build_case(name)
        measured, predicted, check = _case_row(case, tol)
        inputs[name] = case.params
        results[name] = measured
        predictions[name] = predicted
        checks.append(check)
    return Report("gallery", inputs=inputs, results=results, predictions=predictions, checks=checks)


def cmd_simulate(args) -> Report:
    tol = args.tolerance if args.tolerance is not None else DEFAULT_TOL
    seed = args.seed
    proto = args.protocol
    inputs: dict = {"protocol": proto}
    results: dict = {}
    predictions: dict = {}
    checks: list[Check] = []
    queries = 1
    if args.trials and seed is None:
        raise UsageError("--trials requires --seed")

    if proto == "qpe1":
        theta = args.theta
        if not 0.0 <= theta < 1.0:
            raise ParamOutOfRange(f"theta must lie in [0, 1), got {theta!r}")
        inputs["theta"] = theta
        exact = one_bit_qpe(cons.phase_gate(theta), ket(0, 2))
        predictions["prob_one"] = math.sin(math.pi * theta) ** 2
        checks.append(Check("one_bit_qpe", exact, predictions["prob_one"], tol))
    elif proto == "swap":
        inputs["state"] = args.state
        if args.state == "bell":
            psi = cons.bell_state()
        elif args.state == "product":
            psi = ket(0, 4)
        else:
            if not 0.0 < args.delta < 1.0:
                raise ParamOutOfRange(f"delta must lie in (0, 1), got {args.delta!r}")
            inputs["delta"] = args.delta
            psi = cons.entangled_state(args.delta)
        rho_a = partial_trace(projector(psi), (2, 2), "A")
        exact = swap_test(psi)
        predictions["prob_zero"] = 0.5 + 0.5 * float(np.real(np.trace(rho_a @ rho_a)))
        checks.append(Check("swap_test", exact, predictions["prob_zero"], tol))
        queries = 2
    elif proto == "copy":
        if not 0.0 <= args.delta < 1.0:
            raise ParamOutOfRange(f"delta must lie in [0, 1), got {args.delta!r}")
        inputs["delta"] = args.delta
        psi = cons.bell_state() if args.delta == 0 else cons.entangled_state(args.delta)
        seed = 0 if seed is None else seed
        attempt = copy_from_reflection(cons.reflection_about(psi), seed)
        exact = attempt.success_prob
        results["attempt_succeeded"] = attempt.succeeded
        if attempt.succeeded:
            results["copy_fidelity"] = abs(np.vdot(psi, attempt.state)) ** 2
        predictions["success_prob"] = (1 + math.sqrt(args.delta)) / 2
        checks.append(Check("copy_success_prob", exact, predictions["success_prob"], tol))
    elif proto == "hamsim":
        case = cons.hamsim_pair(args.tprime)
        inputs["tprime"] = args.tprime
        exact = hamsim_discriminator(case)
        predictions["advantage"] = 1.0
        checks.append(Check("hamsim_advantage", exact, 1.0, tol))
    else:  # bruteforce
        inputs.update(case=args.case, budget=args.budget)
        if args.case == "qpe":
            inputs["epsilon"] = args.epsilon
            c = cons.qpe_pair(args.epsilon)
            U1, U2 = c.U1, c.U2
        elif args.case == "iz":
            U1, U2 = np.eye(2, dtype=complex), np.diag([1.0, -1.0]).astype(complex)
        else:
            inputs["delta"] = args.delta
            U1, U2 = _entanglement_block(args.delta)
        seed = 0 if seed is None else seed
        exact = brute_force_distinguishability(U1, U2, args.budget, seed)
        closed = diamond_distance(U1, U2)
        predictions["diamond_distance"] = closed
        checks.append(Check("bruteforce_le_diamond", exact, closed, 1e-9, "bound"))
        checks.append(Check("bruteforce_matches_diamond", exact, closed, 5e-3))
        queries = 1

    results["exact"] = exact
    results["one_shot_success"] = one_shot_success(min(1.0, exact)) if proto == "bruteforce" else None
    if results["one_shot_success"] is None:
        del results["one_shot_success"]
    if args.trials:
        results["sampled"] = run_experiment(exact, args.trials, seed, queries).as_dict()
    return Report("simulate", inputs=inputs, results=results, predictions=predictions, checks=checks, seed=seed)


def _entanglement_block(delta: float) -> tuple[np.ndarray, np.ndarray]:
    """The two reflections restricted to span{|00>, |11>}, where they act nontrivially."""
    case = cons.entanglement_pair(delta)
    P = np.stack([ket(0, 4), ket(3, 4)], axis=1)
    return P.conj().T @ case.U1 @ P, P.conj().T @ case.U2 @ P


def _parse_epsilons(raw) -> list[float]:
    vals = []
    for chunk in raw:
        for piece in chunk.split(","):
            piece = piece.strip()
            if not piece:
                continue
            try:
                vals.append(float(piece))
            except ValueError as exc:
                raise UsageError(f"not a number: {piece!r}") from exc
    if not vals:
        raise UsageError("sweep needs at least one epsilon")
    return vals


def cmd_sweep(args) -> Report:
    eps = _parse_epsilons(args.epsilons)
    rows = heisenberg_sweep(eps, args.target, ratio_max=None)
    table = [
        {"epsilon": r.epsilon, "T_min": r.t_min, "T_lb": r.t_lower_bound, "ratio": r.ratio}
        for r in rows
    ]
    checks = []
    for r in rows:
        checks.append(Check(f"T_lb_le_T_min[{r.epsilon:g}]", r.t_lower_bound, r.t_min, 0.0, "bound"))
        checks.append(Check(f"ratio_le_4[{r.epsilon:g}]", r.ratio, 4.0, 0.0, "bound"))
        checks.append(
            Check(
                f"advantage_le_hybrid_bound[{r.epsilon:g}]",
                r.advantage_at_lower_bound,
                r.advantage_bound_at_lower_bound,
                1e-12,
                "bound",
            )
        )
    ordered = sorted(rows, key=lambda r: r.epsilon)
    for small, big in zip(ordered, ordered[1:]):
        checks.append(
            Check(f"T_min_monotone[{big.epsilon:g}<={small.epsilon:g}]", big.t_min, small.t_min, 0.0, "bound")
        )
    return Report(
        "sweep",
        inputs={"epsilons": eps, "target": args.target},
        results={"rows": len(rows)},
        checks=checks,
        table=table,
    )


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("json", "csv"), default=d if suppress else "json")
    p.add_argument("--seed", type=int, default=d)
    p.add_argument("--tolerance", type=float, default=d)
    p.add_argument("--quiet", action="store_true", default=d if suppress else False)
    p.add_argument(
        "--stable",
        action="store_true",
        default=d if suppress else False,
        help="report wall_time_ms as 0 so output is byte-identical across runs",
    )


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unitdisc", description="Unitary channel discrimination and query lower bounds.")
    _add_globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    a = sub.add_parser("analyze", help="spectral analysis of a pair of unitaries")
    a.add_argument("u1")
    a.add_argument("u2")

    g = sub.add_parser("gallery", help="build and verify the construction gallery")
    g.add_argument("case", nargs="?", choices=cons.CASE_NAMES)
    g.add_argument("--param", action="append", metavar="KEY=VALUE")

    s = sub.add_parser("simulate", help="simulate a distinguishing protocol")
    s.add_argument("protocol", choices=("qpe1", "swap", "copy", "hamsim", "bruteforce"))
    s.add_argument("--theta", type=float, default=0.0625)
    s.add_argument("--state", choices=("bell", "product", "psi2"), default="bell")
    s.add_argument("--delta", type=float, default=0.25)
    s.add_argument("--tprime", type=float, default=2.0)
    s.add_argument("--case", choices=("qpe", "iz", "entanglement"), default="qpe")
    s.add_argument("--epsilon", type=float, default=0.25)
    s.add_argument("--budget", type=int, default=10_000)
    s.add_argument("--trials", type=int, default=0)

    w = sub.add_parser("sweep", help="Heisenberg-scaling sweep on the phase-estimation pair")
    w.add_argument("epsilons", nargs="+", help="values in (0, 0.1], space or comma separated")
    w.add_argument("--target", type=float, default=1 / 3)

    for sp in (a, g, s, w):
        _add_globals(sp, suppress=True)
    return p


COMMANDS = {"analyze": cmd_analyze, "gallery": cmd_gallery, "simulate": cmd_simulate, "sweep": cmd_sweep}


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (NotUnitary, NotHermitian, DimensionMismatch)):
        return EXIT_MATRIX
    if isinstance(exc, (ParamOutOfRange, InvalidEpsilon)):
        return EXIT_RANGE
    return EXIT_NUMERIC


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if getattr(args, "budget", 100) < 100:
            raise UsageError("--budget must be at least 100")
        if getattr(args, "trials", 0) < 0:
            raise UsageError("--trials must be nonnegative")
        start = time.perf_counter()
        report = COMMANDS[args.command](args)
    except (UsageError, UnitdiscError) as exc:
        code = _exit_code(exc)
        print(f"unitdisc: error: {exc}", file=sys.stderr)
        return code
    if report.seed is None:
        report.seed = args.seed
    report.wall_time_ms = 0 if args.stable else int(round((time.perf_counter() - start) * 1000))
    out = report.to_csv() if args.format == "csv" else report.to_json() + "\n"
    sys.stdout.write(out)
    if not args.quiet:
        failed = [c.name for c in report.checks if not c.passed]
        summary = f"{len(report.checks)} checks, {len(report.checks) - len(failed)} passed"
        if failed:
            summary += "; failed: " + ", ".join(failed)
        print(summary, file=sys.stderr)
    return EXIT_OK if report.all_passed else EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
