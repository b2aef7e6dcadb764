"""Command-line interface: generate, solve, check, simulate.

Exit codes: 0 success (verified optimum), 2 invalid input, 3 result is only
an unverified upper bound, 4 internal numerical failure.  The environment
variable GUESSWORK_FACTORIAL_CAP overrides the exhaustive-search cap
(default 10).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import serialize
from .costs import identity_cost
from .engine import (
    min_guesswork_general,
    min_guesswork_qubit,
    simulate,
    tracenorm_argmax,
    zigzag_candidate,
)
from .ensembles import (
    EnsembleFamilySpec,
    antiprism_h_bound,
    constant_overlap_check,
    is_uniform_prior,
)
from .errors import FactorialCapError, NumericalCheckError
from .qap import DEFAULT_FACTORIAL_CAP, bloch_gram, find_benevolent_permutation, is_benevolent


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _cap() -> int:
    raw = os.environ.get("GUESSWORK_FACTORIAL_CAP", "")
    if not raw:
        return DEFAULT_FACTORIAL_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"GUESSWORK_FACTORIAL_CAP must be >= 1, got {cap}")
    return cap


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _write_json(path: str, doc) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(serialize.dumps(doc))
        handle.write("\n")


def _load_ensemble(path: str):
    return serialize.ensemble_from_json(_load_json(path))


def _load_cost(spec: str, size: int):
    if spec == "identity":
        return identity_cost(size)
    cost = serialize.cost_from_json(_load_json(spec), size_hint=size)
    if cost.size != size:
        raise ValueError(f"cost has {cost.size} values but the ensemble has {size} states")
    return cost


def cmd_generate(args) -> int:
    lam = args.lam if args.lam == "pure" else float(args.lam)
    spec = EnsembleFamilySpec(
        family=args.family, m=args.m, h=args.h, lam=lam, dim=args.dim, seed=args.seed
    )
    ensemble = spec.build()
    _write_json(args.out, serialize.ensemble_to_json(ensemble))
    print(f"family             {args.family}")
    print(f"states (M)         {ensemble.size}")
    print(f"dim                {ensemble.dim}")
    print(f"uniform prior      {'yes' if is_uniform_prior(ensemble) else 'no'}")
    if args.family in ("polygon_antiprism", "sic", "mub"):
        h = {"sic": antiprism_h_bound(4), "mub": antiprism_h_bound(6)}.get(args.family, args.h)
        bound = antiprism_h_bound(ensemble.size)
        if h > bound + 1e-12:
            status = "above bound"
        elif abs(h - bound) <= 1e-12:
            status = "saturates bound"
        else:
            status = "within bound"
        print(f"height h           {_fmt(h)} ({status}; bound {_fmt(bound)})")
    print(f"wrote              {args.out}")
    return 0


def _unverified_doc(cost, candidate, norm_value) -> dict:
    return {
        "value": cost.mean - norm_value / 2,
        "mean_cost": cost.mean,
        "trace_norm_term": norm_value / 2,
        "numbering": list(candidate),
        "method": "condition_check_only",
        "condition_verified": False,
        "measurement": {"elements": []},
    }


def _solve(ensemble, cost, method: str, tol: float, cap: int):
    """Dispatch to the qubit QAP solver or the general condition checker.

    Returns (report_or_none, unverified_doc_or_none).  In auto mode a
    cap-exceeding instance degrades to the uncertified zig-zag candidate
    instead of erroring out.
    """
    qubit_ready = ensemble.dim == 2 and is_uniform_prior(ensemble, tol)
    if method in ("brute", "benevolent"):
        return min_guesswork_qubit(ensemble, cost, method=method, tol=tol, cap=cap), None
    try:
        if qubit_ready:
            return min_guesswork_qubit(ensemble, cost, method=method, tol=tol, cap=cap), None
        report = min_guesswork_general(ensemble, cost, tol=tol, cap=cap)
        if report is not None:
            return report, None
        candidate, norm_value = tracenorm_argmax(ensemble, cost, cap=cap)
    except FactorialCapError:
        candidate, norm_value = zigzag_candidate(ensemble, cost)
    return None, _unverified_doc(cost, candidate, norm_value)


def cmd_solve(args) -> int:
    ensemble = _load_ensemble(args.ensemble)
    cost = _load_cost(args.cost, ensemble.size)
    if not cost.is_balanced:
        raise ValueError("cost not balanced: no permutation pairs values about the mean")
    report, bound_doc = _solve(ensemble, cost, args.method, args.tol, _cap())
    if report is None:
        print("optimality condition failed at the best candidate numbering")
        print(f"unverified upper bound   {_fmt(bound_doc['value'])}")
        print(f"candidate numbering      {' '.join(str(x) for x in bound_doc['numbering'])}")
        if args.out:
            _write_json(args.out, bound_doc)
        return 3
    print(f"minimum guesswork    {_fmt(report.value)}")
    print(f"mean cost            {_fmt(report.mean_cost)}")
    print(f"trace-norm term      {_fmt(report.trace_norm_term)}")
    print(f"numbering            {' '.join(str(x) for x in report.optimal_numbering)}")
    print(f"method               {report.method}")
    print(f"condition verified   {'yes' if report.condition_verified else 'no'}")
    if args.out:
        _write_json(args.out, serialize.report_to_json(report))
    return 0


def _recognize_antiprism(ensemble) -> tuple[float, float] | None:
    """Return (lambda, h) if the Bloch layout matches the canonical polygon/anti-prism."""
    bloch = ensemble.bloch
    m = ensemble.size
    radius = np.hypot(bloch[:, 0], bloch[:, 1])
    scale = float(radius.mean())
    if scale < 1e-12 or float(np.max(np.abs(radius - scale))) > 1e-8:
        return None
    height = np.abs(bloch[:, 2])
    h = float(height.mean()) / scale
    signs = np.array([(-1.0) ** index for index in range(m)])
    expected = np.stack(
        [
            scale * np.cos(2 * np.pi * np.arange(m) / m),
            scale * np.sin(2 * np.pi * np.arange(m) / m),
            scale * h * signs,
        ],
        axis=1,
    )
    if float(np.max(np.abs(bloch - expected))) > 1e-8:
        return None
    return scale, h


def cmd_check(args) -> int:
    ensemble = _load_ensemble(args.ensemble)
    print(f"states (M)           {ensemble.size}")
    print(f"dim                  {ensemble.dim}")
    print(f"uniform prior        {'yes' if is_uniform_prior(ensemble, args.tol) else 'no'}")
    if ensemble.dim != 2:
        print(f"bloch checks skipped (dim = {ensemble.dim})")
        return 0
    print(
        "constant overlap     "
        f"{'yes' if constant_overlap_check(ensemble, args.tol) else 'no'}"
    )
    gram = -bloch_gram(ensemble)
    report = is_benevolent(gram, args.tol)
    print(f"symmetric toeplitz   {'yes' if report.is_symmetric_toeplitz else 'no'}")
    print(f"property1_ok         {'yes' if report.property1_ok else 'no'}")
    print(f"property2_ok         {'yes' if report.property2_ok else 'no'}")
    if report.failing_index is not None:
        print(f"failing index        {report.failing_index}")
    if report.is_benevolent:
        print("benevolent           yes (canonical labeling)")
    else:
        witness = find_benevolent_permutation(gram, tol=args.tol, cap=_cap())
        if witness is None:
            print("benevolent           no (no relabeling found)")
        else:
            print(f"benevolent           yes (relabeling {' '.join(str(x) for x in witness)})")
    recognized = _recognize_antiprism(ensemble)
    if recognized is None:
        print("h-bound              skipped (not a canonical polygon/anti-prism layout)")
    else:
        _, h = recognized
        bound = antiprism_h_bound(ensemble.size)
        relation = "<=" if h <= bound + 1e-12 else ">"
        print(f"h-bound              h = {_fmt(h)} {relation} bound {_fmt(bound)}")
    return 0


def cmd_simulate(args) -> int:
    ensemble = _load_ensemble(args.ensemble)
    cost = _load_cost(args.cost, ensemble.size)
    if not cost.is_balanced:
        raise ValueError("cost not balanced: no permutation pairs values about the mean")
    report, _ = _solve(ensemble, cost, "auto", args.tol, _cap())
    if report is None:
        print("no verified optimal measurement; nothing to simulate")
        return 3
    estimate, std_error = simulate(
        ensemble, cost, report.measurement, args.samples, args.seed, tol=args.tol
    )
    gap = estimate - report.value
    if math.isnan(std_error):
        z = None
    elif std_error == 0.0:
        z = 0.0 if gap == 0.0 else math.inf
    else:
        z = gap / std_error
    print(f"estimate             {_fmt(estimate)}")
    print(f"std error            {'unavailable' if math.isnan(std_error) else _fmt(std_error)}")
    print(f"analytic value       {_fmt(report.value)}")
    print(f"z-score              {'unavailable' if z is None else _fmt(z)}")
    if args.out:
        _write_json(
            args.out,
            {
                "estimate": estimate,
                "std_error": None if math.isnan(std_error) else std_error,
                "analytic": report.value,
                "z": None if z is None or math.isinf(z) else z,
                "samples": args.samples,
                "seed": args.seed,
            },
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="guesswork",
        description="Minimum guesswork of quantum ensembles under balanced cost functions.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("generate", help="generate an ensemble JSON file")
    gen.add_argument(
        "--family",
        required=True,
        choices=["polygon_antiprism", "sic", "mub", "random"],
    )
    gen.add_argument("--m", type=int, default=0, help="number of states M")
    gen.add_argument("--h", type=float, default=0.0, help="anti-prism height (Bloch units)")
    gen.add_argument(
        "--lambda",
        dest="lam",
        default="pure",
        help="Bloch radius scale, or 'pure' (default)",
    )
    gen.add_argument("--dim", type=int, default=2, help="dimension (random family)")
    gen.add_argument("--seed", type=int, default=0, help="seed (random family)")
    gen.add_argument("--out", required=True, help="output path for the ensemble JSON")
    gen.set_defaults(func=cmd_generate)

    solve = sub.add_parser("solve", help="compute the minimum guesswork")
    solve.add_argument("--ensemble", required=True, help="ensemble JSON path")
    solve.add_argument("--cost", default="identity", help="'identity' or a cost JSON path")
    solve.add_argument("--method", default="auto", choices=["auto", "brute", "benevolent"])
    solve.add_argument("--tol", type=float, default=1e-10, help="spectral/PSD tolerance")
    solve.add_argument("--out", help="write the report JSON here")
    solve.set_defaults(func=cmd_solve)

    check = sub.add_parser("check", help="report ensemble structure")
    check.add_argument("--ensemble", required=True, help="ensemble JSON path")
    check.add_argument("--tol", type=float, default=1e-10, help="structure tolerance")
    check.set_defaults(func=cmd_check)

    sim = sub.add_parser("simulate", help="Monte Carlo check of the optimal measurement")
    sim.add_argument("--ensemble", required=True, help="ensemble JSON path")
    sim.add_argument("--cost", default="identity", help="'identity' or a cost JSON path")
    sim.add_argument("--samples", type=int, default=100000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--tol", type=float, default=1e-10, help="spectral/PSD tolerance")
    sim.add_argument("--out", help="write the estimate JSON here")
    sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", 1.0) <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except NumericalCheckError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
