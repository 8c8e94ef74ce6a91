"""Command-line entry point: ``seqtik {sweep,solve,check,oracle-compare}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..errors import InvalidInputError, SeqtikError
from ..model import RegProblem, gen_truth, make_problem, random_operator
from ..tikhonov import RegConfig, alpha_apriori, solve
from .checks import inequality_suites, oracle_suites
from .report import emit_report
from .sweep import SweepConfig, derive_seed, resolve_truncation, run_sweep

log = logging.getLogger("seqtik")


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: not valid JSON ({exc})") from None


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _sweep_config(args) -> SweepConfig:
    data = _read_json(args.config)
    if args.seed is not None:
        data["seed"] = args.seed
    return SweepConfig.from_dict(data)


def cmd_sweep(args) -> int:
    config = _sweep_config(args)
    report = run_sweep(config, threads=args.threads)
    log.info("sweep finished in %.2fs (n=%d)", report.wall_time, report.metadata["n"])
    text = emit_report(report, args.format, None)
    _write(text, args.out)
    return 0


def cmd_solve(args) -> int:
    data = _read_json(args.config)
    if "weights" in data:
        problem = RegProblem.from_dict(data)
        if problem.params is None:
            raise InvalidInputError("problem file must carry params to pick alpha")
        params = problem.params
    else:
        if args.seed is not None:
            data["seed"] = args.seed
        config = SweepConfig.from_dict(data)
        params = config.params
        delta = args.delta if args.delta is not None else config.deltas[-1]
        n, _, _ = resolve_truncation(config)
        op = random_operator(n, params.a, derive_seed(config.seed, 3))
        u_dagger = gen_truth(config.truth_kind, n, params, config.decay_margin,
                             derive_seed(config.seed, 2), config.sparsity)
        problem = make_problem(op, u_dagger, delta, derive_seed(config.seed, 1, 0, 0), params)
    alpha = args.alpha if args.alpha is not None else alpha_apriori(problem.delta, params)
    solution = solve(problem, RegConfig(params, alpha))
    out = {"problem": problem.to_dict(), "alpha": alpha, "solution": solution.to_dict()}
    _write(json.dumps(out) + "\n", args.out)
    return 0


def _suite_command(results, args) -> int:
    for res in results:
        print(res.summary(), file=sys.stderr)
    if args.out is not None:
        Path(args.out).write_text(json.dumps([r.to_dict() for r in results], indent=2) + "\n")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(json.dumps({"error": "CheckFailed", "message": "suites failed", "suites": failed}),
              file=sys.stderr)
        return 1
    return 0


def cmd_check(args) -> int:
    return _suite_command(inequality_suites(args.cases, args.seed or 0), args)


def cmd_oracle_compare(args) -> int:
    return _suite_command(oracle_suites(args.seed or 0), args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqtik", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a noise-level sweep from a JSON config")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out")
    sweep.add_argument("--format", choices=("csv", "json"), default="json")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--threads", type=int, default=1)
    sweep.set_defaults(func=cmd_sweep)

    single = sub.add_parser("solve", help="solve one instance (problem JSON or sweep config)")
    single.add_argument("--config", required=True)
    single.add_argument("--out")
    single.add_argument("--seed", type=int)
    single.add_argument("--delta", type=float, help="noise level when --config is a sweep config")
    single.add_argument("--alpha", type=float, help="override the a priori parameter")
    single.set_defaults(func=cmd_solve)

    check = sub.add_parser("check", help="randomized inequality suites")
    check.add_argument("--cases", type=int, default=10_000)
    check.add_argument("--seed", type=int)
    check.add_argument("--out")
    check.set_defaults(func=cmd_check)

    oracle = sub.add_parser("oracle-compare", help="solver vs brute-force oracle")
    oracle.add_argument("--seed", type=int)
    oracle.add_argument("--out")
    oracle.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SeqtikError as exc:
        payload = exc.to_dict() if hasattr(exc, "to_dict") else {
            "error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return 2 if isinstance(exc, InvalidInputError) else 1
    except (OSError, TypeError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
