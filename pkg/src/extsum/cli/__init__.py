"""Command line interface: ``extsum {run,validate-schedule,diagnose,list-problems}``.

Exit codes: 0 success, 1 usage or runtime error, 2 a hypothesis check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from ..core import PowerSchedule, validate_schedule
from ..diagnostics import diagnose
from ..errors import BaselineInapplicableError, ExtsumError, InvalidParameterError
from ..oracles import SelectionStrategy
from ..problems import builtin, list_problems
from ..splitting import AlgorithmConfig, run_efb, run_passty_fb, run_projected_eps_subgradient
from .config import ConfigError, load_config
from .traceio import TraceFormatError, read_trace, write_trace

__all__ = ["main", "cmd_run", "cmd_validate_schedule", "cmd_diagnose", "cmd_list_problems"]

EXIT_OK, EXIT_ERROR, EXIT_HYPOTHESIS = 0, 1, 2

_RUNNERS = {
    "efb": run_efb,
    "projected_eps_subgrad": run_projected_eps_subgradient,
    "passty": run_passty_fb,
}


def _err(msg):
    print(f"error: {msg}", file=sys.stderr)


def _algorithm_config(cfg):
    seed = cfg.seed
    strategy = SelectionStrategy(cfg.strategy, seed if cfg.strategy == "random" else None)
    return AlgorithmConfig(
        schedule=PowerSchedule(**cfg.schedule),
        strategy=strategy,
        max_iter=cfg.max_iter,
        record_every=cfg.record_every,
        unsafe_schedule=cfg.unsafe_schedule,
        tol=cfg.tol,
    )


def _run(cfg):
    """Execute one config; returns ``(exit_code, stdout_text, stderr_text)``."""
    out, err = [], []
    try:
        problem = builtin(cfg.problem_id)
        trace = _RUNNERS[cfg.algorithm](problem.spec, _algorithm_config(cfg))
    except BaselineInapplicableError as exc:
        return EXIT_ERROR, "", f"error: {exc} (iteration {exc.n})\n"
    except ExtsumError as exc:
        return EXIT_ERROR, "", f"error: {exc}\n"

    report = diagnose(trace, problem)
    if cfg.output_path:
        meta = {
            "problem_id": cfg.problem_id,
            "algorithm": cfg.algorithm,
            "config": cfg.echo(),
            "report": report.to_dict(),
        }
        try:
            write_trace(trace, cfg.output_path, cfg.resolved_format, metadata=meta)
        except OSError as exc:
            return EXIT_ERROR, "", f"error: cannot write {cfg.output_path}: {exc}\n"

    final_dist = float(trace.dist[-1]) if len(trace) else float("nan")
    fejer = "n/a" if report.fejer_violations is None else str(report.fejer_violations)
    out.append(f"problem={cfg.problem_id} algorithm={cfg.algorithm} iterations={cfg.max_iter}")
    out.append(f"final dist_to_solution = {final_dist:.6g}")
    out.append(f"h1_sup = {report.h1_sup:.17g} ({report.h1_trend})")
    out.append(f"fejer violations = {fejer}")
    if cfg.output_path:
        out.append(f"trace written to {cfg.output_path}")
    if trace.error is not None:
        err.append(f"error: {trace.error} (iteration {trace.error_n})")
        code = EXIT_ERROR
    elif report.failed:
        err.append("hypothesis check failed")
        code = EXIT_HYPOTHESIS
    else:
        code = EXIT_OK
    return code, "\n".join(out) + "\n", "\n".join(err) + ("\n" if err else "")


def cmd_run(config, jobs=1):
    """Run one `RunConfig` (or a list of them, `jobs` at a time)."""
    configs = config if isinstance(config, (list, tuple)) else [config]
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run, configs))
    else:
        results = [_run(c) for c in configs]
    for code, out, err in results:
        sys.stdout.write(out)
        sys.stderr.write(err)
    return max(code for code, _, _ in results)


def cmd_validate_schedule(c, p, q):
    try:
        report = validate_schedule(PowerSchedule(c, p, q))
    except (InvalidParameterError, ValueError, ZeroDivisionError) as exc:
        _err(exc)
        return EXIT_ERROR
    for line in report.lines():
        print(line)
    print("valid" if report.valid else "INVALID: " + "; ".join(report.reasons))
    return EXIT_OK if report.valid else EXIT_ERROR


def cmd_diagnose(trace_path, problem_id=None, margin=0.01):
    try:
        trace = read_trace(trace_path)
        problem_id = problem_id or trace.meta.get("problem_id")
        problem = builtin(problem_id) if problem_id else None
    except (OSError, TraceFormatError, InvalidParameterError) as exc:
        _err(exc)
        return EXIT_ERROR
    if len(trace) == 0:
        _err(f"{trace_path}: trace has no rows")
        return EXIT_ERROR
    report = diagnose(trace, problem, margin=margin)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_HYPOTHESIS if report.failed else EXIT_OK


def cmd_list_problems():
    for pid in list_problems():
        p = builtin(pid)
        notes = ", ".join(f"{k}={v}" for k, v in p.notes.items())
        print(f"{pid}: {p.description} [solution={p.solution.tolist()}; {notes}]")
    return EXIT_OK


def _parser():
    parser = argparse.ArgumentParser(prog="extsum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an algorithm on a builtin problem")
    run.add_argument("--config", action="append", default=[],
                     help="flat JSON config file (repeat for a sweep)")
    run.add_argument("--problem", dest="problem_id")
    run.add_argument("--algorithm", choices=sorted(_RUNNERS))
    run.add_argument("--c")
    run.add_argument("--p")
    run.add_argument("--q", help="accepts fractions such as 1/3")
    run.add_argument("--strategy", choices=["min_norm", "boundary", "random"])
    run.add_argument("--seed", type=int)
    run.add_argument("--max-iter", dest="max_iter", type=int)
    run.add_argument("--record-every", dest="record_every", type=int)
    run.add_argument("--output", dest="output_path")
    run.add_argument("--format", dest="output_format", choices=["csv", "json"])
    run.add_argument("--tol", help="stop once dist(xbar, S) < tol")
    run.add_argument("--unsafe-schedule", dest="unsafe_schedule", action="store_true", default=None)
    run.add_argument("--jobs", type=int, default=1)

    val = sub.add_parser("validate-schedule", help="check c*n^-p, n^-q against the step relations")
    val.add_argument("c")
    val.add_argument("p")
    val.add_argument("q")

    diag = sub.add_parser("diagnose", help="hypothesis report for a trace file")
    diag.add_argument("trace_path")
    diag.add_argument("--problem", dest="problem_id")
    diag.add_argument("--margin", type=float, default=0.01)

    sub.add_parser("list-problems", help="list builtin problems")
    return parser


_OVERRIDE_KEYS = ("problem_id", "algorithm", "c", "p", "q", "strategy", "seed", "max_iter",
                  "record_every", "output_path", "output_format", "tol", "unsafe_schedule")


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.command == "run":
        overrides = {k: getattr(args, k) for k in _OVERRIDE_KEYS}
        try:
            configs = [load_config(path, overrides) for path in (args.config or [None])]
        except ConfigError as exc:
            for key, msg in exc.errors.items():
                _err(f"{key}: {msg}")
            return EXIT_ERROR
        return cmd_run(configs, jobs=args.jobs)
    if args.command == "validate-schedule":
        return cmd_validate_schedule(args.c, args.p, args.q)
    if args.command == "diagnose":
        return cmd_diagnose(args.trace_path, args.problem_id, args.margin)
    return cmd_list_problems()


if __name__ == "__main__":
    sys.exit(main())
