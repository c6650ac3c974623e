"""Command-line front end: ``geninv invert | simulate | verify | scenarios``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error. Any long
option can also come from a ``key=value`` file passed with ``--config``;
explicit flags win. ``GENINV_SEED`` sets the default verification seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace

from .balance import BalanceSettings
from .inverses import BlockPartition, InverseKind, mixed_inverse, uc_inverse
from .matrix import InvalidInputError, pinv, read_matrix, write_matrix
from .scenarios import REGISTRY, ScenarioSpec, evaluate, reported_rates, reported_states
from .simulation import ARM_TARGET, ROVER_TARGET, SimulationConfig, run
from .verify import SUITES, run_suite

SEED_ENV = "GENINV_SEED"


class UsageError(Exception):
    pass


def read_config(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _rank_tol(text):
    return text if text == "auto" else float(text)


def _balance_args(p):
    p.add_argument("--tol", type=float, default=1e-22,
                   help="balancing convergence tolerance (default 1e-22)")
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--zero-threshold", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geninv", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file supplying option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invert", help="invert a CSV matrix")
    p.add_argument("input", help="matrix CSV path, or - for stdin")
    p.add_argument("--kind", choices=[k.value for k in InverseKind], default="mp")
    p.add_argument("--split", type=int, help="leading unit-consistent variables (mixed)")
    p.add_argument("--rank-tol", type=_rank_tol, default="auto")
    p.add_argument("-o", "--out", default="-", help="output path (default stdout)")
    _balance_args(p)

    p = sub.add_parser("simulate", help="run a named scenario or an explicit experiment")
    p.add_argument("scenario", nargs="?", help="registry name (see `geninv scenarios`)")
    p.add_argument("--model", choices=["arm", "rover"])
    p.add_argument("--inverse", choices=[k.value for k in InverseKind])
    p.add_argument("--split", type=int)
    p.add_argument("--units", choices=["m", "cm"])
    p.add_argument("--rotation-deg", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--duration", type=float)
    p.add_argument("--out", help="trajectory CSV path (default <scenario>.csv)")
    p.add_argument("--summary", default="-", help="JSON summary path (default stdout)")

    p = sub.add_parser("verify", help="run a property or reproduction suite")
    p.add_argument("suite", choices=[*SUITES, "all"])
    p.add_argument("--seed", type=int, default=int(os.environ.get(SEED_ENV, "0")))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--out", default="-", help="JSON report path (default stdout)")

    sub.add_parser("scenarios", help="list built-in scenarios")
    return parser


def _apply_config(parser, config):
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in sub_action.choices.values():
        dests = {a.dest for a in sp._actions}
        sp.set_defaults(**{k: v for k, v in config.items() if k in dests})


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", encoding="utf-8", newline="")


def _write_json(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_invert(args) -> int:
    try:
        a = read_matrix(sys.stdin if args.input == "-" else args.input)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    settings = BalanceSettings(args.tol, args.max_iter, args.zero_threshold)
    kind = InverseKind(args.kind)
    if kind is InverseKind.MP:
        inv = pinv(a, args.rank_tol)
    elif kind is InverseKind.UC:
        inv = uc_inverse(a, settings, args.rank_tol)
    else:
        if args.split is None:
            raise UsageError("--split is required for --kind mixed")
        inv = mixed_inverse(BlockPartition.from_matrix(a, args.split), settings, args.rank_tol)
    out = _open_out(args.out)
    try:
        write_matrix(inv, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _simulation_spec(args) -> ScenarioSpec:
    if args.scenario:
        if args.scenario not in REGISTRY:
            raise UsageError(f"unknown scenario {args.scenario!r}; known: {', '.join(REGISTRY)}")
        spec = REGISTRY[args.scenario]
        overrides = {}
    else:
        if not (args.model and args.inverse):
            raise UsageError("give a scenario name or at least --model and --inverse")
        spec = None
        overrides = {"model": args.model, "inverse": args.inverse,
                     "v": ARM_TARGET if args.model == "arm" else ROVER_TARGET}
    if args.inverse:
        overrides["inverse"] = args.inverse
    if args.split is not None:
        overrides["split"] = args.split
    if args.units:
        overrides["unit_scale"] = 100.0 if args.units == "cm" else 1.0
    if args.rotation_deg is not None:
        overrides["theta_prime"] = math.radians(args.rotation_deg)
    if args.dt is not None:
        overrides["dt"] = args.dt
    if args.duration is not None:
        overrides["duration"] = args.duration
    if spec is None:
        cfg = SimulationConfig(**overrides)
        return ScenarioSpec("custom", cfg, ())
    if overrides:
        # overridden scenarios no longer match their reference values
        return ScenarioSpec(f"{spec.name}+custom", replace(spec.config, **overrides), ())
    return spec


def trajectory_csv(result) -> str:
    k = result.config.n_joints
    header = (["t"] + [f"qd_{i}" for i in range(1, k + 1)] + [f"q_{i}" for i in range(1, k + 1)]
              + [f"v_{i}" for i in range(1, k + 1)] + ["residual"])
    rates, states = reported_rates(result), reported_states(result)
    lines = [",".join(header)]
    for rec, qd, q in zip(result.records, rates, states):
        row = [rec.t, *qd, *q, *rec.achieved_v, rec.residual]
        lines.append(",".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    spec = _simulation_spec(args)
    result = run(spec.config)
    out_path = args.out or f"{spec.name}.csv"
    out = _open_out(out_path)
    try:
        out.write(trajectory_csv(result))
    finally:
        if out is not sys.stdout:
            out.close()
    summary = evaluate(spec, result)
    summary["trajectory"] = out_path
    _write_json(summary, args.summary)
    return 0 if summary["pass"] else 1


def cmd_verify(args) -> int:
    report = run_suite(args.suite, seed=args.seed, trials=args.trials)
    _write_json(report, args.out)
    return 0 if report["pass"] else 1


def cmd_scenarios(args) -> int:
    for name, spec in REGISTRY.items():
        print(f"{name:24s} {spec.description}")
    return 0


COMMANDS = {"invert": cmd_invert, "simulate": cmd_simulate, "verify": cmd_verify,
            "scenarios": cmd_scenarios}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    try:
        if known.config:
            _apply_config(parser, read_config(known.config))
        try:
            args = parser.parse_args(rest)
        except SystemExit as exc:
            # argparse exits 2 on bad usage and 0 after --help
            return int(exc.code or 0)
        return COMMANDS[args.command](args)
    except (UsageError, InvalidInputError, OSError) as exc:
        print(f"geninv: error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
