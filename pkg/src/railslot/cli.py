"""Command-line surface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench, io, plots, presets
from .errors import ParseError, RailslotError, TooLarge
from .generate import GenerationSpec, generate_instance
from .model import MarketParams
from .optimize import Algorithm, AlgorithmConfig, run
from .scheduling import decode_vector, evaluate_proposal, exhaustive_oracle

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_RUNTIME = 0, 1, 2, 3


def _load_instance(path: str):
    return io.parse_instance(Path(path).read_text())


def _result_payload(instance, vector, result, trace=None) -> dict:
    proposals = decode_vector(instance, vector)
    payload = {
        "departures": {
            req.id: list(deps) for req, deps in zip(instance.requests, proposals)
        },
        "scheduled": {
            req.id: bool(flag) for req, flag in zip(instance.requests, result.scheduled)
        },
        "infeasible": sorted(result.infeasible),
        "total_revenue": result.total,
        "scheduled_trains": result.n_scheduled,
        "delta_dt_min": result.delta_dt,
        "delta_tt_min": result.delta_tt,
        "breakdowns": [
            {
                "service": b.service_id,
                "base_fee": b.base_fee,
                "alpha": b.alpha,
                "beta_sum": b.beta_sum,
                "dt_penalty": b.dt_penalty,
                "tt_penalty": b.tt_penalty,
                "net_revenue": b.net_revenue,
            }
            for b, flag in zip(result.breakdowns, result.scheduled)
            if flag
        ],
    }
    if trace is not None:
        payload["trace"] = {
            "best_fitness": trace.best_fitness,
            "evaluations": trace.evaluations,
            "wall_time_s": trace.wall_time_s,
        }
    return payload


def _cmd_generate(args) -> int:
    spec = GenerationSpec(
        n_services=args.services,
        n_operators=args.operators,
        seed=args.seed,
        params=MarketParams(delta=args.delta, omega=args.omega),
    )
    instance = generate_instance(spec)
    Path(args.out).write_text(io.serialize_instance(instance))
    print(f"wrote {args.out}: {instance.n_services} services, {len(instance.operators)} operators")
    return EXIT_OK


def _cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    config = AlgorithmConfig(
        algorithm=Algorithm(args.algo),
        epochs=args.epochs,
        population=args.pop,
        seed=args.seed,
    )
    trace = run(instance, config)
    payload = _result_payload(instance, trace.best_vector, trace.result, trace)
    payload["algorithm"] = config.algorithm.value
    payload["seed"] = config.seed
    Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True))
    print(
        f"{config.algorithm.value}: revenue {trace.result.total:.2f}, "
        f"{trace.result.n_scheduled}/{instance.n_services} scheduled -> {args.out}"
    )
    return EXIT_OK


def _cmd_oracle(args) -> int:
    instance = _load_instance(args.instance)
    if args.proposal:
        vector = io.parse_proposal(Path(args.proposal).read_text(), instance)
    else:
        vector = [d for req in instance.requests for d in req.requested_departures]
    result = exhaustive_oracle(instance, vector, cap=args.cap)
    payload = _result_payload(instance, np.asarray(vector), result)
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True))
    print(
        f"oracle: revenue {result.total:.2f}, "
        f"{result.n_scheduled}/{instance.n_services} scheduled"
    )
    return EXIT_OK


def _cmd_bench(args) -> int:
    instance = _load_instance(args.instance)
    configs = []
    for name in args.algos.split(","):
        algorithm = Algorithm(name.strip())
        if args.preset:
            configs.append(presets.config_for(algorithm, args.preset))
        else:
            epochs, population = (2000, 1) if algorithm is Algorithm.SA else (args.epochs, args.pop)
            configs.append(AlgorithmConfig(algorithm=algorithm, epochs=epochs, population=population))
    report = bench.run_experiment(instance, configs, args.runs, args.seed)
    Path(args.out).write_text(report.to_csv())
    print(f"wrote {args.out}: {len(report.rows)} rows")
    return EXIT_OK


def _cmd_sensitivity(args) -> int:
    spec_data = json.loads(Path(args.spec).read_text())
    gen = spec_data.get("generation", {})
    gen_spec = GenerationSpec(
        n_services=int(gen.get("services", 25)),
        n_operators=int(gen.get("operators", 4)),
        seed=int(gen.get("seed", 0)),
    )
    configs = [
        AlgorithmConfig(
            algorithm=Algorithm(name),
            epochs=int(spec_data.get("epochs", 100)),
            population=int(spec_data.get("population", 20)),
        )
        for name in spec_data.get("algorithms", ["ga"])
    ]
    grid = bench.sensitivity_grid(
        gen_spec,
        omega_values=spec_data.get("omegas", [2.5, 5.0, 10.0]),
        delta_values=spec_data.get("deltas", [30.0, 45.0, 60.0]),
        algorithms=configs,
        runs=int(spec_data.get("runs", 1)),
        base_seed=int(spec_data.get("base_seed", 0)),
    )
    Path(args.out).write_text(bench.grid_to_csv(grid))
    print(f"wrote {args.out}: {len(grid)} cells")
    return EXIT_OK


def _cmd_plot(args) -> int:
    if args.chart == "marey":
        instance = _load_instance(args.instance)
        vector = None
        scheduled = None
        if args.result:
            payload = json.loads(Path(args.result).read_text())
            departures = payload["departures"]
            vector = [v for req in instance.requests for v in departures[req.id]]
            if "scheduled" in payload:
                scheduled = [payload["scheduled"][req.id] for req in instance.requests]
        svg = plots.marey_svg(instance, vector, scheduled)
    else:
        traces = []
        for path in args.traces:
            payload = json.loads(Path(path).read_text())
            label = payload.get("algorithm", Path(path).stem)
            traces.append((label, payload["trace"]["best_fitness"]))
        svg = plots.convergence_svg(traces)
    Path(args.out).write_text(svg)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="railslot", description="Corridor slot allocation and timetable optimization."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a pseudo-random instance")
    g.add_argument("--services", type=int, default=25)
    g.add_argument("--operators", type=int, default=4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--delta", type=float, default=10.0)
    g.add_argument("--omega", type=float, default=10.0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_generate)

    s = sub.add_parser("solve", help="optimize departure times with a metaheuristic")
    s.add_argument("--instance", required=True)
    s.add_argument("--algo", default="ga", choices=[a.value for a in Algorithm])
    s.add_argument("--epochs", type=int, default=100)
    s.add_argument("--pop", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_solve)

    o = sub.add_parser("oracle", help="exhaustive best subset at requested or proposed times")
    o.add_argument("--instance", required=True)
    o.add_argument("--proposal", help="optional proposal JSON")
    o.add_argument("--cap", type=int, default=20)
    o.add_argument("--out")
    o.set_defaults(func=_cmd_oracle)

    b = sub.add_parser("bench", help="multi-run benchmark across algorithms")
    b.add_argument("--instance", required=True)
    b.add_argument("--algos", default="ga,pso,sa,de,acor,gwo,woa,gwo_woa")
    b.add_argument("--runs", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--epochs", type=int, default=100)
    b.add_argument("--pop", type=int, default=20)
    b.add_argument("--preset", choices=sorted(presets.PRESETS))
    b.add_argument("--out", required=True)
    b.set_defaults(func=_cmd_bench)

    n = sub.add_parser("sensitivity", help="mean-revenue grid over headway and margin values")
    n.add_argument("--spec", required=True)
    n.add_argument("--out", required=True)
    n.set_defaults(func=_cmd_sensitivity)

    p = sub.add_parser("plot", help="render SVG charts")
    p.add_argument("chart", choices=["marey", "convergence"])
    p.add_argument("--instance")
    p.add_argument("--result")
    p.add_argument("--traces", nargs="*", default=[])
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.command == "plot":
        if args.chart == "marey" and not args.instance:
            print("plot marey requires --instance", file=sys.stderr)
            return EXIT_USAGE
        if args.chart == "convergence" and not args.traces:
            print("plot convergence requires --traces", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (TooLarge, NotImplementedError, RailslotError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
