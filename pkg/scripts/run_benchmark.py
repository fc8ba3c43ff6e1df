#!/usr/bin/env python3
"""Benchmark all implemented search strategies on a seeded instance.

Writes a ranked CSV of per-run results plus per-algorithm summaries, and an
SVG with one convergence curve per algorithm.

Example:
    python3 scripts/run_benchmark.py --services 25 --runs 5 --epochs 100 \
        --pop 20 --out-dir results/
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from railslot.bench import run_experiment
from railslot.generate import GenerationSpec, generate_instance
from railslot.optimize import Algorithm, AlgorithmConfig, run
from railslot.plots import convergence_svg

IMPLEMENTED = ("ga", "pso", "sa", "de", "acor", "gwo", "woa", "gwo_woa")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--services", type=int, default=25)
    parser.add_argument("--operators", type=int, default=4)
    parser.add_argument("--instance-seed", type=int, default=0)
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--epochs", type=int, default=100)
    parser.add_argument("--pop", type=int, default=20)
    parser.add_argument("--algos", default=",".join(IMPLEMENTED))
    parser.add_argument("--out-dir", default="results")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    instance = generate_instance(
        GenerationSpec(
            n_services=args.services, n_operators=args.operators, seed=args.instance_seed
        )
    )

    configs = []
    for name in args.algos.split(","):
        algorithm = Algorithm(name.strip())
        epochs, pop = (
            (args.epochs * args.pop, 1)
            if algorithm is Algorithm.SA
            else (args.epochs, args.pop)
        )
        configs.append(AlgorithmConfig(algorithm=algorithm, epochs=epochs, population=pop))

    report = run_experiment(instance, configs, runs_per_algorithm=args.runs)
    csv_path = out_dir / "benchmark.csv"
    csv_path.write_text(report.to_csv())
    print(f"wrote {csv_path}")

    print(f"{'algorithm':<10} {'mean revenue':>14} {'std':>10} {'mean trains':>12} {'mean s':>8}")
    for s in sorted(report.summaries, key=lambda s: -s.mean_revenue):
        print(
            f"{s.algorithm:<10} {s.mean_revenue:>14.2f} {s.std_revenue:>10.2f} "
            f"{s.mean_trains:>12.2f} {s.mean_time:>8.2f}"
        )

    traces = [
        (cfg.algorithm.value, run(instance, cfg).best_fitness) for cfg in configs
    ]
    svg_path = out_dir / "convergence.svg"
    svg_path.write_text(convergence_svg(traces))
    print(f"wrote {svg_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
