#!/usr/bin/env python3
"""Mean-revenue sensitivity grid over safety headway and modification margin.

Regenerates the instance for each (omega, delta) cell, optimizes it, and
writes a heatmap-ready CSV.

Example:
    python3 scripts/run_sensitivity.py --omegas 2.5 5 10 --deltas 10 30 60 \
        --out results/sensitivity.csv
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from railslot.bench import grid_to_csv, sensitivity_grid
from railslot.generate import GenerationSpec
from railslot.optimize import Algorithm, AlgorithmConfig


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--services", type=int, default=25)
    parser.add_argument("--operators", type=int, default=4)
    parser.add_argument("--instance-seed", type=int, default=0)
    parser.add_argument("--omegas", type=float, nargs="+", default=[2.5, 5.0, 10.0])
    parser.add_argument("--deltas", type=float, nargs="+", default=[10.0, 30.0, 60.0])
    parser.add_argument("--algo", default="ga")
    parser.add_argument("--epochs", type=int, default=100)
    parser.add_argument("--pop", type=int, default=20)
    parser.add_argument("--runs", type=int, default=1)
    parser.add_argument("--out", default="results/sensitivity.csv")
    args = parser.parse_args()

    spec = GenerationSpec(
        n_services=args.services, n_operators=args.operators, seed=args.instance_seed
    )
    algorithm = Algorithm(args.algo)
    epochs, pop = (
        (args.epochs * args.pop, 1) if algorithm is Algorithm.SA else (args.epochs, args.pop)
    )
    grid = sensitivity_grid(
        spec,
        omega_values=args.omegas,
        delta_values=args.deltas,
        algorithms=[AlgorithmConfig(algorithm=algorithm, epochs=epochs, population=pop)],
        runs=args.runs,
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(grid_to_csv(grid))
    print(f"wrote {out}")
    for (omega, delta), revenue in sorted(grid.items()):
        print(f"omega={omega:<6g} delta={delta:<6g} mean revenue={revenue:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
