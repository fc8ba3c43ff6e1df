#!/usr/bin/env python3
"""Pairwise statistical comparison of two search strategies.

Runs both algorithms across several seeds on the same instance, then reports
the Kolmogorov-Smirnov distance between the revenue distributions and the
Wilcoxon signed-rank p-value over seed-paired runs.

Example:
    python3 scripts/compare_algorithms.py --first ga --second de --runs 10
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from railslot.generate import GenerationSpec, generate_instance
from railslot.optimize import Algorithm, AlgorithmConfig, run
from railslot.stats import ks_two_sample, wilcoxon_signed_rank


def _revenues(instance, algorithm, runs, epochs, pop):
    out = []
    pop = 1 if algorithm is Algorithm.SA else pop
    epochs = epochs * pop if algorithm is Algorithm.SA else epochs
    for seed in range(runs):
        cfg = AlgorithmConfig(algorithm=algorithm, epochs=epochs, population=pop, seed=seed)
        out.append(run(instance, cfg).best_fitness[-1])
    return out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--first", default="ga")
    parser.add_argument("--second", default="de")
    parser.add_argument("--services", type=int, default=25)
    parser.add_argument("--instance-seed", type=int, default=0)
    parser.add_argument("--runs", type=int, default=10)
    parser.add_argument("--epochs", type=int, default=50)
    parser.add_argument("--pop", type=int, default=20)
    args = parser.parse_args()

    instance = generate_instance(
        GenerationSpec(n_services=args.services, seed=args.instance_seed)
    )
    a = _revenues(instance, Algorithm(args.first), args.runs, args.epochs, args.pop)
    b = _revenues(instance, Algorithm(args.second), args.runs, args.epochs, args.pop)

    print(f"{args.first}: mean={sum(a) / len(a):.2f}  runs={a}")
    print(f"{args.second}: mean={sum(b) / len(b):.2f}  runs={b}")
    d, p_ks = ks_two_sample(a, b)
    w, p_w = wilcoxon_signed_rank(a, b)
    print(f"KS: D={d:.4f} p={p_ks:.4f}")
    print(f"Wilcoxon (seed-paired): W={w:.1f} p={p_w:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
