"""End-to-end acceptance gate.

One test per criterion; the terminal summary (see conftest) prints a single
PASS/FAIL line for each. Tolerances and runtime budgets are pinned in the
assertions themselves.
"""
import itertools
import math
import time
from pathlib import Path

import numpy as np
import pytest

from railslot import io as rio
from railslot.conflict import TrainPath, conflict_matrix, pair_conflict
from railslot.errors import TooLarge
from railslot.generate import GenerationSpec, generate_instance
from railslot.model import derive_times
from railslot.optimize import Algorithm, AlgorithmConfig, run
from railslot.revenue import penalty_curve
from railslot.scheduling import decode_vector, evaluate_proposal, exhaustive_oracle
from railslot.stats import ks_two_sample, wilcoxon_signed_rank

from conftest import (
    dense_conflict_oracle,
    random_instance,
    random_service,
    requested_vector,
    with_params,
)

EXAMPLES = Path(__file__).resolve().parent.parent / "examples"
DATA = Path(__file__).resolve().parent.parent / "data"


def test_criterion_1_reference_conflict_matrix():
    """Three-service corridor instance yields conflicts 1-3 and 2-3 only, < 1 s."""
    started = time.monotonic()
    inst = rio.parse_instance((EXAMPLES / "madrid-barcelona.json").read_text())
    inst = with_params(inst, omega=10.0)
    stops = [req.stops for req in inst.requests]
    bits = conflict_matrix(inst, stops).bits
    expected = np.array([[0, 0, 1], [0, 0, 1], [1, 1, 0]], dtype=np.int8)
    assert np.array_equal(bits, expected)
    assert time.monotonic() - started < 1.0


def test_criterion_2_optimized_times_coexist():
    """The shipped optimized departures host all three services at omega=5."""
    inst = rio.parse_instance((DATA / "madrid-barcelona.json").read_text())
    inst = with_params(inst, omega=5.0)
    vector = rio.parse_proposal((DATA / "table4-odt.json").read_text(), inst)
    result = evaluate_proposal(inst, vector)
    assert result.scheduled == (True, True, True)
    stops = [
        derive_times(req, deps)
        for req, deps in zip(inst.requests, decode_vector(inst, vector))
    ]
    assert not conflict_matrix(inst, stops).bits.any()


def test_criterion_3_penalty_curve():
    for k in (0.5, 1.0, 5.0, 20.0, 100.0):
        assert abs(penalty_curve(0.0, k)) < 1e-12
        assert abs(penalty_curve(1.0, k) - 1.0) < 1e-12
        values = [penalty_curve(i / 999, k) for i in range(1000)]
        assert all(b >= a for a, b in zip(values, values[1:]))
    # independently recomputed: 1 - exp(-1/4) * (cos(pi/2)/2 + 1/2)
    assert penalty_curve(0.5, 1.0) == pytest.approx(1 - math.exp(-0.25) / 2, abs=1e-12)
    assert penalty_curve(0.5, 1.0) == pytest.approx(0.610600, abs=1e-6)


def test_criterion_4_greedy_vs_oracle():
    """200 seeded instances: greedy never beats the oracle and stays
    conflict-free; the pinned 3-service construction gives 150 vs 180."""
    started = time.monotonic()
    for seed in range(200):
        inst = random_instance(seed, n_services=3 + seed % 8)
        vec = requested_vector(inst)
        greedy = evaluate_proposal(inst, vec)
        oracle = exhaustive_oracle(inst, vec)
        assert greedy.total <= oracle.total + 1e-9, seed
        picked = [i for i, ok in enumerate(greedy.scheduled) if ok]
        stops = [
            derive_times(req, deps)
            for req, deps in zip(inst.requests, decode_vector(inst, vec))
        ]
        bits = conflict_matrix(inst, stops).bits
        assert not any(bits[i, j] for i in picked for j in picked if i != j), seed

    inst = rio.parse_instance((DATA / "madrid-barcelona.json").read_text())
    inst = with_params(inst, omega=10.0)
    vec = requested_vector(inst)
    assert evaluate_proposal(inst, vec).total == pytest.approx(150.0)
    oracle = exhaustive_oracle(inst, vec)
    assert oracle.total == pytest.approx(180.0)
    assert oracle.scheduled == (True, True, False)
    assert time.monotonic() - started < 30.0


def test_criterion_5_baseline_dominance_and_determinism():
    """Default-budget GA on a seeded 25-service instance beats the
    requested-times baseline; identical seeds give identical monotone traces."""
    started = time.monotonic()
    inst = generate_instance(GenerationSpec(n_services=25, n_operators=4, seed=0))
    baseline = evaluate_proposal(inst, requested_vector(inst)).total
    config = AlgorithmConfig(algorithm=Algorithm.GA, epochs=100, population=20, seed=0)
    a = run(inst, config)
    b = run(inst, config)
    assert a.best_fitness[-1] >= baseline - 1e-9
    assert a.best_fitness == b.best_fitness
    assert all(y >= x for x, y in zip(a.best_fitness, a.best_fitness[1:]))
    assert time.monotonic() - started < 120.0


def test_criterion_6_statistical_tests():
    d, p = ks_two_sample([2.0, 4.0, 6.0], [2.0, 4.0, 6.0])
    assert d == 0.0 and p == 1.0

    # exact branch vs an in-test permutation enumeration, all sizes <= 8
    def ecdf_sup(x, y):
        return max(
            abs(sum(v <= t for v in x) / len(x) - sum(v <= t for v in y) / len(y))
            for t in list(x) + list(y)
        )

    rng = np.random.default_rng(123)
    for n in range(1, 9):
        for m in range(1, 9):
            a = list(rng.normal(size=n))
            b = list(rng.normal(0.7, size=m))
            d, p = ks_two_sample(a, b)
            pooled = sorted(a + b)
            hits = total = 0
            for picked in itertools.combinations(range(n + m), n):
                left = [pooled[i] for i in picked]
                right = [pooled[i] for i in range(n + m) if i not in picked]
                hits += ecdf_sup(left, right) >= d - 1e-12
                total += 1
            assert p == pytest.approx(hits / total, abs=1e-12), (n, m)

    w, p = wilcoxon_signed_rank([5.0, 6.0, 7.0, 8.0, 9.0], [4.0, 4.5, 5.0, 6.0, 7.0])
    assert w == 0.0
    assert p == pytest.approx(0.0625, abs=1e-12)


def test_criterion_7_budget_parity():
    """The single-solution annealer spends exactly as many evaluations as the
    population method: 2000 each, with the elite cached, never re-evaluated."""
    inst = random_instance(77, n_services=6)
    ga = run(inst, AlgorithmConfig(algorithm=Algorithm.GA, epochs=100, population=20, seed=0))
    sa = run(inst, AlgorithmConfig(algorithm=Algorithm.SA, epochs=2000, population=1, seed=0))
    assert ga.evaluations == 100 * 20 == 2000
    assert sa.evaluations == 2000
    assert ga.evaluations == sa.evaluations


def test_criterion_8_scalability_smoke():
    """Tuned-budget GA (500 x 70) on a 50-service instance finishes well under
    15 minutes; the exhaustive oracle refuses more than 20 feasible services."""
    inst = generate_instance(GenerationSpec(n_services=50, n_operators=4, seed=7))
    with pytest.raises(TooLarge):
        exhaustive_oracle(inst, requested_vector(inst))  # default cap is 20

    started = time.monotonic()
    trace = run(
        inst,
        AlgorithmConfig(algorithm=Algorithm.GA, epochs=500, population=70, seed=0),
    )
    elapsed = time.monotonic() - started
    assert trace.evaluations == 500 * 70
    assert elapsed < 15 * 60.0
    baseline = evaluate_proposal(inst, requested_vector(inst)).total
    assert trace.best_fitness[-1] >= baseline - 1e-9


def test_criterion_9_conflict_oracle_equivalence():
    """Closed-form pair verdicts equal the dense-time simulation on 1,000
    random pairs with zero disagreements."""
    rng = np.random.default_rng(999)
    corridor = generate_instance(GenerationSpec(n_services=1, seed=0)).corridor
    disagreements = 0
    conflicts = 0
    for _ in range(1000):
        sa = random_service(rng, corridor, "a", "ru", window=(400.0, 800.0))
        sb = random_service(rng, corridor, "b", "ru", window=(400.0, 800.0))
        omega = float(rng.uniform(0.5, 12.0))
        got = pair_conflict(
            TrainPath(sa.stops, corridor), TrainPath(sb.stops, corridor), omega
        )
        want = dense_conflict_oracle(sa.stops, sb.stops, corridor, omega)
        disagreements += got != want
        conflicts += want
    assert disagreements == 0
    assert 0 < conflicts < 1000  # both outcomes exercised
