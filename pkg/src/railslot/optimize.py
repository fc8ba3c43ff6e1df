"""Decision-vector encoding and seedable metaheuristic search strategies.

All strategies maximize total schedule revenue over a box-bounded flat
vector of departure times. The evaluation budget is `epochs * population`
fitness calls: the first epoch evaluates the initial population, every later
epoch evaluates exactly `population` new candidates (one for the
single-solution annealer, `sample_count` for the ant archive). Elites are
carried with cached fitness and never re-evaluated.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .model import ProblemInstance
from .scheduling import ScheduleResult, evaluate_proposal


class Algorithm(str, Enum):
    GA = "ga"
    PSO = "pso"
    SA = "sa"
    DE = "de"
    ACOR = "acor"
    GWO = "gwo"
    WOA = "woa"
    GWO_WOA = "gwo_woa"
    # Accepted names, not implemented.
    CMA_ES = "cma_es"
    ABC = "abc"


DEFAULT_PARAMS: dict[Algorithm, dict[str, float | str]] = {
    Algorithm.GA: {"pc": 0.95, "pm": 0.025, "selection": "tournament"},
    Algorithm.PSO: {"c1": 2.05, "c2": 2.05, "alpha": 0.4},
    Algorithm.SA: {"t0": 100.0, "cooling": 0.99},
    Algorithm.DE: {"wf": 0.1, "cr": 0.9},
    Algorithm.ACOR: {"sample_count": 25, "intensification": 0.5, "zeta": 1.0},
    Algorithm.GWO: {},
    Algorithm.WOA: {},
    Algorithm.GWO_WOA: {},
    Algorithm.CMA_ES: {},
    Algorithm.ABC: {},
}


@dataclass(frozen=True)
class Bounds:
    low: np.ndarray
    high: np.ndarray

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.low, self.high)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(self.low, self.high, size=(count, len(self.low)))


@dataclass
class AlgorithmConfig:
    algorithm: Algorithm = Algorithm.GA
    epochs: int = 100
    population: int = 20
    seed: int = 0
    seed_requested: bool = True
    repair: bool = True
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.algorithm = Algorithm(self.algorithm)
        if self.epochs < 1 or self.population < 1:
            raise ValueError("epochs and population must be >= 1")
        if self.algorithm is Algorithm.SA and self.population != 1:
            raise ValueError("SA is single-solution; population must be 1")
        merged = dict(DEFAULT_PARAMS[self.algorithm])
        merged.update(self.params)
        self.params = merged


@dataclass
class ConvergenceTrace:
    best_fitness: list[float]
    best_vector: np.ndarray
    evaluations: int
    wall_time_s: float
    result: ScheduleResult


def encode(instance: ProblemInstance) -> tuple[np.ndarray, Bounds]:
    """Requested departures as a flat vector, with per-dimension box bounds."""
    values = np.array(
        [d for req in instance.requests for d in req.requested_departures]
    )
    delta = instance.params.delta
    return values, Bounds(low=values - delta, high=values + delta)


class _CountingFitness:
    def __init__(self, instance: ProblemInstance, repair: bool):
        self.instance = instance
        self.repair = repair
        self.calls = 0

    def __call__(self, x: np.ndarray) -> float:
        self.calls += 1
        return evaluate_proposal(self.instance, x, repair=self.repair).total

    def batch(self, pop: np.ndarray) -> np.ndarray:
        return np.array([self(x) for x in pop])


def run(instance: ProblemInstance, config: AlgorithmConfig) -> ConvergenceTrace:
    """Execute the configured strategy; identical seeds give identical traces."""
    steppers: dict[Algorithm, Callable] = {
        Algorithm.GA: _ga_step,
        Algorithm.PSO: _pso_step,
        Algorithm.SA: _sa_step,
        Algorithm.DE: _de_step,
        Algorithm.ACOR: _acor_step,
        Algorithm.GWO: _gwo_step,
        Algorithm.WOA: _woa_step,
        Algorithm.GWO_WOA: _hybrid_step,
    }
    if config.algorithm not in steppers:
        raise NotImplementedError(
            f"algorithm {config.algorithm.value} is accepted in config but not implemented"
        )
    requested, bounds = encode(instance)
    rng = np.random.default_rng(config.seed)
    fit = _CountingFitness(instance, config.repair)
    started = time.monotonic()

    pop = bounds.sample(rng, config.population)
    if config.seed_requested:
        pop[0] = requested
    values = fit.batch(pop)

    best_i = int(np.argmax(values))
    best_x = pop[best_i].copy()
    best_f = float(values[best_i])
    trace = [best_f]

    state: dict = {}
    step = steppers[config.algorithm]
    for epoch in range(2, config.epochs + 1):
        pop, values = step(
            pop, values, bounds, fit, rng, config, state,
            progress=(epoch - 1) / max(config.epochs - 1, 1),
        )
        i = int(np.argmax(values))
        if values[i] > best_f:
            best_f = float(values[i])
            best_x = pop[i].copy()
        trace.append(best_f)

    return ConvergenceTrace(
        best_fitness=trace,
        best_vector=best_x,
        evaluations=fit.calls,
        wall_time_s=time.monotonic() - started,
        result=evaluate_proposal(instance, best_x, repair=config.repair),
    )


def _tournament(rng, values: np.ndarray) -> int:
    a, b = rng.integers(0, len(values), size=2)
    return int(a if values[a] >= values[b] else b)


def _ga_step(pop, values, bounds, fit, rng, config, state, progress):
    pc = config.params["pc"]
    pm = config.params["pm"]
    sigma = (bounds.high - bounds.low) / 10.0
    elite_i = int(np.argmax(values))
    elite_x, elite_f = pop[elite_i].copy(), float(values[elite_i])

    children = np.empty_like(pop)
    for i in range(len(pop)):
        p1 = pop[_tournament(rng, values)]
        p2 = pop[_tournament(rng, values)]
        child = p1.copy()
        if rng.random() < pc:
            mask = rng.random(len(child)) < 0.5
            child[mask] = p2[mask]
        mut = rng.random(len(child)) < pm
        child[mut] += rng.normal(0.0, sigma[mut])
        children[i] = bounds.clamp(child)
    child_values = fit.batch(children)
    worst = int(np.argmin(child_values))
    children[worst] = elite_x
    child_values[worst] = elite_f
    return children, child_values


def _pso_step(pop, values, bounds, fit, rng, config, state, progress):
    if "velocity" not in state:
        state["velocity"] = np.zeros_like(pop)
        state["pbest"] = pop.copy()
        state["pbest_f"] = values.copy()
    v = state["velocity"]
    pbest, pbest_f = state["pbest"], state["pbest_f"]
    g = pbest[int(np.argmax(pbest_f))]
    r1 = rng.random(pop.shape)
    r2 = rng.random(pop.shape)
    v = (
        config.params["alpha"] * v
        + config.params["c1"] * r1 * (pbest - pop)
        + config.params["c2"] * r2 * (g - pop)
    )
    new_pop = bounds.clamp(pop + v)
    new_values = fit.batch(new_pop)
    improved = new_values > pbest_f
    pbest[improved] = new_pop[improved]
    pbest_f[improved] = new_values[improved]
    state["velocity"] = v
    return new_pop, new_values


def _sa_step(pop, values, bounds, fit, rng, config, state, progress):
    if "temperature" not in state:
        state["temperature"] = float(config.params["t0"])
    sigma = (bounds.high - bounds.low) / 10.0
    candidate = bounds.clamp(pop[0] + rng.normal(0.0, sigma))
    cand_f = fit(candidate)
    t = state["temperature"]
    accept = cand_f >= values[0] or rng.random() < math.exp(
        min((cand_f - values[0]) / max(t, 1e-12), 0.0)
    )
    state["temperature"] = t * config.params["cooling"]
    if accept:
        return candidate[None, :], np.array([cand_f])
    # The rejected candidate still consumed one evaluation.
    return pop, values


def _de_step(pop, values, bounds, fit, rng, config, state, progress):
    wf = config.params["wf"]
    cr = config.params["cr"]
    n, dim = pop.shape
    new_pop = pop.copy()
    new_values = values.copy()
    for i in range(n):
        choices = [j for j in range(n) if j != i]
        if len(choices) >= 3:
            a, b, c = rng.choice(choices, size=3, replace=False)
            donor = pop[a] + wf * (pop[b] - pop[c])
        else:
            donor = pop[i] + rng.normal(0.0, (bounds.high - bounds.low) / 10.0)
        cross = rng.random(dim) < cr
        cross[rng.integers(0, dim)] = True
        trial = np.where(cross, donor, pop[i])
        trial = bounds.clamp(trial)
        trial_f = fit(trial)
        if trial_f >= values[i]:
            new_pop[i] = trial
            new_values[i] = trial_f
    return new_pop, new_values


def _acor_step(pop, values, bounds, fit, rng, config, state, progress):
    q = config.params["intensification"]
    zeta = config.params["zeta"]
    samples = int(config.params["sample_count"])
    archive_n = len(pop)
    order = np.argsort(-values)
    archive, archive_f = pop[order], values[order]

    ranks = np.arange(1, archive_n + 1)
    weights = np.exp(-((ranks - 1) ** 2) / (2 * (q * archive_n) ** 2))
    weights /= weights.sum()

    new = np.empty((samples, pop.shape[1]))
    for s in range(samples):
        l = rng.choice(archive_n, p=weights)
        sigma = zeta * np.abs(archive - archive[l]).sum(axis=0) / max(archive_n - 1, 1)
        new[s] = bounds.clamp(rng.normal(archive[l], np.maximum(sigma, 1e-12)))
    new_f = fit.batch(new)

    merged = np.vstack([archive, new])
    merged_f = np.concatenate([archive_f, new_f])
    keep = np.argsort(-merged_f)[:archive_n]
    return merged[keep], merged_f[keep]


def _top3(pop, values):
    order = np.argsort(-values)[:3]
    # Pad when the population is smaller than three.
    while len(order) < 3:
        order = np.append(order, order[-1])
    return pop[order[0]], pop[order[1]], pop[order[2]]


def _gwo_move(x, leaders, a, rng):
    parts = []
    for leader in leaders:
        r1, r2 = rng.random(len(x)), rng.random(len(x))
        coef_a = 2 * a * r1 - a
        coef_c = 2 * r2
        parts.append(leader - coef_a * np.abs(coef_c * leader - x))
    return np.mean(parts, axis=0)


def _woa_move(x, best, pop, a, rng):
    if rng.random() < 0.5:
        scalar_a = 2 * a * rng.random() - a
        coef_c = 2 * rng.random(len(x))
        # Encircle the best agent when converging, a random one otherwise.
        leader = best if abs(scalar_a) < 1 else pop[rng.integers(0, len(pop))]
        return leader - scalar_a * np.abs(coef_c * leader - x)
    l = rng.uniform(-1, 1)
    dist = np.abs(best - x)
    return dist * math.exp(l) * math.cos(2 * math.pi * l) + best


def _gwo_step(pop, values, bounds, fit, rng, config, state, progress):
    a = 2.0 * (1.0 - progress)
    leaders = _top3(pop, values)
    new_pop = np.array([bounds.clamp(_gwo_move(x, leaders, a, rng)) for x in pop])
    return new_pop, fit.batch(new_pop)


def _woa_step(pop, values, bounds, fit, rng, config, state, progress):
    a = 2.0 * (1.0 - progress)
    best = pop[int(np.argmax(values))]
    new_pop = np.array([bounds.clamp(_woa_move(x, best, pop, a, rng)) for x in pop])
    return new_pop, fit.batch(new_pop)


def _hybrid_step(pop, values, bounds, fit, rng, config, state, progress):
    """Per individual, alternate leadership (wolf) and encircling (whale) moves."""
    a = 2.0 * (1.0 - progress)
    leaders = _top3(pop, values)
    best = pop[int(np.argmax(values))]
    new_pop = np.empty_like(pop)
    for i, x in enumerate(pop):
        if rng.random() < 0.5:
            new_pop[i] = bounds.clamp(_gwo_move(x, leaders, a, rng))
        else:
            new_pop[i] = bounds.clamp(_woa_move(x, best, pop, a, rng))
    return new_pop, fit.batch(new_pop)
