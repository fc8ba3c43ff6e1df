"""Named experiment presets: default and tuned epoch/population budgets."""
from __future__ import annotations

from .optimize import Algorithm, AlgorithmConfig

# Standard budget: 100 epochs x 20 individuals for population methods, the
# equivalent 2000 single-solution epochs for the annealer.
DEFAULTS_25 = {
    Algorithm.GA: (100, 20),
    Algorithm.PSO: (100, 20),
    Algorithm.SA: (2000, 1),
    Algorithm.DE: (100, 20),
    Algorithm.ACOR: (100, 20),
    Algorithm.GWO: (100, 20),
    Algorithm.WOA: (100, 20),
    Algorithm.GWO_WOA: (100, 20),
}

# Tuned budgets from the hyperparameter search presets.
TUNED_25 = {
    Algorithm.GA: (500, 70),
    Algorithm.PSO: (500, 80),
    Algorithm.SA: (45000, 1),
    Algorithm.DE: (300, 100),
    Algorithm.ACOR: (500, 10),
    Algorithm.CMA_ES: (250, 80),
    Algorithm.ABC: (450, 60),
    Algorithm.GWO: (500, 100),
    Algorithm.WOA: (400, 80),
    Algorithm.GWO_WOA: (450, 50),
}

PRESETS = {"defaults-25": DEFAULTS_25, "tuned-25": TUNED_25}


def config_for(algorithm: Algorithm | str, preset: str = "defaults-25", seed: int = 0) -> AlgorithmConfig:
    algorithm = Algorithm(algorithm)
    table = PRESETS[preset]
    if algorithm not in table:
        raise KeyError(f"no {preset} preset for {algorithm.value}")
    epochs, population = table[algorithm]
    return AlgorithmConfig(algorithm=algorithm, epochs=epochs, population=population, seed=seed)
