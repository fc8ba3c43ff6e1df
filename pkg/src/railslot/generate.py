"""Pseudo-random instance generation: operators, stop patterns, fees and times.

Stands in for an external request simulator; everything here is a pure
function of the spec and seed. Fees scale with the number of stops, the
operator's multiplier and a multiplicative uniform variability factor.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleSpec
from .model import (
    Corridor,
    MarketParams,
    ProblemInstance,
    RailwayUndertaking,
    ServiceRequest,
    Station,
    Stop,
)

# Madrid-Barcelona high-speed corridor with real-world line kilometrage.
MADRID_BARCELONA = Corridor(
    stations=(
        Station("MAD", "Madrid", 0.0),
        Station("CAL", "Calatayud", 222.0),
        Station("ZAR", "Zaragoza", 306.0),
        Station("LLE", "Lleida", 442.0),
        Station("TAR", "Tarragona", 521.0),
        Station("BAR", "Barcelona", 621.0),
    )
)


@dataclass(frozen=True)
class GenerationSpec:
    n_services: int = 25
    n_operators: int = 4
    seed: int = 0
    corridor: Corridor = MADRID_BARCELONA
    params: MarketParams = field(default_factory=MarketParams)
    window: tuple[float, float] = (360.0, 1320.0)  # 06:00-22:00
    base_fee: float = 50.0
    fee_epsilon: float = 0.1
    fee_multipliers: tuple[float, ...] = (0.8, 0.9, 1.0, 1.1)
    sensitivities: tuple[float, ...] = (1.0, 2.0, 5.0, 10.0)
    speed_kmh: float = 250.0
    dwell_range: tuple[float, float] = (2.0, 6.0)
    max_requests_per_ru: int | None = None  # yard-capacity cap

    def __post_init__(self):
        if self.n_services < 1 or self.n_operators < 1:
            raise ValueError("need at least one service and one operator")


def fee_of(
    stop_count: int,
    ru: RailwayUndertaking,
    rng: np.random.Generator,
    base_fee: float = 50.0,
    epsilon: float = 0.1,
) -> float:
    """Access fee: proportional to stop count, scaled by RU and noise factor."""
    if stop_count < 2:
        raise ValueError("a service visits at least 2 stations")
    return base_fee * stop_count * ru.fee_multiplier * rng.uniform(1 - epsilon, 1 + epsilon)


def generate_instance(spec: GenerationSpec) -> ProblemInstance:
    """Deterministic per seed; every request validates against its own times."""
    if len(spec.corridor.stations) < 2:
        raise InfeasibleSpec("corridor too small")
    rng = np.random.default_rng(spec.seed)
    operators = tuple(
        RailwayUndertaking(
            id=f"RU{i + 1}",
            sensitivity_k=float(rng.choice(spec.sensitivities)),
            fee_multiplier=float(rng.choice(spec.fee_multipliers)),
        )
        for i in range(spec.n_operators)
    )

    per_ru_count = {ru.id: 0 for ru in operators}
    requests = []
    for s in range(spec.n_services):
        ru = operators[int(rng.integers(0, len(operators)))]
        if spec.max_requests_per_ru is not None:
            eligible = [r for r in operators if per_ru_count[r.id] < spec.max_requests_per_ru]
            if not eligible:
                raise InfeasibleSpec("yard capacity exhausted for all operators")
            if per_ru_count[ru.id] >= spec.max_requests_per_ru:
                ru = eligible[int(rng.integers(0, len(eligible)))]
        per_ru_count[ru.id] += 1
        requests.append(_random_request(f"S{s + 1}", ru, spec, rng))

    return ProblemInstance(
        corridor=spec.corridor,
        operators=operators,
        requests=tuple(requests),
        params=spec.params,
    )


def _random_request(
    service_id: str, ru: RailwayUndertaking, spec: GenerationSpec, rng: np.random.Generator
) -> ServiceRequest:
    stations = spec.corridor.stations
    n = len(stations)
    origin = int(rng.integers(0, n - 1))
    terminus = int(rng.integers(origin + 1, n))
    middle = list(range(origin + 1, terminus))
    # Skip-stop pattern: each intermediate station is visited or passed through.
    kept = [m for m in middle if rng.random() < 0.5]
    idx = [origin, *kept, terminus]

    t = float(rng.uniform(*spec.window))
    stops = [Stop(stations[idx[0]].id, t, t)]
    for a, b in zip(idx, idx[1:]):
        run = (stations[b].km - stations[a].km) / spec.speed_kmh * 60.0
        arrival = stops[-1].departure + run
        if b == terminus:
            stops.append(Stop(stations[b].id, arrival, arrival))
        else:
            dwell = float(rng.integers(int(spec.dwell_range[0]), int(spec.dwell_range[1]) + 1))
            stops.append(Stop(stations[b].id, arrival, arrival + dwell))
    fee = fee_of(len(stops), ru, rng, spec.base_fee, spec.fee_epsilon)
    return ServiceRequest(id=service_id, ru_id=ru.id, stops=tuple(stops), fee=fee)
