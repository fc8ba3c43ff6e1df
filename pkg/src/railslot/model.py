"""Domain model: corridor geometry, operators, service requests and derived times.

Times are real-valued minutes from midnight. Run times between consecutive
stops and minimal dwell times are derived from the requested stop times and
are never stored independently.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import InvalidVectorLength


class ConflictSemantics(str, Enum):
    PERMISSIVE_OR = "permissive_or"
    STRICT_AND = "strict_and"


@dataclass(frozen=True)
class Station:
    id: str
    name: str
    km: float

    def __post_init__(self):
        if self.km < 0:
            raise ValueError(f"station {self.id}: negative position {self.km}")


@dataclass(frozen=True)
class Corridor:
    """Single unidirectional line; traversal order equals station order."""

    stations: tuple[Station, ...]

    def __post_init__(self):
        if len(self.stations) < 2:
            raise ValueError("corridor needs at least 2 stations")
        ids = [s.id for s in self.stations]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate station ids in corridor")
        kms = [s.km for s in self.stations]
        if any(b <= a for a, b in zip(kms, kms[1:])):
            raise ValueError("station positions must strictly increase")

    def position_of(self, station_id: str) -> float:
        for s in self.stations:
            if s.id == station_id:
                return s.km
        raise KeyError(station_id)

    def index_of(self, station_id: str) -> int:
        for i, s in enumerate(self.stations):
            if s.id == station_id:
                return i
        raise KeyError(station_id)


@dataclass(frozen=True)
class RailwayUndertaking:
    id: str
    sensitivity_k: float
    fee_multiplier: float = 1.0

    def __post_init__(self):
        if self.sensitivity_k <= 0:
            raise ValueError(f"RU {self.id}: sensitivity_k must be > 0")
        if self.fee_multiplier <= 0:
            raise ValueError(f"RU {self.id}: fee_multiplier must be > 0")


@dataclass(frozen=True)
class Stop:
    station_id: str
    arrival: float
    departure: float

    def __post_init__(self):
        if self.arrival < 0:
            raise ValueError(f"stop {self.station_id}: negative arrival")
        if self.departure < self.arrival:
            raise ValueError(f"stop {self.station_id}: departure before arrival")

    @property
    def dwell(self) -> float:
        return self.departure - self.arrival


@dataclass(frozen=True)
class ServiceRequest:
    """One operator's requested stops plus the access fee it is willing to pay."""

    id: str
    ru_id: str
    stops: tuple[Stop, ...]
    fee: float

    def __post_init__(self):
        if len(self.stops) < 2:
            raise ValueError(f"service {self.id}: needs at least 2 stops")
        if self.fee <= 0:
            raise ValueError(f"service {self.id}: fee must be positive")
        times = []
        for stop in self.stops:
            times.extend((stop.arrival, stop.departure))
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValueError(f"service {self.id}: stop times must be monotone")
        segs = list(zip(self.stops, self.stops[1:]))
        if any(b.arrival <= a.departure for a, b in segs):
            raise ValueError(f"service {self.id}: times must strictly increase between stops")
        if self.stops[0].dwell != 0 or self.stops[-1].dwell != 0:
            raise ValueError(f"service {self.id}: origin and terminus must have zero dwell")

    # Run time of segment j -> j+1, fixed for every proposal.
    @property
    def run_times(self) -> tuple[float, ...]:
        return tuple(b.arrival - a.departure for a, b in zip(self.stops, self.stops[1:]))

    # Minimal dwell at each stop (zero at origin and terminus).
    @property
    def dwells(self) -> tuple[float, ...]:
        return tuple(s.dwell for s in self.stops)

    @property
    def n_decisions(self) -> int:
        """Departure decision variables: one per non-terminal stop."""
        return len(self.stops) - 1

    @property
    def requested_departures(self) -> tuple[float, ...]:
        return tuple(s.departure for s in self.stops[:-1])

    def ordered_on(self, corridor: Corridor) -> bool:
        idx = [corridor.index_of(s.station_id) for s in self.stops]
        return all(b > a for a, b in zip(idx, idx[1:]))


@dataclass(frozen=True)
class MarketParams:
    delta: float = 10.0          # IM departure-modification margin (min)
    omega: float = 10.0          # safety headway (min)
    dwell_max: float = 10.0      # maximum dwell extension (min)
    p_max: float = 0.4
    share_dt: float = 0.35
    share_tt: float = 0.65
    conflict_semantics: ConflictSemantics = ConflictSemantics.PERMISSIVE_OR

    def __post_init__(self):
        if abs(self.share_dt + self.share_tt - 1.0) > 1e-9:
            raise ValueError("share_dt + share_tt must equal 1")
        for name in ("delta", "omega", "dwell_max"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0 <= self.p_max <= 1:
            raise ValueError("p_max must be in [0, 1]")
        for name in ("share_dt", "share_tt"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in [0, 1]")


@dataclass(frozen=True)
class ProblemInstance:
    corridor: Corridor
    operators: tuple[RailwayUndertaking, ...]
    requests: tuple[ServiceRequest, ...]
    params: MarketParams = field(default_factory=MarketParams)

    def __post_init__(self):
        ru_ids = {ru.id for ru in self.operators}
        if len(ru_ids) != len(self.operators):
            raise ValueError("duplicate operator ids")
        sids = [r.id for r in self.requests]
        if len(set(sids)) != len(sids):
            raise ValueError("duplicate request ids")
        station_ids = {s.id for s in self.corridor.stations}
        for req in self.requests:
            if req.ru_id not in ru_ids:
                raise ValueError(f"service {req.id}: unknown operator {req.ru_id}")
            for stop in req.stops:
                if stop.station_id not in station_ids:
                    raise ValueError(f"service {req.id}: unknown station {stop.station_id}")
            if not req.ordered_on(self.corridor):
                raise ValueError(f"service {req.id}: stops not in corridor order")

    @property
    def n_services(self) -> int:
        return len(self.requests)

    def operator_of(self, request: ServiceRequest) -> RailwayUndertaking:
        for ru in self.operators:
            if ru.id == request.ru_id:
                return ru
        raise KeyError(request.ru_id)


def derive_times(request: ServiceRequest, new_departures: Sequence[float]) -> tuple[Stop, ...]:
    """Rebuild the full stop list from modified non-terminal departures.

    Run times are carried over unchanged from the request; the terminus
    arrival/departure is derived and carries no decision variable.
    """
    if len(new_departures) != request.n_decisions:
        raise InvalidVectorLength(
            f"service {request.id}: expected {request.n_decisions} departures, "
            f"got {len(new_departures)}"
        )
    taus = request.run_times
    stops = [Stop(request.stops[0].station_id, new_departures[0], new_departures[0])]
    for j in range(1, len(request.stops)):
        arrival = new_departures[j - 1] + taus[j - 1]
        if j < len(request.stops) - 1:
            departure = new_departures[j]
        else:
            departure = arrival
        stops.append(Stop(request.stops[j].station_id, arrival, departure))
    return tuple(stops)


def pair_travel_times(request: ServiceRequest, departures: Sequence[float]) -> tuple[float, ...]:
    """Travel time per consecutive stop pair under the given departures.

    Run times are fixed, so only dwell extensions move these values: for a
    non-terminal pair the travel time is the departure-to-departure gap; for
    the terminal pair it is departure-to-arrival (always the fixed run time).
    """
    stops = derive_times(request, departures)
    out = []
    for j in range(len(stops) - 1):
        if j + 1 < len(stops) - 1:
            out.append(stops[j + 1].departure - stops[j].departure)
        else:
            out.append(stops[j + 1].arrival - stops[j].departure)
    return tuple(out)


def deviation_metrics(
    instance: ProblemInstance,
    proposals: Sequence[Sequence[float]],
    scheduled_flags: Sequence[bool],
) -> tuple[float, float]:
    """Total absolute departure-time and travel-time deviation, scheduled services only."""
    ddt = 0.0
    dtt = 0.0
    for req, deps, flag in zip(instance.requests, proposals, scheduled_flags):
        if not flag:
            continue
        ddt += abs(deps[0] - req.stops[0].departure)
        proposed = pair_travel_times(req, deps)
        requested = pair_travel_times(req, req.requested_departures)
        dtt += sum(abs(p - r) for p, r in zip(proposed, requested))
    return ddt, dtt
