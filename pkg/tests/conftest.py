"""Shared fixtures and the independent dense-time conflict oracle.

The oracle re-implements trajectory interpolation in plain Python (no reuse
of package internals) and samples the shared span at sub-0.1-minute
resolution, so agreement with the package's closed-form predicate is a real
cross-check rather than a tautology.
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from railslot import io as rio
from railslot.model import (
    Corridor,
    MarketParams,
    ProblemInstance,
    RailwayUndertaking,
    ServiceRequest,
    Station,
    Stop,
)

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def corridor_instance() -> ProblemInstance:
    """Three competing services on the six-station corridor (fees 100/80/150)."""
    return rio.parse_instance((DATA / "madrid-barcelona.json").read_text())


@pytest.fixture(scope="session")
def odt_vector(corridor_instance) -> list[float]:
    return rio.parse_proposal((DATA / "table4-odt.json").read_text(), corridor_instance)


def requested_vector(instance: ProblemInstance) -> np.ndarray:
    return np.array([d for req in instance.requests for d in req.requested_departures])


def with_params(instance: ProblemInstance, **overrides) -> ProblemInstance:
    import dataclasses

    return dataclasses.replace(
        instance, params=dataclasses.replace(instance.params, **overrides)
    )


# ---------------------------------------------------------------------------
# Independent dense-time conflict oracle
# ---------------------------------------------------------------------------

def _passage_interval(stops, corridor, km):
    """(first, last) time a service occupies position km, plain-Python interpolation."""
    pts = [(corridor.position_of(s.station_id), s.arrival, s.departure) for s in stops]
    for pos, arr, dep in pts:
        if pos == km:
            return arr, dep
    for (p0, _, d0), (p1, a1, _) in zip(pts, pts[1:]):
        if p0 < km < p1:
            frac = (km - p0) / (p1 - p0)
            t = d0 + frac * (a1 - d0)
            return t, t
    raise AssertionError(f"position {km} outside service span")


def dense_conflict_oracle(stops_a, stops_b, corridor, omega, resolution=0.1):
    """Conflict iff the separation dips under 2*omega anywhere on the shared
    span or the trains' spatial ordering flips. Positions are sampled densely
    enough that both trajectories move less than `resolution` minutes between
    samples, plus every station breakpoint."""
    lo = max(corridor.position_of(stops_a[0].station_id),
             corridor.position_of(stops_b[0].station_id))
    hi = min(corridor.position_of(stops_a[-1].station_id),
             corridor.position_of(stops_b[-1].station_id))
    if lo > hi:
        return False

    breakpoints = sorted(
        {corridor.position_of(s.station_id) for s in (*stops_a, *stops_b)} | {lo, hi}
    )
    breakpoints = [p for p in breakpoints if lo <= p <= hi]

    def time_rate(stops):
        # max minutes-per-km over all segments, for the sampling density
        pts = [(corridor.position_of(s.station_id), s.arrival, s.departure) for s in stops]
        return max(
            (a1 - d0) / (p1 - p0) for (p0, _, d0), (p1, a1, _) in zip(pts, pts[1:])
        )

    rate = max(time_rate(stops_a), time_rate(stops_b))
    samples = []
    for p0, p1 in zip(breakpoints, breakpoints[1:]):
        n = max(int(math.ceil((p1 - p0) * rate / resolution)), 1)
        samples.extend(p0 + (p1 - p0) * k / n for k in range(n))
    samples.append(breakpoints[-1])

    signs = []
    for p in samples:
        a0, a1 = _passage_interval(stops_a, corridor, p)
        b0, b1 = _passage_interval(stops_b, corridor, p)
        if a0 > b1:
            gap = a0 - b1
        elif b0 > a1:
            gap = -(b0 - a1)
        else:
            gap = 0.0
        if abs(gap) < 2 * omega:
            return True
        signs.append(gap > 0)
    return any(s0 != s1 for s0, s1 in zip(signs, signs[1:]))


# ---------------------------------------------------------------------------
# Random pair/instance builders used by several test modules
# ---------------------------------------------------------------------------

def random_service(rng: np.random.Generator, corridor: Corridor, sid: str, ru_id: str,
                   window=(300.0, 900.0)) -> ServiceRequest:
    n = len(corridor.stations)
    origin = int(rng.integers(0, n - 1))
    terminus = int(rng.integers(origin + 1, n))
    kept = [m for m in range(origin + 1, terminus) if rng.random() < 0.5]
    idx = [origin, *kept, terminus]
    t = float(rng.uniform(*window))
    stops = [Stop(corridor.stations[idx[0]].id, t, t)]
    for a, b in zip(idx, idx[1:]):
        run = (corridor.stations[b].km - corridor.stations[a].km) * float(rng.uniform(0.2, 0.5))
        arrival = stops[-1].departure + run
        dwell = 0.0 if b == terminus else float(rng.uniform(0, 8))
        stops.append(Stop(corridor.stations[b].id, arrival, arrival + dwell))
    return ServiceRequest(id=sid, ru_id=ru_id, stops=tuple(stops), fee=float(rng.uniform(20, 200)))


def random_instance(seed: int, n_services: int, corridor: Corridor | None = None,
                    params: MarketParams | None = None) -> ProblemInstance:
    rng = np.random.default_rng(seed)
    if corridor is None:
        corridor = Corridor(
            stations=tuple(
                Station(f"ST{i}", f"Station {i}", float(km))
                for i, km in enumerate((0, 80, 190, 260, 400))
            )
        )
    operators = (
        RailwayUndertaking("RUA", 1.0),
        RailwayUndertaking("RUB", 5.0),
    )
    requests = tuple(
        random_service(rng, corridor, f"S{i + 1}", operators[i % 2].id)
        for i in range(n_services)
    )
    return ProblemInstance(
        corridor=corridor,
        operators=operators,
        requests=requests,
        params=params or MarketParams(delta=15.0, omega=float(rng.choice([2.0, 5.0, 10.0]))),
    )


# ---------------------------------------------------------------------------
# Acceptance criterion reporting: one PASS/FAIL line per criterion
# ---------------------------------------------------------------------------

def pytest_terminal_summary(terminalreporter, exitstatus, config):
    entries = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid:
                name = nodeid.split("::", 1)[1]
                entries[name] = outcome
    if not entries:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(entries, key=lambda n: int(n.split("_")[2])):
        verdict = "PASS" if entries[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict} {name}")
