"""Feasibility validation, greedy conflict resolution and the exhaustive oracle.

`evaluate_proposal` is the full pipeline behind every fitness evaluation:
decode the flat departure vector, repair/validate each service, build the
conflict matrix, price the feasible services and resolve conflicts greedily
in revenue order.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .conflict import ConflictMatrix, conflict_matrix
from .errors import InvalidVectorLength, TooLarge
from .model import ProblemInstance, ServiceRequest, derive_times, deviation_metrics
from .revenue import RevenueBreakdown, service_revenue


@dataclass(frozen=True)
class ScheduleResult:
    scheduled: tuple[bool, ...]
    breakdowns: tuple[RevenueBreakdown | None, ...]
    total: float
    delta_dt: float
    delta_tt: float
    infeasible: frozenset[str]

    @property
    def n_scheduled(self) -> int:
        return sum(self.scheduled)


def validate_service(
    request: ServiceRequest,
    proposed_departures: Sequence[float],
    params,
) -> tuple[bool, list[str]]:
    """Check one service's departures against the operational constraints.

    Feasible iff the origin shift stays within the modification margin, every
    later departure respects the fixed run time plus minimal dwell, and no
    dwell is extended beyond the maximum.
    """
    if len(proposed_departures) != request.n_decisions:
        raise InvalidVectorLength(
            f"service {request.id}: expected {request.n_decisions} departures"
        )
    violations = []
    requested = request.requested_departures
    taus = request.run_times
    dwells = request.dwells
    if abs(proposed_departures[0] - requested[0]) > params.delta:
        violations.append(
            f"origin shift {proposed_departures[0] - requested[0]:+.3f} exceeds margin {params.delta}"
        )
    for j in range(1, len(proposed_departures)):
        earliest = proposed_departures[j - 1] + taus[j - 1] + dwells[j]
        if proposed_departures[j] < earliest:
            violations.append(f"stop {j}: departure below run time plus minimal dwell")
        if proposed_departures[j] > requested[j] + params.dwell_max:
            violations.append(f"stop {j}: departure beyond requested plus dwell_max")
        if proposed_departures[j] > proposed_departures[j - 1] + taus[j - 1] + params.dwell_max:
            violations.append(f"stop {j}: dwell extension beyond dwell_max")
    return not violations, violations


def repair_service(
    request: ServiceRequest,
    raw_departures: Sequence[float],
    params,
) -> tuple[tuple[float, ...], bool]:
    """Lift departures forward until run times and minimal dwells hold.

    Returns the repaired vector and whether it is feasible; the pass is
    idempotent and leaves feasible inputs unchanged. Lifting can push a stop
    beyond its dwell ceiling, in which case the service stays infeasible.
    """
    taus = request.run_times
    dwells = request.dwells
    out = list(raw_departures)
    for j in range(1, len(out)):
        out[j] = max(out[j], out[j - 1] + taus[j - 1] + dwells[j])
    feasible, _ = validate_service(request, out, params)
    return tuple(out), feasible


def greedy_schedule(
    instance: ProblemInstance,
    matrix: ConflictMatrix,
    breakdowns: Sequence[RevenueBreakdown | None],
    feasible: Sequence[bool],
) -> tuple[bool, ...]:
    """Revenue-ordered conflict resolution.

    Feasible services without conflicts are scheduled outright; while
    conflicts remain, the highest-revenue conflicting service (lowest index
    on ties) is scheduled and its conflicting neighbours are evicted.
    Services left conflict-free by an eviction are scheduled as well.
    """
    n = instance.n_services
    scheduled = [False] * n
    active = {i for i in range(n) if feasible[i]}
    neighbours = {
        i: {j for j in active if j != i and matrix.bits[i, j]} for i in active
    }
    conflicting = {i for i in active if neighbours[i]}
    for i in active - conflicting:
        scheduled[i] = True
    while conflicting:
        pick = min(conflicting, key=lambda i: (-breakdowns[i].net_revenue, i))
        scheduled[pick] = True
        evicted = neighbours[pick] & conflicting
        conflicting.discard(pick)
        conflicting -= evicted
        for i in conflicting:
            neighbours[i] -= evicted | {pick}
        freed = {i for i in conflicting if not neighbours[i]}
        for i in freed:
            scheduled[i] = True
        conflicting -= freed
    return tuple(scheduled)


def evaluate_proposal(
    instance: ProblemInstance,
    vector: Sequence[float],
    repair: bool = True,
) -> ScheduleResult:
    """Decode, repair, validate, price and greedily schedule one proposal."""
    proposals = decode_vector(instance, vector)
    params = instance.params
    feasible = []
    final_deps = []
    for req, deps in zip(instance.requests, proposals):
        if repair:
            deps, ok = repair_service(req, deps, params)
        else:
            ok, _ = validate_service(req, deps, params)
        final_deps.append(deps)
        feasible.append(ok)

    stops = [
        derive_times(req, deps) if ok else req.stops
        for req, deps, ok in zip(instance.requests, final_deps, feasible)
    ]
    matrix = conflict_matrix(instance, stops, feasible)
    breakdowns = [
        service_revenue(req, deps, params, instance.operator_of(req)) if ok else None
        for req, deps, ok in zip(instance.requests, final_deps, feasible)
    ]
    scheduled = greedy_schedule(instance, matrix, breakdowns, feasible)
    total = sum(breakdowns[i].net_revenue for i in range(len(scheduled)) if scheduled[i])
    ddt, dtt = deviation_metrics(instance, final_deps, scheduled)
    return ScheduleResult(
        scheduled=scheduled,
        breakdowns=tuple(breakdowns),
        total=total,
        delta_dt=ddt,
        delta_tt=dtt,
        infeasible=frozenset(
            req.id for req, ok in zip(instance.requests, feasible) if not ok
        ),
    )


def exhaustive_oracle(
    instance: ProblemInstance,
    vector: Sequence[float],
    repair: bool = True,
    cap: int = 20,
) -> ScheduleResult:
    """Best conflict-free subset over all 2^n subsets of feasible services.

    Ties break toward fewer services, then the lexicographically smallest id
    set. Refuses instances with more than `cap` feasible services.
    """
    proposals = decode_vector(instance, vector)
    params = instance.params
    feasible = []
    final_deps = []
    for req, deps in zip(instance.requests, proposals):
        if repair:
            deps, ok = repair_service(req, deps, params)
        else:
            ok, _ = validate_service(req, deps, params)
        final_deps.append(deps)
        feasible.append(ok)
    idx = [i for i, ok in enumerate(feasible) if ok]
    if len(idx) > cap:
        raise TooLarge(f"{len(idx)} feasible services exceed oracle cap {cap}")

    stops = [
        derive_times(req, deps) if ok else req.stops
        for req, deps, ok in zip(instance.requests, final_deps, feasible)
    ]
    matrix = conflict_matrix(instance, stops, feasible)
    breakdowns = [
        service_revenue(req, deps, params, instance.operator_of(req)) if ok else None
        for req, deps, ok in zip(instance.requests, final_deps, feasible)
    ]

    # Bitmask of conflicting peers, within the feasible sub-index space.
    conf = []
    for a, i in enumerate(idx):
        mask = 0
        for b, j in enumerate(idx):
            if matrix.bits[i, j]:
                mask |= 1 << b
        conf.append(mask)
    nets = [breakdowns[i].net_revenue for i in idx]
    ids = [instance.requests[i].id for i in idx]

    best_subset = 0
    best_key = None
    for subset in range(1 << len(idx)):
        members = [b for b in range(len(idx)) if subset >> b & 1]
        if any(conf[b] & subset for b in members):
            continue
        total = sum(nets[b] for b in members)
        key = (total, len(members), tuple(sorted(ids[b] for b in members)))
        if (
            best_key is None
            or key[0] > best_key[0]
            or (key[0] == best_key[0] and key[1] < best_key[1])
            or (key[0] == best_key[0] and key[1] == best_key[1] and key[2] < best_key[2])
        ):
            best_key = key
            best_subset = subset

    scheduled = [False] * instance.n_services
    for b, i in enumerate(idx):
        if best_subset >> b & 1:
            scheduled[i] = True
    total = sum(breakdowns[i].net_revenue for i in range(len(scheduled)) if scheduled[i])
    ddt, dtt = deviation_metrics(instance, final_deps, scheduled)
    return ScheduleResult(
        scheduled=tuple(scheduled),
        breakdowns=tuple(breakdowns),
        total=total,
        delta_dt=ddt,
        delta_tt=dtt,
        infeasible=frozenset(
            req.id for req, ok in zip(instance.requests, feasible) if not ok
        ),
    )


def decode_vector(
    instance: ProblemInstance, vector: Sequence[float]
) -> list[tuple[float, ...]]:
    """Split the flat decision vector into per-service departure tuples."""
    expected = sum(req.n_decisions for req in instance.requests)
    if len(vector) != expected:
        raise InvalidVectorLength(f"expected {expected} entries, got {len(vector)}")
    out = []
    pos = 0
    for req in instance.requests:
        out.append(tuple(float(v) for v in vector[pos : pos + req.n_decisions]))
        pos += req.n_decisions
    return out
