"""Penalty sensitivity curve and per-service revenue under schedule changes.

The fee paid for a service is reduced when its departure time or any of its
pair travel times deviate from the request. The worst case loses exactly
``p_max`` of the fee: the departure-time and travel-time components are
weighted by ``p_max * share_dt`` and ``p_max * share_tt`` respectively, with
the travel-time component split equally across the service's stop pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateMargin, OutOfRange
from .model import MarketParams, RailwayUndertaking, ServiceRequest, pair_travel_times


@dataclass(frozen=True)
class RevenueBreakdown:
    service_id: str
    base_fee: float
    alpha: float
    beta_sum: float
    dt_penalty: float
    tt_penalty: float
    net_revenue: float


def penalty_curve(x: float, k: float) -> float:
    """Fee-reduction fraction for a normalized deviation x in [0, 1].

    Monotone non-decreasing with f(0) = 0 and f(1) = 1; larger k makes the
    operator more sensitive to small deviations.
    """
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"x={x} outside [0, 1]")
    if k <= 0:
        raise ValueError("k must be positive")
    return 1.0 - math.exp(-k * x * x) * (0.5 * math.cos(math.pi * x) + 0.5)


def _normalized(diff: float, delta: float) -> float:
    if delta == 0:
        if diff != 0:
            raise DegenerateMargin("nonzero time difference with zero margin")
        return 0.0
    return min(max(diff / delta, 0.0), 1.0)


def x_dt(proposed_dep: float, requested_dep: float, delta: float) -> float:
    """Normalized departure-time deviation, clamped to [0, 1]."""
    return _normalized(abs(proposed_dep - requested_dep), delta)


def x_tt(proposed_tt: float, requested_tt: float, delta: float) -> float:
    """Normalized travel-time extension, clamped to [0, 1].

    Shorter-than-requested travel is not allowed; negative differences clamp
    to zero (they are rejected upstream by validation).
    """
    return _normalized(proposed_tt - requested_tt, delta)


def service_revenue(
    request: ServiceRequest,
    proposed_departures: Sequence[float],
    params: MarketParams,
    ru: RailwayUndertaking,
) -> RevenueBreakdown:
    """Net revenue for one feasibility-checked service under a proposal."""
    k = ru.sensitivity_k
    alpha = penalty_curve(
        x_dt(proposed_departures[0], request.stops[0].departure, params.delta), k
    )
    proposed = pair_travel_times(request, proposed_departures)
    requested = pair_travel_times(request, request.requested_departures)
    betas = [penalty_curve(x_tt(p, r, params.delta), k) for p, r in zip(proposed, requested)]

    p_dt_eff = params.p_max * params.share_dt
    p_tt_eff = params.p_max * params.share_tt
    dt_penalty = request.fee * alpha * p_dt_eff
    tt_penalty = request.fee * sum(betas) * p_tt_eff / len(betas)
    return RevenueBreakdown(
        service_id=request.id,
        base_fee=request.fee,
        alpha=alpha,
        beta_sum=sum(betas),
        dt_penalty=dt_penalty,
        tt_penalty=tt_penalty,
        net_revenue=request.fee - dt_penalty - tt_penalty,
    )


def total_revenue(breakdowns: Sequence[RevenueBreakdown], scheduled_flags: Sequence[bool]) -> float:
    if len(breakdowns) != len(scheduled_flags):
        raise ValueError("flag vector length mismatch")
    return sum(b.net_revenue for b, flag in zip(breakdowns, scheduled_flags) if flag)
