"""Penalty curve shape and per-service revenue arithmetic."""
import math

import pytest
from hypothesis import given, strategies as st

from railslot.errors import DegenerateMargin, OutOfRange
from railslot.model import MarketParams, RailwayUndertaking, ServiceRequest, Stop
from railslot.revenue import (
    penalty_curve,
    service_revenue,
    total_revenue,
    x_dt,
    x_tt,
)

K_GRID = (0.5, 1.0, 5.0, 20.0, 100.0)


def test_curve_endpoints_exact():
    for k in K_GRID:
        assert abs(penalty_curve(0.0, k)) < 1e-12
        assert abs(penalty_curve(1.0, k) - 1.0) < 1e-12


def test_curve_half_point_recomputed():
    # Independent closed form at x = 1/2: cos(pi/2) kills the cosine term,
    # leaving 1 - exp(-k/4)/2.
    for k in K_GRID:
        assert penalty_curve(0.5, k) == pytest.approx(1 - math.exp(-k / 4) / 2, abs=1e-12)
    assert penalty_curve(0.5, 1.0) == pytest.approx(0.610600, abs=1e-6)


def test_curve_monotone_on_grid():
    for k in K_GRID:
        values = [penalty_curve(i / 999, k) for i in range(1000)]
        assert all(b >= a for a, b in zip(values, values[1:]))


def test_curve_bounded_unit_interval():
    for k in K_GRID:
        for i in range(0, 1001, 7):
            v = penalty_curve(i / 1000, k)
            assert 0.0 <= v <= 1.0


def test_larger_sensitivity_dominates():
    for i in range(1, 100):
        x = i / 100
        values = [penalty_curve(x, k) for k in K_GRID]
        assert all(b >= a for a, b in zip(values, values[1:]))


def test_curve_domain_errors():
    with pytest.raises(OutOfRange):
        penalty_curve(-0.01, 1.0)
    with pytest.raises(OutOfRange):
        penalty_curve(1.01, 1.0)
    with pytest.raises(ValueError):
        penalty_curve(0.5, 0.0)


def test_normalized_deviations():
    assert x_dt(105.0, 100.0, 10.0) == 0.5
    assert x_dt(95.0, 100.0, 10.0) == 0.5  # absolute value
    assert x_dt(200.0, 100.0, 10.0) == 1.0  # clamped
    assert x_tt(70.0, 60.0, 20.0) == 0.5
    assert x_tt(50.0, 60.0, 20.0) == 0.0  # shorter travel clamps to zero
    assert x_dt(100.0, 100.0, 0.0) == 0.0  # zero diff with zero margin is fine
    with pytest.raises(DegenerateMargin):
        x_dt(101.0, 100.0, 0.0)


def _simple_request(fee=100.0):
    return ServiceRequest(
        "s", "ru", (Stop("A", 600, 600), Stop("B", 660, 660)), fee
    )


def _params(delta=10.0):
    return MarketParams(delta=delta)


def test_no_deviation_pays_full_fee():
    req = _simple_request()
    ru = RailwayUndertaking("ru", sensitivity_k=5.0)
    b = service_revenue(req, req.requested_departures, _params(), ru)
    assert b.net_revenue == pytest.approx(100.0, abs=1e-12)
    assert b.alpha == 0.0 and b.beta_sum == 0.0


def test_full_departure_shift_loses_dt_share():
    # Origin shifted by the whole margin, no travel-time change:
    # net = fee * (1 - 1 * p_max * share_dt) = 100 * (1 - 0.14) = 86.
    req = _simple_request()
    ru = RailwayUndertaking("ru", sensitivity_k=1.0)
    b = service_revenue(req, (610.0,), _params(), ru)
    assert b.alpha == pytest.approx(1.0, abs=1e-12)
    assert b.net_revenue == pytest.approx(86.0, abs=1e-9)


def test_worst_case_loses_exactly_p_max():
    # All deviations at maximum: net = fee * (1 - p_max) = 0.6 * fee.
    req = ServiceRequest(
        "s", "ru", (Stop("A", 600, 600), Stop("B", 640, 644), Stop("C", 700, 700)), 100.0
    )
    params = _params(delta=10.0)
    ru = RailwayUndertaking("ru", sensitivity_k=2.0)
    # shift origin by delta and stretch every pair by delta
    deps = (610.0, 664.0)  # pair 1: 54 vs 44 requested (+10); origin +10
    b = service_revenue(req, deps, params, ru)
    assert b.alpha == pytest.approx(1.0, abs=1e-12)
    # one pair maxed, terminal pair unchanged -> beta_sum = 1 of 2 pairs
    assert b.beta_sum == pytest.approx(1.0, abs=1e-12)
    assert b.net_revenue == pytest.approx(100 * (1 - 0.4 * 0.35 - 0.4 * 0.65 / 2), abs=1e-9)


def test_two_stop_worst_case_hits_sixty_percent():
    # With a single pair whose travel time cannot stretch (terminal pair),
    # only the departure component applies; use a 3-stop service where both
    # components max out to reach the 60% floor.
    req = ServiceRequest(
        "s", "ru", (Stop("A", 600, 600), Stop("B", 640, 644), Stop("C", 700, 700)), 100.0
    )
    params = _params(delta=10.0)
    ru = RailwayUndertaking("ru", sensitivity_k=2.0)
    deps = (610.0, 664.0)
    b = service_revenue(req, deps, params, ru)
    # the floor over all proposals is fee * (1 - p_max); this proposal cannot
    # go below it even with three pairs
    assert b.net_revenue >= 100 * (1 - 0.4) - 1e-9


def test_half_shift_hand_computed(corridor_instance):
    # fee 100, k=1, origin moved 30 min with delta=60: x = 0.5,
    # penalty = 100 * (1 - exp(-0.25)/2) * 0.14
    req = corridor_instance.requests[0]
    ru = corridor_instance.operator_of(req)
    b = service_revenue(req, (req.requested_departures[0] - 30,), corridor_instance.params, ru)
    expected_alpha = 1 - math.exp(-0.25) / 2
    assert b.alpha == pytest.approx(expected_alpha, abs=1e-12)
    assert b.net_revenue == pytest.approx(100 - 100 * expected_alpha * 0.14, abs=1e-9)
    assert b.net_revenue == pytest.approx(91.4516054824, abs=1e-6)


@given(
    scale=st.floats(min_value=0.1, max_value=50, allow_nan=False),
    shift=st.floats(min_value=-10, max_value=10, allow_nan=False),
    k=st.floats(min_value=0.1, max_value=50, allow_nan=False),
)
def test_fee_scaling_invariance(scale, shift, k):
    """Net revenue is homogeneous in the fee: penalties are fractions."""
    ru = RailwayUndertaking("ru", sensitivity_k=k)
    params = _params()
    a = service_revenue(_simple_request(100.0), (600.0 + shift,), params, ru)
    b = service_revenue(_simple_request(100.0 * scale), (600.0 + shift,), params, ru)
    assert b.net_revenue == pytest.approx(a.net_revenue * scale, rel=1e-9)


@given(shift=st.floats(min_value=-10, max_value=10, allow_nan=False))
def test_net_revenue_within_bounds(shift):
    ru = RailwayUndertaking("ru", sensitivity_k=3.0)
    b = service_revenue(_simple_request(), (600.0 + shift,), _params(), ru)
    assert 100 * (1 - 0.4) - 1e-9 <= b.net_revenue <= 100 + 1e-9


def test_total_revenue_respects_flags():
    req = _simple_request()
    ru = RailwayUndertaking("ru", sensitivity_k=1.0)
    b = service_revenue(req, req.requested_departures, _params(), ru)
    assert total_revenue([b, b], [True, False]) == pytest.approx(100.0)
    assert total_revenue([b, b], [True, True]) == pytest.approx(200.0)
    with pytest.raises(ValueError):
        total_revenue([b], [True, False])
