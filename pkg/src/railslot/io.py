"""JSON instance and proposal files.

Instance schema::

    {
      "corridor": {"stations": [{"id", "name", "km"}]},
      "operators": [{"id", "k", "fee_multiplier"}],
      "params": {"delta_min", "omega_min", "dwell_max_min", "p_max",
                 "share_dt", "share_tt", "conflict_semantics"},
      "requests": [{"id", "ru", "fee",
                    "stops": [{"station", "arrival", "departure"}]}]
    }

Times accept "HH:MM" strings or numeric minutes from midnight; both parse to
the same internal value. Proposal files map service id to the list of
non-terminal departures.
"""
from __future__ import annotations

import json
from typing import Any

from .errors import ParseError
from .model import (
    ConflictSemantics,
    Corridor,
    MarketParams,
    ProblemInstance,
    RailwayUndertaking,
    ServiceRequest,
    Station,
    Stop,
)


def parse_time(value: Any, where: str = "") -> float:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if value < 0:
            raise ParseError(f"{where}: negative time {value}")
        return float(value)
    if isinstance(value, str):
        parts = value.split(":")
        if len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
            hours, minutes = int(parts[0]), int(parts[1])
            if minutes < 60:
                return float(hours * 60 + minutes)
        raise ParseError(f"{where}: bad time string {value!r} (want 'HH:MM' or minutes)")
    raise ParseError(f"{where}: bad time value {value!r}")


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ParseError(f"{where}: missing key {key!r}")
    return mapping[key]


def parse_instance(data: bytes | str | dict) -> ProblemInstance:
    """Parse and validate an instance file; all model invariants are enforced."""
    if isinstance(data, (bytes, str)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")

    corridor_obj = _require(data, "corridor", "instance")
    stations = []
    for i, entry in enumerate(_require(corridor_obj, "stations", "corridor")):
        where = f"corridor.stations[{i}]"
        stations.append(
            Station(
                id=str(_require(entry, "id", where)),
                name=str(entry.get("name", entry["id"])),
                km=float(_require(entry, "km", where)),
            )
        )
    operators = []
    for i, entry in enumerate(data.get("operators", [])):
        where = f"operators[{i}]"
        operators.append(
            RailwayUndertaking(
                id=str(_require(entry, "id", where)),
                sensitivity_k=float(_require(entry, "k", where)),
                fee_multiplier=float(entry.get("fee_multiplier", 1.0)),
            )
        )
    p = data.get("params", {})
    params = MarketParams(
        delta=float(p.get("delta_min", 10.0)),
        omega=float(p.get("omega_min", 10.0)),
        dwell_max=float(p.get("dwell_max_min", 10.0)),
        p_max=float(p.get("p_max", 0.4)),
        share_dt=float(p.get("share_dt", 0.35)),
        share_tt=float(p.get("share_tt", 0.65)),
        conflict_semantics=ConflictSemantics(p.get("conflict_semantics", "permissive_or")),
    )
    requests = []
    for i, entry in enumerate(data.get("requests", [])):
        where = f"requests[{i}]"
        stops = []
        for j, stop in enumerate(_require(entry, "stops", where)):
            stop_where = f"{where}.stops[{j}]"
            stops.append(
                Stop(
                    station_id=str(_require(stop, "station", stop_where)),
                    arrival=parse_time(_require(stop, "arrival", stop_where), stop_where),
                    departure=parse_time(_require(stop, "departure", stop_where), stop_where),
                )
            )
        requests.append(
            ServiceRequest(
                id=str(_require(entry, "id", where)),
                ru_id=str(_require(entry, "ru", where)),
                stops=tuple(stops),
                fee=float(_require(entry, "fee", where)),
            )
        )
    try:
        return ProblemInstance(
            corridor=Corridor(stations=tuple(stations)),
            operators=tuple(operators),
            requests=tuple(requests),
            params=params,
        )
    except ValueError as exc:
        raise ParseError(str(exc))


def serialize_instance(instance: ProblemInstance) -> str:
    data = {
        "corridor": {
            "stations": [
                {"id": s.id, "name": s.name, "km": s.km} for s in instance.corridor.stations
            ]
        },
        "operators": [
            {"id": ru.id, "k": ru.sensitivity_k, "fee_multiplier": ru.fee_multiplier}
            for ru in instance.operators
        ],
        "params": {
            "delta_min": instance.params.delta,
            "omega_min": instance.params.omega,
            "dwell_max_min": instance.params.dwell_max,
            "p_max": instance.params.p_max,
            "share_dt": instance.params.share_dt,
            "share_tt": instance.params.share_tt,
            "conflict_semantics": instance.params.conflict_semantics.value,
        },
        "requests": [
            {
                "id": req.id,
                "ru": req.ru_id,
                "fee": req.fee,
                "stops": [
                    {"station": s.station_id, "arrival": s.arrival, "departure": s.departure}
                    for s in req.stops
                ],
            }
            for req in instance.requests
        ],
    }
    return json.dumps(data, indent=2)


def parse_proposal(data: bytes | str | dict, instance: ProblemInstance) -> list[float]:
    """Proposal file {"departures": {service_id: [minutes...]}} to a flat vector."""
    if isinstance(data, (bytes, str)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    departures = _require(data, "departures", "proposal")
    vector: list[float] = []
    for req in instance.requests:
        if req.id not in departures:
            raise ParseError(f"proposal: missing service {req.id!r}")
        entries = departures[req.id]
        if len(entries) != req.n_decisions:
            raise ParseError(
                f"proposal: service {req.id} needs {req.n_decisions} departures, got {len(entries)}"
            )
        vector.extend(parse_time(v, f"proposal.{req.id}") for v in entries)
    return vector
