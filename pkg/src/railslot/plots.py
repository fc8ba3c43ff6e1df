"""Static SVG charts: Marey time-distance diagrams and convergence curves."""
from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .conflict import conflicting_segments, TrainPath
from .model import ProblemInstance, Stop, derive_times
from .scheduling import decode_vector

_PALETTE = ("#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22")
_CONFLICT_COLOR = "#d62728"


class _Frame:
    """Maps (time, km) / (x, y) data coordinates onto the SVG canvas."""

    def __init__(self, x_range, y_range, width=900, height=600, margin=60):
        self.width, self.height, self.margin = width, height, margin
        self.x_lo, self.x_hi = x_range
        self.y_lo, self.y_hi = y_range
        if self.x_hi == self.x_lo:
            self.x_hi += 1.0
        if self.y_hi == self.y_lo:
            self.y_hi += 1.0

    def x(self, v: float) -> float:
        inner = self.width - 2 * self.margin
        return self.margin + (v - self.x_lo) / (self.x_hi - self.x_lo) * inner

    def y(self, v: float) -> float:
        inner = self.height - 2 * self.margin
        return self.height - self.margin - (v - self.y_lo) / (self.y_hi - self.y_lo) * inner


def _svg_document(frame: _Frame, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{frame.width}" '
        f'height="{frame.height}" viewBox="0 0 {frame.width} {frame.height}">'
    )
    background = f'<rect width="{frame.width}" height="{frame.height}" fill="white"/>'
    return "\n".join([head, background, *body, "</svg>"])


def _fmt_hhmm(minutes: float) -> str:
    return f"{int(minutes) // 60:02d}:{int(minutes) % 60:02d}"


def marey_svg(
    instance: ProblemInstance,
    vector: Sequence[float] | None = None,
    scheduled: Sequence[bool] | None = None,
) -> str:
    """One polyline per service over a station-position axis, conflicts in red."""
    if vector is None:
        stops_per_service: list[tuple[Stop, ...]] = [req.stops for req in instance.requests]
    else:
        proposals = decode_vector(instance, vector)
        stops_per_service = [
            derive_times(req, deps) for req, deps in zip(instance.requests, proposals)
        ]
    candidates = list(scheduled) if scheduled is not None else None

    times = [t for stops in stops_per_service for s in stops for t in (s.arrival, s.departure)]
    t_lo = min(times, default=0.0) - 10
    t_hi = max(times, default=60.0) + 10
    km_hi = instance.corridor.stations[-1].km
    frame = _Frame((t_lo, t_hi), (0.0, km_hi))

    body = []
    for station in instance.corridor.stations:
        y = frame.y(station.km)
        body.append(
            f'<line x1="{frame.x(t_lo)}" y1="{y}" x2="{frame.x(t_hi)}" y2="{y}" '
            f'stroke="#cccccc" stroke-width="1"/>'
        )
        body.append(
            f'<text x="4" y="{y + 4}" font-size="12">{escape(station.name)}</text>'
        )
    for tick in range(int(t_lo // 60 + 1) * 60, int(t_hi) + 1, 60):
        x = frame.x(tick)
        body.append(
            f'<line x1="{x}" y1="{frame.y(0)}" x2="{x}" y2="{frame.y(km_hi)}" '
            f'stroke="#eeeeee" stroke-width="1"/>'
        )
        body.append(
            f'<text x="{x - 14}" y="{frame.height - 30}" font-size="11">{_fmt_hhmm(tick)}</text>'
        )

    for i, (req, stops) in enumerate(zip(instance.requests, stops_per_service)):
        if candidates is not None and not candidates[i]:
            continue
        color = _PALETTE[i % len(_PALETTE)]
        points = []
        for stop in stops:
            km = instance.corridor.position_of(stop.station_id)
            points.append(f"{frame.x(stop.arrival):.2f},{frame.y(km):.2f}")
            if stop.departure != stop.arrival:
                points.append(f"{frame.x(stop.departure):.2f},{frame.y(km):.2f}")
        body.append(
            f'<polyline points="{" ".join(points)}" fill="none" stroke="{color}" '
            f'stroke-width="2"><title>{escape(req.id)}</title></polyline>'
        )

    mask = candidates if candidates is not None else [True] * instance.n_services
    for i, km_a, km_b in conflicting_segments(instance, stops_per_service, mask):
        path = TrainPath(stops_per_service[i], instance.corridor)
        t_a = path.time_at(km_a, "departure")
        t_b = path.time_at(km_b, "arrival")
        body.append(
            f'<line x1="{frame.x(t_a):.2f}" y1="{frame.y(km_a):.2f}" '
            f'x2="{frame.x(t_b):.2f}" y2="{frame.y(km_b):.2f}" '
            f'stroke="{_CONFLICT_COLOR}" stroke-width="4" stroke-opacity="0.7"/>'
        )
    return _svg_document(frame, body)


def convergence_svg(traces: Sequence[tuple[str, Sequence[float]]]) -> str:
    """Best-fitness-per-epoch curves, one polyline per labelled trace."""
    if not traces:
        raise ValueError("need at least one trace")
    all_values = [v for _, values in traces for v in values]
    epochs = max(len(values) for _, values in traces)
    lo, hi = min(all_values), max(all_values)
    pad = (hi - lo) * 0.05 or 1.0
    frame = _Frame((1, max(epochs, 2)), (lo - pad, hi + pad))

    body = [
        f'<line x1="{frame.margin}" y1="{frame.height - frame.margin}" '
        f'x2="{frame.width - frame.margin}" y2="{frame.height - frame.margin}" stroke="black"/>',
        f'<line x1="{frame.margin}" y1="{frame.margin}" '
        f'x2="{frame.margin}" y2="{frame.height - frame.margin}" stroke="black"/>',
        f'<text x="{frame.width // 2 - 20}" y="{frame.height - 12}" font-size="12">epoch</text>',
        f'<text x="8" y="{frame.margin - 8}" font-size="12">best revenue</text>',
    ]
    for i, (label, values) in enumerate(traces):
        color = _PALETTE[i % len(_PALETTE)]
        points = " ".join(
            f"{frame.x(e + 1):.2f},{frame.y(v):.2f}" for e, v in enumerate(values)
        )
        body.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        body.append(
            f'<text x="{frame.width - frame.margin + 4}" '
            f'y="{frame.margin + 16 * i}" font-size="11" fill="{color}">{escape(label)}</text>'
        )
    return _svg_document(frame, body)
