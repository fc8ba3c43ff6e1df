"""Pairwise conflict detection on a shared single-track corridor.

Between stops every train moves at constant speed, so its time at any
position is a linear interpolation between the bracketing departure and
arrival. Two services conflict when, somewhere on their shared spatial span,
their trajectories cross or come closer in time than twice the safety
headway. Because both trajectories are piecewise linear in position, the
time gap is piecewise linear too, with kinks only at stop positions: it is
enough to test the endpoints of every linear piece.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import OutsideSpan
from .model import ConflictSemantics, Corridor, ProblemInstance, Stop


@dataclass(frozen=True)
class ConflictMatrix:
    """Symmetric binary service-by-service conflict indicator, zero diagonal."""

    bits: np.ndarray

    def __post_init__(self):
        b = self.bits
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError("conflict matrix must be square")
        if not np.array_equal(b, b.T) or np.any(np.diag(b)):
            raise ValueError("conflict matrix must be symmetric with zero diagonal")

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    def row(self, i: int) -> np.ndarray:
        return self.bits[i]

    def any_conflict(self, i: int) -> bool:
        return bool(self.bits[i].any())


class TrainPath:
    """Precomputed position/time profile of one service under a proposal."""

    __slots__ = ("positions", "arrivals", "departures", "span", "time_span")

    def __init__(self, stops: Sequence[Stop], corridor: Corridor):
        self.positions = np.array([corridor.position_of(s.station_id) for s in stops])
        self.arrivals = np.array([s.arrival for s in stops])
        self.departures = np.array([s.departure for s in stops])
        self.span = (float(self.positions[0]), float(self.positions[-1]))
        self.time_span = (float(self.departures[0]), float(self.arrivals[-1]))

    def time_at(self, position: float, endpoint: str = "departure") -> float:
        """Time at a position; at a dwell stop, `endpoint` picks arrival or departure."""
        pos = self.positions
        if position < pos[0] or position > pos[-1]:
            raise OutsideSpan(f"position {position} outside span {self.span}")
        j = int(np.searchsorted(pos, position))
        if pos[j] == position:
            return float(self.departures[j] if endpoint == "departure" else self.arrivals[j])
        a, b = j - 1, j
        frac = (position - pos[a]) / (pos[b] - pos[a])
        return float(self.departures[a] + frac * (self.arrivals[b] - self.departures[a]))

    def times_at(self, positions: np.ndarray, endpoint: str = "departure") -> np.ndarray:
        """Vectorized `time_at` over an array of in-span positions."""
        pos = self.positions
        if positions.min() < pos[0] or positions.max() > pos[-1]:
            raise OutsideSpan("positions outside span")
        arr, dep = _times_pair(self, np.asarray(positions, dtype=float))
        return dep if endpoint == "departure" else arr


def interpolate_time(
    stops: Sequence[Stop], corridor: Corridor, position: float, endpoint: str = "departure"
) -> float:
    """Time at which a service passes `position`, by linear interpolation."""
    return TrainPath(stops, corridor).time_at(position, endpoint)


def _shared_cuts(a: TrainPath, b: TrainPath) -> np.ndarray | None:
    """Breakpoints of the piecewise-linear time gap inside the shared span."""
    lo = max(a.positions[0], b.positions[0])
    hi = min(a.positions[-1], b.positions[-1])
    if lo > hi:
        return None
    cuts = np.concatenate((a.positions, b.positions, [lo, hi]))
    return np.unique(cuts[(cuts >= lo) & (cuts <= hi)])


def _times_pair(path: TrainPath, positions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Arrival and departure times at in-span positions, one search per call.

    Between stops both coincide on the linear interpolant; at a stop they
    bracket the dwell interval.
    """
    pos = path.positions
    j = np.searchsorted(pos, positions)  # in-span, so j <= len(pos) - 1
    at_stop = pos[j] == positions
    a = np.where(at_stop, j, j - 1)
    b = np.minimum(a + 1, len(pos) - 1)
    width = np.where(b > a, pos[b] - pos[a], 1.0)
    frac = (positions - pos[a]) / width
    moving = path.departures[a] + frac * (path.arrivals[b] - path.departures[a])
    arr = np.where(at_stop, path.arrivals[j], moving)
    dep = np.where(at_stop, path.departures[j], moving)
    return arr, dep


def _interval_gaps(a: TrainPath, b: TrainPath, cuts: np.ndarray):
    """Arrival/departure times of both paths at the cuts plus signed interval gaps."""
    a_arr, a_dep = _times_pair(a, cuts)
    b_arr, b_dep = _times_pair(b, cuts)
    gaps = np.where(
        a_arr > b_dep, a_arr - b_dep, np.where(b_arr > a_dep, a_dep - b_arr, 0.0)
    )
    return a_arr, a_dep, b_arr, b_dep, gaps


def signed_gap(a: TrainPath, b: TrainPath, position: float) -> float:
    """Signed time separation of the two passage intervals at a position.

    Positive when `a` passes after `b`, negative before, zero when their
    dwell intervals overlap. Stations hold both trains at once without
    penalty; only the temporal separation on the line matters.
    """
    *_, gaps = _interval_gaps(a, b, np.array([position]))
    return float(gaps[0])


def _conflict_permissive(a: TrainPath, b: TrainPath, cuts: np.ndarray, omega: float) -> bool:
    """Separation below twice the headway anywhere, or an ordering flip.

    Gaps at breakpoints use interval separations; within a linear piece the
    gap runs from the departure gap at the start to the arrival gap at the
    end, so a crossing inside a piece shows as a sign product <= 0.
    """
    a_arr, a_dep, b_arr, b_dep, gaps = _interval_gaps(a, b, cuts)
    if np.any(np.abs(gaps) < 2 * omega):
        return True
    if len(cuts) > 1 and np.any(gaps[:-1] * gaps[1:] <= 0):
        return True
    d_dt = a_dep - b_dep
    d_at = a_arr - b_arr
    return len(cuts) > 1 and bool(np.any(d_dt[:-1] * d_at[1:] <= 0))


def _conflict_strict(a: TrainPath, b: TrainPath, cuts: np.ndarray, omega: float) -> bool:
    """Literal per-piece rule: crossing and both endpoint gaps under 2*omega."""
    a_arr, a_dep, b_arr, b_dep, gaps = _interval_gaps(a, b, cuts)
    if len(cuts) == 1:
        return bool(abs(gaps[0]) < 2 * omega)
    d_dt = (a_dep - b_dep)[:-1]
    d_at = (a_arr - b_arr)[1:]
    hit = (d_dt * d_at <= 0) & (np.abs(d_dt) < 2 * omega) & (np.abs(d_at) < 2 * omega)
    return bool(np.any(hit))


def pair_conflict(
    a: TrainPath,
    b: TrainPath,
    omega: float,
    semantics: ConflictSemantics = ConflictSemantics.PERMISSIVE_OR,
) -> bool:
    """Whether two train paths conflict on their shared spatial span."""
    a_start, a_end = a.time_span
    b_start, b_end = b.time_span
    if a_end + 2 * omega <= b_start or b_end + 2 * omega <= a_start:
        return False
    cuts = _shared_cuts(a, b)
    if cuts is None:
        return False
    if semantics is ConflictSemantics.STRICT_AND:
        return _conflict_strict(a, b, cuts, omega)
    return _conflict_permissive(a, b, cuts, omega)


def conflict_matrix(
    instance: ProblemInstance,
    proposed_stops: Sequence[Sequence[Stop]],
    candidates: Sequence[bool] | None = None,
) -> ConflictMatrix:
    """Pairwise conflicts among candidate services; non-candidates get zero rows."""
    n = instance.n_services
    if candidates is None:
        candidates = [True] * n
    paths = [
        TrainPath(stops, instance.corridor) if ok else None
        for stops, ok in zip(proposed_stops, candidates)
    ]
    bits = np.zeros((n, n), dtype=np.int8)
    omega = instance.params.omega
    semantics = instance.params.conflict_semantics
    for i, j in _candidate_pairs(paths, omega):
        if pair_conflict(paths[i], paths[j], omega, semantics):
            bits[i, j] = bits[j, i] = 1
    return ConflictMatrix(bits)


def _candidate_pairs(paths: Sequence[TrainPath | None], omega: float) -> np.ndarray:
    """Index pairs (i < j) whose spatial spans and padded time spans overlap."""
    live = [i for i, p in enumerate(paths) if p is not None]
    if len(live) < 2:
        return np.empty((0, 2), dtype=int)
    lo = np.array([paths[i].span[0] for i in live])
    hi = np.array([paths[i].span[1] for i in live])
    start = np.array([paths[i].time_span[0] for i in live])
    end = np.array([paths[i].time_span[1] for i in live])
    space = (hi[:, None] >= lo[None, :]) & (hi[None, :] >= lo[:, None])
    near = (end[:, None] + 2 * omega > start[None, :]) & (
        end[None, :] + 2 * omega > start[:, None]
    )
    cand = np.triu(space & near, k=1)
    rows, cols = np.nonzero(cand)
    idx = np.asarray(live)
    return np.column_stack((idx[rows], idx[cols]))


def conflicting_segments(
    instance: ProblemInstance,
    proposed_stops: Sequence[Sequence[Stop]],
    candidates: Sequence[bool] | None = None,
) -> set[tuple[int, float, float]]:
    """(service index, km_lo, km_hi) spans involved in a pairwise conflict.

    Used for chart highlighting only; verdicts match `pair_conflict`.
    """
    n = instance.n_services
    if candidates is None:
        candidates = [True] * n
    paths = [
        TrainPath(stops, instance.corridor) if ok else None
        for stops, ok in zip(proposed_stops, candidates)
    ]
    omega = instance.params.omega
    semantics = instance.params.conflict_semantics
    out: set[tuple[int, float, float]] = set()
    for i, j in _candidate_pairs(paths, omega):
        i, j = int(i), int(j)
        a, b = paths[i], paths[j]
        cuts = _shared_cuts(a, b)
        if cuts is not None:
            for p_lo, p_hi in zip(cuts, cuts[1:]):
                sub = np.array([p_lo, p_hi])
                hit = (
                    _conflict_strict(a, b, sub, omega)
                    if semantics is ConflictSemantics.STRICT_AND
                    else _conflict_permissive(a, b, sub, omega)
                )
                if hit:
                    out.add((i, float(p_lo), float(p_hi)))
                    out.add((j, float(p_lo), float(p_hi)))
            if len(cuts) == 1 and pair_conflict(a, b, omega, semantics):
                p = float(cuts[0])
                out.add((i, p, p))
                out.add((j, p, p))
    return out
