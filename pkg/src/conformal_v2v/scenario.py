"""Random highway scenes: Poisson traffic, blockage tests, relay candidates.

Scenes are plan-view snapshots: every vehicle is an axis-aligned box on a
lane, the two link endpoints (TxV, RxV) sit in the center lane, and blockage
of a path is a 2D segment-vs-footprint intersection test (all roofs share
the same height, so a same-height ray is blocked exactly by the boxes its
plan-view projection crosses).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import DoorPose, RoadConfig, SpecularArea, Vehicle, specular_area

Candidate = tuple[int, str]  # (vehicle index, door side)


@dataclass(frozen=True)
class Scenario:
    road: RoadConfig
    vehicles: tuple[Vehicle, ...]
    txv: int
    rxv: int
    seed: int | None = None
    dropped: int = 0  # placements abandoned after the retry budget

    def __post_init__(self):
        if self.txv == self.rxv:
            raise ValueError("txv and rxv must differ")
        for idx in (self.txv, self.rxv):
            if not 0 <= idx < len(self.vehicles):
                raise ValueError(f"endpoint index {idx} out of range")

    @property
    def txv_vehicle(self) -> Vehicle:
        return self.vehicles[self.txv]

    @property
    def rxv_vehicle(self) -> Vehicle:
        return self.vehicles[self.rxv]

    @property
    def p_t(self) -> np.ndarray:
        return self.txv_vehicle.array_position()

    @property
    def p_r(self) -> np.ndarray:
        return self.rxv_vehicle.array_position()


@dataclass(frozen=True)
class BlockageReport:
    """Blocker counts for the direct path and each candidate's two segments."""

    direct_blockers: int
    candidate_blockers: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.direct_blockers < 0 or any(
            a < 0 or b < 0 for a, b in self.candidate_blockers
        ):
            raise ValueError("blocker counts must be >= 0")


def generate_traffic(
    road: RoadConfig,
    rho: float,
    rng: np.random.Generator | int,
    link_distance_m: float = 100.0,
    vehicle_length_m: float = 5.0,
    vehicle_width_m: float = 1.8,
    vehicle_height_m: float = 1.5,
    max_retries: int = 100,
) -> Scenario:
    """Drop Poisson traffic on every lane around a fixed TxV-RxV pair.

    Per-lane vehicle counts are Poisson(rho * road_length_km); longitudinal
    positions are uniform, redrawn up to ``max_retries`` times when two
    same-lane footprints would overlap (drops are counted, not silently
    clipped).  TxV sits at the road start of the center lane and RxV
    ``link_distance_m`` further down the same lane.
    """
    if rho < 0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    seed = None
    if isinstance(rng, (int, np.integer)):
        seed = int(rng)
        rng = np.random.default_rng(np.random.SeedSequence(seed))

    center = road.n_lanes // 2
    y_t = vehicle_length_m / 2.0
    y_r = y_t + link_distance_m
    if y_r + vehicle_length_m / 2.0 > road.length:
        raise ValueError(
            f"link distance {link_distance_m} m does not fit a {road.length} m road"
        )

    def make(lane: int, y: float) -> Vehicle:
        return Vehicle(
            x=road.lane_center(lane),
            y=y,
            length=vehicle_length_m,
            width=vehicle_width_m,
            height=vehicle_height_m,
            lane=lane,
        )

    vehicles = [make(center, y_t), make(center, y_r)]
    dropped = 0
    length_km = road.length / 1000.0
    for lane in range(road.n_lanes):
        occupied = [v.y for v in vehicles if v.lane == lane]
        count = int(rng.poisson(rho * length_km))
        for _ in range(count):
            placed = False
            for _ in range(max_retries):
                y = float(rng.uniform(0.0, road.length))
                if all(abs(y - other) >= vehicle_length_m for other in occupied):
                    occupied.append(y)
                    vehicles.append(make(lane, y))
                    placed = True
                    break
            if not placed:
                dropped += 1

    return Scenario(
        road=road, vehicles=tuple(vehicles), txv=0, rxv=1, seed=seed, dropped=dropped
    )


def _segment_hits_boxes(
    p: np.ndarray, q: np.ndarray, boxes: np.ndarray, eps: float = 1e-12
) -> np.ndarray:
    """Open-segment vs axis-aligned rectangle intersection (plan view).

    ``boxes`` is (V, 4) of (xmin, xmax, ymin, ymax); returns a boolean mask.
    Slab clipping: the segment crosses a box iff the parameter interval
    [tmin, tmax] over both axes is non-empty and overlaps the open (0, 1).
    """
    if boxes.size == 0:
        return np.zeros(0, dtype=bool)
    p2, q2 = np.asarray(p, dtype=float)[:2], np.asarray(q, dtype=float)[:2]
    d = q2 - p2
    tmin = np.zeros(len(boxes))
    tmax = np.ones(len(boxes))
    ok = np.ones(len(boxes), dtype=bool)
    for axis in range(2):
        lo, hi = boxes[:, 2 * axis], boxes[:, 2 * axis + 1]
        if abs(d[axis]) < eps:
            ok &= (p2[axis] >= lo) & (p2[axis] <= hi)
        else:
            t1 = (lo - p2[axis]) / d[axis]
            t2 = (hi - p2[axis]) / d[axis]
            t_lo, t_hi = np.minimum(t1, t2), np.maximum(t1, t2)
            tmin = np.maximum(tmin, t_lo)
            tmax = np.minimum(tmax, t_hi)
    return ok & (tmin <= tmax) & (tmax > eps) & (tmin < 1.0 - eps)


def count_blockers(
    scenario: Scenario,
    frm: np.ndarray,
    to: np.ndarray,
    excluded: frozenset[int] | set[int] | tuple[int, ...] = (),
) -> int:
    """Vehicles whose footprint crosses the open plan-view segment frm->to.

    The TxV and RxV are always excluded, plus any indices in ``excluded``
    (e.g. the relay vehicle for its own segments).
    """
    p = np.asarray(frm, dtype=float)
    q = np.asarray(to, dtype=float)
    if np.allclose(p[:2], q[:2]):
        raise ValueError("segment endpoints must be distinct in plan view")
    skip = {scenario.txv, scenario.rxv, *excluded}
    idx = [i for i in range(len(scenario.vehicles)) if i not in skip]
    if not idx:
        return 0
    boxes = np.array([scenario.vehicles[i].footprint for i in idx])
    return int(np.count_nonzero(_segment_hits_boxes(p, q, boxes)))


def door_reference_point(vehicle: Vehicle, side: str, door_center_height: float) -> np.ndarray:
    """Center of the door surface on the requested side."""
    return vehicle.door_center(side, door_center_height)


def door_pose(
    vehicle: Vehicle, side: str, door_length_m: float, door_center_height: float
) -> DoorPose:
    """Mounting pose for the door surface of ``vehicle`` on ``side``.

    The pose origin is the surface reference element; the surface extends
    door_length_m along the vehicle from there, so the origin is shifted
    half a door back to center the surface on the vehicle.
    """
    center = vehicle.door_center(side, door_center_height)
    offset = door_length_m / 2.0
    shift = -offset if side == "right" else offset
    position = center + np.array([0.0, shift, 0.0])
    return DoorPose(position=position, side=side, yaw=0.0)


def _faces_both(
    vehicle: Vehicle, side: str, p_t: np.ndarray, p_r: np.ndarray, door_center_height: float
) -> bool:
    door = vehicle.door_center(side, door_center_height)
    normal = vehicle.door_normal(side)
    return (
        float(np.dot(p_t - door, normal)) > 0.0
        and float(np.dot(p_r - door, normal)) > 0.0
    )


def candidate_relays_irs(
    scenario: Scenario,
    door_length_m: float = 1.0,
    door_center_height: float = 0.9,
) -> list[Candidate]:
    """Doors inside the specular area that face both endpoints."""
    area = specular_area(scenario.p_t, scenario.p_r, scenario.road, door_length_m)
    out: list[Candidate] = []
    for i, vehicle in enumerate(scenario.vehicles):
        if i in (scenario.txv, scenario.rxv):
            continue
        for side in ("left", "right"):
            door = door_reference_point(vehicle, side, door_center_height)
            if area.contains(door) and _faces_both(
                vehicle, side, scenario.p_t, scenario.p_r, door_center_height
            ):
                out.append((i, side))
    return out


def candidate_relays_ris(
    scenario: Scenario,
    max_range_m: float = 150.0,
    door_center_height: float = 0.9,
) -> list[Candidate]:
    """Doors within range of both endpoints that face both endpoints."""
    if max_range_m <= 0:
        raise ValueError(f"max_range_m must be positive, got {max_range_m}")
    out: list[Candidate] = []
    for i, vehicle in enumerate(scenario.vehicles):
        if i in (scenario.txv, scenario.rxv):
            continue
        for side in ("left", "right"):
            door = door_reference_point(vehicle, side, door_center_height)
            if (
                np.linalg.norm(door - scenario.p_t) <= max_range_m
                and np.linalg.norm(door - scenario.p_r) <= max_range_m
                and _faces_both(
                    vehicle, side, scenario.p_t, scenario.p_r, door_center_height
                )
            ):
                out.append((i, side))
    return out


def blockage_report(
    scenario: Scenario,
    candidates: list[Candidate],
    door_center_height: float = 0.9,
) -> BlockageReport:
    """Blocker counts for the direct path and both segments of each candidate."""
    direct = count_blockers(scenario, scenario.p_t, scenario.p_r)
    per_candidate = []
    for idx, side in candidates:
        door = door_reference_point(scenario.vehicles[idx], side, door_center_height)
        first = count_blockers(scenario, scenario.p_t, door, excluded={idx})
        second = count_blockers(scenario, door, scenario.p_r, excluded={idx})
        per_candidate.append((first, second))
    return BlockageReport(
        direct_blockers=direct, candidate_blockers=tuple(per_candidate)
    )


def blockage_event(
    scenario: Scenario,
    mode: str,
    door_length_m: float = 1.0,
    door_center_height: float = 0.9,
    max_range_m: float = 150.0,
) -> bool:
    """Whether the link counts as blocked under the given relaying mode.

    direct: any blocker on the TxV-RxV segment.  with_irs / with_ris: the
    direct path is blocked AND every candidate door (specular-area doors for
    with_irs, any in-range door for with_ris) has a blocker on at least one
    of its two segments, or there is no candidate at all.
    """
    if mode not in ("direct", "with_irs", "with_ris"):
        raise ValueError(f"unknown blockage mode {mode!r}")
    direct_blocked = count_blockers(scenario, scenario.p_t, scenario.p_r) >= 1
    if mode == "direct" or not direct_blocked:
        return direct_blocked
    if mode == "with_irs":
        candidates = candidate_relays_irs(scenario, door_length_m, door_center_height)
    else:
        candidates = candidate_relays_ris(scenario, max_range_m, door_center_height)
    report = blockage_report(scenario, candidates, door_center_height)
    # all() over an empty tuple is True: no candidate doors means still blocked
    return all(first + second > 0 for first, second in report.candidate_blockers)
