"""Measurement protocols: boundary entropy, mutual information, purification and traces.

Every trajectory is an independent task; its randomness is keyed by (seed, trajectory)
so records do not depend on the worker count or on evaluation order.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Literal

from boundary_mipt.core.graph_state import to_tableau
from boundary_mipt.core.models import (
    GRAPH_DEFAULT_WINDOW,
    CliffordCircuitSpec,
    Geometry,
    LatticeSpec,
    MeasurementPolicy,
    RunRecord,
)
from boundary_mipt.core.streaming import (
    stream_clifford_boundary,
    stream_graph_boundary,
    z_only_boundary_graph,
)
from boundary_mipt.core.streams import StreamTag, TrajectoryStreams
from boundary_mipt.core.tableau import StabilizerTableau, entropy_region

logger = logging.getLogger("boundary_mipt")

TaskKind = Literal["strip", "mutual_info", "purify", "trace"]


def chord_length(separation: float, lx: int) -> float:
    """(Lx / pi) sin(pi |d| / Lx)."""
    return (lx / math.pi) * math.sin(math.pi * abs(separation) / lx)


def cross_ratio(x1: int, x2: int, x3: int, x4: int, lx: int) -> float:
    """eta = x12 x34 / (x13 x24) from chord distances on the ring.

    Raises:
        ValueError: If the positions are not strictly increasing inside [0, lx).
    """
    if not 0 <= x1 < x2 < x3 < x4 < lx:
        raise ValueError(f"positions must satisfy 0 <= x1 < x2 < x3 < x4 < {lx}, got {(x1, x2, x3, x4)}")
    x12 = chord_length(x2 - x1, lx)
    x34 = chord_length(x4 - x3, lx)
    x13 = chord_length(x3 - x1, lx)
    x24 = chord_length(x4 - x2, lx)
    return (x12 * x34) / (x13 * x24)


def parse_quadruple(region: str) -> tuple[int, int, int, int]:
    """Inverse of the ``x1:x2:x3:x4`` region descriptor used by mutual-information records."""
    parts = tuple(int(p) for p in region.split(":"))
    if len(parts) != 4:
        raise ValueError(f"not a mutual-information region: {region!r}")
    return parts  # type: ignore[return-value]


def interval_region(lx: int, length: int, start: int = 0) -> Geometry:
    return Geometry(kind="strip-top", intervals=((start % lx, length),))


def fraction_region(lx: int, fraction: float) -> Geometry:
    """Interval of length round(fraction * lx) starting at x = 0."""
    return interval_region(lx, max(1, min(lx, round(fraction * lx))))


# ---------------------------------------------------------------------------
# Trajectory tasks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrajectoryTask:
    """One sampled circuit realisation and what to record from it."""

    kind: TaskKind
    spec: LatticeSpec
    q: int
    policy: MeasurementPolicy
    circuit: CliffordCircuitSpec | None
    seed: int
    trajectory: int
    window: int | None = None
    regions: tuple[Geometry, ...] = ()
    heights: tuple[int, ...] = ()
    draws: int = 0

    @property
    def model(self) -> str:
        return "clifford" if self.circuit is not None else "graph"

    @property
    def param(self) -> float:
        return self.circuit.p_gate if self.circuit is not None else self.policy.p_x

    @property
    def streams(self) -> TrajectoryStreams:
        return TrajectoryStreams(self.seed, self.trajectory)

    def record(self, ly: int, region: str, value: float, sample: int | None = None) -> RunRecord:
        return RunRecord(
            model=self.model,
            q=self.q,
            lx=self.spec.lx,
            ly=ly,
            param=float(self.param),
            region=region,
            sample=self.trajectory if sample is None else sample,
            seed=self.seed,
            value=float(value),
        )


def boundary_states(
    task: TrajectoryTask, heights: Iterable[int], *, keep_bottom: bool = False
) -> dict[int, StabilizerTableau]:
    """Boundary tableau of the task's circuit for each lattice height."""
    heights = sorted(set(heights))
    if task.circuit is not None:
        return {
            h: stream_clifford_boundary(
                task.spec.model_copy(update={"ly": h}),
                task.circuit,
                task.streams,
                window=task.window,
                keep_bottom=keep_bottom,
            )
            for h in heights
        }
    if task.policy.p_x == 0.0 and len(heights) == 1:
        spec = task.spec.model_copy(update={"ly": heights[0]})
        graph = z_only_boundary_graph(spec, task.q, task.streams, keep_bottom=keep_bottom)
        return {heights[0]: to_tableau(graph)}
    return stream_graph_boundary(
        task.spec,
        task.q,
        task.policy,
        task.streams,
        window=GRAPH_DEFAULT_WINDOW if task.window is None else task.window,
        keep_bottom=keep_bottom,
        heights=heights,
    )


def evaluate_trajectory(task: TrajectoryTask) -> list[RunRecord]:
    """Run one trajectory and return its records."""
    started = time.perf_counter()
    lx, ly = task.spec.lx, task.spec.ly
    records: list[RunRecord] = []
    if task.kind == "strip":
        tableau = boundary_states(task, [ly])[ly]
        for geometry in task.regions:
            value = entropy_region(tableau, geometry.sites(lx))
            records.append(task.record(ly, geometry.describe(), value))
    elif task.kind == "trace":
        for height, tableau in boundary_states(task, task.heights).items():
            for geometry in task.regions:
                value = entropy_region(tableau, geometry.sites(lx))
                records.append(task.record(height, geometry.describe(), value))
    elif task.kind == "purify":
        for height, tableau in boundary_states(task, task.heights, keep_bottom=True).items():
            records.append(task.record(height, "top", entropy_region(tableau, range(lx))))
    elif task.kind == "mutual_info":
        tableau = boundary_states(task, [ly])[ly]
        rng = task.streams.rng(StreamTag.INTERVALS)
        for k in range(task.draws):
            x1, x2, x3, x4 = sorted(int(x) for x in rng.choice(lx, size=4, replace=False))
            a = range(x1, x2)
            b = range(x3, x4)
            s_ab = entropy_region(tableau, [*a, *b])
            value = entropy_region(tableau, a) + entropy_region(tableau, b) - s_ab
            records.append(
                task.record(ly, f"{x1}:{x2}:{x3}:{x4}", value, task.trajectory * task.draws + k)
            )
    else:
        raise ValueError(f"unknown task kind {task.kind!r}")
    logger.debug(
        "trajectory %d (%s, lx=%d, param=%g): %.3fs",
        task.trajectory,
        task.kind,
        lx,
        task.param,
        time.perf_counter() - started,
    )
    return records


def run_tasks(tasks: Sequence[TrajectoryTask], workers: int = 1) -> list[RunRecord]:
    """Evaluate tasks inline or on a process pool; output order is the records' key order."""
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            chunks = list(executor.map(evaluate_trajectory, tasks))
    else:
        chunks = [evaluate_trajectory(task) for task in tasks]
    records = [record for chunk in chunks for record in chunk]
    return sorted(records, key=lambda r: r.sort_key)


def _tasks(
    kind: TaskKind,
    spec: LatticeSpec,
    q: int,
    policy: MeasurementPolicy,
    circuit: CliffordCircuitSpec | None,
    samples: int,
    seed: int,
    window: int | None,
    **extra: object,
) -> list[TrajectoryTask]:
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if circuit is not None and q != 2:
        raise ValueError(f"the Clifford model is sampled for q = 2 only, got q={q}")
    return [
        TrajectoryTask(
            kind=kind,
            spec=spec,
            q=q,
            policy=policy,
            circuit=circuit,
            seed=seed,
            trajectory=trajectory,
            window=window,
            **extra,  # type: ignore[arg-type]
        )
        for trajectory in range(samples)
    ]


def _as_regions(regions: Geometry | Sequence[Geometry]) -> tuple[Geometry, ...]:
    out = (regions,) if isinstance(regions, Geometry) else tuple(regions)
    if not out:
        raise ValueError("at least one region is required")
    return out


# ---------------------------------------------------------------------------
# Protocols
# ---------------------------------------------------------------------------


def run_strip_entropy(
    spec: LatticeSpec,
    q: int,
    policy: MeasurementPolicy,
    regions: Geometry | Sequence[Geometry],
    samples: int,
    seed: int,
    *,
    circuit: CliffordCircuitSpec | None = None,
    window: int | None = None,
    workers: int = 1,
) -> list[RunRecord]:
    """Boundary entropy of each region after measuring every bulk row (strip-top geometry)."""
    regions = _as_regions(regions)
    for geometry in regions:
        if geometry.kind != "strip-top":
            raise ValueError(f"strip entropy needs strip-top geometry, got {geometry.kind}")
        geometry.sites(spec.lx)
    tasks = _tasks("strip", spec, q, policy, circuit, samples, seed, window, regions=regions)
    return run_tasks(tasks, workers)


def run_entropy_trace(
    spec: LatticeSpec,
    q: int,
    policy: MeasurementPolicy,
    regions: Geometry | Sequence[Geometry],
    samples: int,
    seed: int,
    *,
    circuit: CliffordCircuitSpec | None = None,
    window: int | None = None,
    workers: int = 1,
) -> list[RunRecord]:
    """Boundary entropy for every height 2..Ly of the same trajectories."""
    regions = _as_regions(regions)
    for geometry in regions:
        geometry.sites(spec.lx)
    heights = tuple(range(2, spec.ly + 1))
    tasks = _tasks(
        "trace", spec, q, policy, circuit, samples, seed, window, regions=regions, heights=heights
    )
    return run_tasks(tasks, workers)


def run_mutual_info(
    spec: LatticeSpec,
    q: int,
    policy: MeasurementPolicy,
    samples: int,
    seed: int,
    *,
    draws: int = 16,
    circuit: CliffordCircuitSpec | None = None,
    window: int | None = None,
    workers: int = 1,
) -> list[RunRecord]:
    """I_AB = S_A + S_B - S_AB for ``draws`` random interval pairs per trajectory.

    Four distinct sorted positions x1 < x2 < x3 < x4 give the half-open intervals
    A = [x1, x2) and B = [x3, x4): x2 and x4 are excluded, so |A| = x2 - x1 and
    |B| = x4 - x3. Records carry them as the region ``x1:x2:x3:x4``, and
    ``cross_ratio`` takes the same four endpoints.
    """
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    if spec.lx < 4:
        raise ValueError(f"mutual information needs lx >= 4, got {spec.lx}")
    tasks = _tasks("mutual_info", spec, q, policy, circuit, samples, seed, window, draws=draws)
    return run_tasks(tasks, workers)


def run_two_edge_purification(
    spec: LatticeSpec,
    q: int,
    policy: MeasurementPolicy,
    samples: int,
    seed: int,
    *,
    ly_values: Iterable[int] | None = None,
    circuit: CliffordCircuitSpec | None = None,
    window: int | None = None,
    workers: int = 1,
) -> list[RunRecord]:
    """S(top row) with the top and bottom rows unmeasured, for each height in the sweep.

    Raises:
        ValueError: If any height is below 3 (no bulk row) or above ``spec.ly``.
    """
    heights = tuple(sorted(set(ly_values) if ly_values is not None else {spec.ly}))
    bad = [h for h in heights if h < 3 or h > spec.ly]
    if bad:
        raise ValueError(f"purification heights must lie in [3, {spec.ly}], got {bad}")
    tasks = _tasks("purify", spec, q, policy, circuit, samples, seed, window, heights=heights)
    return run_tasks(tasks, workers)
