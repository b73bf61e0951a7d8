"""Exponent and critical-point estimators over RunRecords."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.stats import linregress

from boundary_mipt.core.experiments import chord_length, cross_ratio, parse_quadruple
from boundary_mipt.core.models import FitResult, RunRecord

logger = logging.getLogger("boundary_mipt")

MIN_FIT_POINTS = 3
DELTA_BINS = 8
LAMBDA_DROP_ROWS = 2


class FitError(ValueError):
    """An estimator had too little usable data."""


def _linear_fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """(slope, slope stderr, r^2) of an ordinary least-squares line."""
    result = linregress(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    stderr = float(result.stderr)
    if not math.isfinite(stderr):
        stderr = 0.0
    return float(result.slope), stderr, float(result.rvalue) ** 2


def _interval_length(region: str) -> int:
    parts = region.split(":")
    if len(parts) != 2 or "+" in region:
        raise FitError(f"alpha fit needs single-interval regions, got {region!r}")
    return int(parts[1])


def _mean_by(records: Iterable[RunRecord], key) -> dict:
    groups: dict = defaultdict(list)
    for record in records:
        groups[key(record)].append(record.value)
    return {k: float(np.mean(v)) for k, v in groups.items()}


# ---------------------------------------------------------------------------
# alpha: S_A = 2 alpha log[(Lx/pi) sin(pi L_A / Lx)]
# ---------------------------------------------------------------------------


def fit_alpha(records: Iterable[RunRecord]) -> FitResult:
    """Half the slope of mean S_A against the log chord length, over L_A in [Lx/8, Lx/2].

    Raises:
        FitError: If fewer than three distinct abscissae fall inside the window.
    """
    means = _mean_by(records, lambda r: (r.lx, _interval_length(r.region)))
    points = sorted(
        (math.log(chord_length(length, lx)), mean)
        for (lx, length), mean in means.items()
        if lx / 8 <= length <= lx / 2
    )
    distinct = {round(x, 12) for x, _ in points}
    if len(distinct) < MIN_FIT_POINTS:
        raise FitError(
            f"alpha fit needs >= {MIN_FIT_POINTS} distinct chord lengths in [Lx/8, Lx/2], "
            f"got {len(distinct)}"
        )
    slope, stderr, r2 = _linear_fit([p[0] for p in points], [p[1] for p in points])
    return FitResult(
        kind="alpha",
        value=slope / 2,
        stderr=stderr / 2,
        window="L_A in [Lx/8, Lx/2]",
        n_points=len(points),
        r_squared=r2,
    )


# ---------------------------------------------------------------------------
# Delta: I_AB ~ eta^Delta
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaBin:
    """Mutual-information records whose cross ratio falls in [lo, hi)."""

    lo: float
    hi: float
    log_eta: float
    mean: float
    std: float
    count: int

    @property
    def relative_spread(self) -> float:
        return self.std / self.mean if self.mean > 0 else math.inf


def mutual_info_points(records: Iterable[RunRecord]) -> list[tuple[float, float]]:
    """(eta, I_AB) per record."""
    return [(cross_ratio(*parse_quadruple(r.region), r.lx), r.value) for r in records]


def bin_by_eta(
    points: Sequence[tuple[float, float]], lo: float, hi: float, n_bins: int = DELTA_BINS
) -> list[EtaBin]:
    """Geometric bins over [lo, hi]; empty bins are left out."""
    if not 0 < lo < hi:
        raise ValueError(f"bin range must satisfy 0 < lo < hi, got [{lo}, {hi}]")
    edges = np.geomspace(lo, hi, n_bins + 1)
    members: list[list[tuple[float, float]]] = [[] for _ in range(n_bins)]
    for eta, value in points:
        if lo <= eta <= hi:
            idx = min(int(np.searchsorted(edges, eta, side="right")) - 1, n_bins - 1)
            members[idx].append((eta, value))
    bins = []
    for k, group in enumerate(members):
        if not group:
            continue
        values = np.array([v for _, v in group], dtype=float)
        bins.append(
            EtaBin(
                lo=float(edges[k]),
                hi=float(edges[k + 1]),
                log_eta=float(np.mean(np.log([e for e, _ in group]))),
                mean=float(values.mean()),
                std=float(values.std()),
                count=len(group),
            )
        )
    return bins


def fit_delta(records: Iterable[RunRecord], n_bins: int = DELTA_BINS) -> FitResult:
    """Slope of log mean I_AB against log eta over the smallest populated decade of eta.

    Raises:
        FitError: If fewer than three bins in that decade have a positive mean.
    """
    points = [(eta, value) for eta, value in mutual_info_points(records) if eta > 0]
    if not points:
        raise FitError("no mutual-information records")
    lo = min(eta for eta, _ in points)
    hi = 10 * lo
    bins = [b for b in bin_by_eta(points, lo, hi, n_bins) if b.mean > 0]
    if len(bins) < MIN_FIT_POINTS:
        raise FitError(
            f"small-eta window [{lo:.3g}, {hi:.3g}] has {len(bins)} populated bins, "
            f"need {MIN_FIT_POINTS}"
        )
    slope, stderr, r2 = _linear_fit([b.log_eta for b in bins], [math.log(b.mean) for b in bins])
    return FitResult(
        kind="delta",
        value=slope,
        stderr=stderr,
        window=f"eta in [{lo:.6g}, {hi:.6g}]",
        n_points=len(bins),
        r_squared=r2,
    )


# ---------------------------------------------------------------------------
# lambda: S_top ~ exp(-lambda Ly)
# ---------------------------------------------------------------------------


def fit_lambda(
    records: Iterable[RunRecord],
    mode: Literal["rows", "aspect"] = "rows",
    drop: int = LAMBDA_DROP_ROWS,
) -> FitResult:
    """Minus the slope of log mean S_top against Ly (``rows``) or pi Ly / Lx (``aspect``).

    The ``drop`` smallest heights are treated as transient and skipped.

    Raises:
        FitError: If fewer than three points with S_top > 0 remain.
    """
    means = _mean_by(records, lambda r: (r.lx, r.ly))
    heights = sorted({ly for _, ly in means})[drop:]
    if mode == "rows":
        sizes = {lx for lx, _ in means}
        if len(sizes) > 1:
            raise FitError(f"rows mode fits one lx at a time, got {sorted(sizes)}")
        abscissa = lambda lx, ly: float(ly)  # noqa: E731
    elif mode == "aspect":
        abscissa = lambda lx, ly: math.pi * ly / lx  # noqa: E731
    else:
        raise ValueError(f"mode must be 'rows' or 'aspect', got {mode!r}")
    points = sorted(
        (abscissa(lx, ly), math.log(mean))
        for (lx, ly), mean in means.items()
        if ly in heights and mean > 0
    )
    if len(points) < MIN_FIT_POINTS:
        raise FitError(
            f"lambda fit needs >= {MIN_FIT_POINTS} heights with S_top > 0, got {len(points)}"
        )
    slope, stderr, r2 = _linear_fit([p[0] for p in points], [p[1] for p in points])
    return FitResult(
        kind="lambda",
        value=-slope,
        stderr=stderr,
        window=f"{'Ly' if mode == 'rows' else 'pi Ly/Lx'} beyond the first {drop} heights",
        n_points=len(points),
        r_squared=r2,
    )


def fit_lambda_vs_inverse_lx(fits: Mapping[int, FitResult]) -> FitResult:
    """Linear fit of lambda against 1/Lx; ``value`` is the slope, ``r_squared`` the quality."""
    if len(fits) < MIN_FIT_POINTS:
        raise FitError(f"need lambda at >= {MIN_FIT_POINTS} sizes, got {len(fits)}")
    sizes = sorted(fits)
    slope, stderr, r2 = _linear_fit([1.0 / lx for lx in sizes], [fits[lx].value for lx in sizes])
    return FitResult(
        kind="lambda_vs_inverse_lx",
        value=slope,
        stderr=stderr,
        window=f"lx in {sizes}",
        n_points=len(sizes),
        r_squared=r2,
    )


# ---------------------------------------------------------------------------
# Crossings and p_c
# ---------------------------------------------------------------------------


def first_crossing(xs: Sequence[float], y1: Sequence[float], y2: Sequence[float]) -> float | None:
    """First x in ascending order where y2 - y1 vanishes or changes sign (linear interpolation)."""
    diff = np.asarray(y2, dtype=float) - np.asarray(y1, dtype=float)
    for i in range(len(xs)):
        if diff[i] == 0:
            return float(xs[i])
        if i + 1 < len(xs) and diff[i] * diff[i + 1] < 0:
            return float(xs[i] - diff[i] * (xs[i + 1] - xs[i]) / (diff[i + 1] - diff[i]))
    return None


def curve_crossings(curves: Mapping[int, Mapping[float, float]]) -> dict[tuple[int, int], float | None]:
    """Crossing of each pair of consecutive sizes over their shared parameter grid."""
    sizes = sorted(curves)
    out: dict[tuple[int, int], float | None] = {}
    for small, large in zip(sizes, sizes[1:]):
        grid = sorted(set(curves[small]) & set(curves[large]))
        out[(small, large)] = first_crossing(
            grid, [curves[small][p] for p in grid], [curves[large][p] for p in grid]
        )
    return out


def summarize_crossings(
    crossings: Mapping[tuple[int, int], float | None], kind: str, window: str
) -> FitResult:
    """Mean of the found crossings with stderr = std / sqrt(n).

    Raises:
        FitError: If no size pair crosses inside the grid.
    """
    found = [x for x in crossings.values() if x is not None]
    missing = [pair for pair, x in crossings.items() if x is None]
    if not found:
        raise FitError(f"no crossing inside the parameter grid for size pairs {list(crossings)}")
    if missing:
        logger.warning("no crossing for size pairs %s; using %d crossing(s)", missing, len(found))
    values = np.array(found)
    stderr = float(values.std() / math.sqrt(len(values))) if len(values) > 1 else 0.0
    return FitResult(
        kind=kind, value=float(values.mean()), stderr=stderr, window=window, n_points=len(found)
    )


def estimate_pc(records: Iterable[RunRecord], min_sizes: int = 3) -> FitResult:
    """p_c from crossings of mean S_A / log Lx between consecutive sizes.

    Raises:
        FitError: With fewer than ``min_sizes`` sizes, fewer than two grid points, or no crossing.
    """
    means = _mean_by(records, lambda r: (r.lx, r.param))
    curves: dict[int, dict[float, float]] = defaultdict(dict)
    for (lx, param), mean in means.items():
        curves[lx][param] = mean / math.log(lx)
    if len(curves) < min_sizes:
        raise FitError(f"p_c estimate needs >= {min_sizes} sizes, got {len(curves)}")
    params = sorted({p for curve in curves.values() for p in curve})
    if len(params) < 2:
        raise FitError(f"p_c estimate needs >= 2 grid points, got {len(params)}")
    window = f"p in [{params[0]:g}, {params[-1]:g}], lx in {sorted(curves)}"
    return summarize_crossings(curve_crossings(curves), "pc", window)
