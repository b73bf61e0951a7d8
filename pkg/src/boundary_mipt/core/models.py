"""Pydantic models for experiment configuration and result dataclasses."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from boundary_mipt.core.gfq import is_prime

Probability = Annotated[float, Field(ge=0.0, le=1.0)]

GRAPH_MIN_WINDOW = 3
GRAPH_DEFAULT_WINDOW = 4


def clifford_window(t: int) -> int:
    """Rows held by the streaming Clifford driver: boundary row plus 2t+1 live rows."""
    return 2 * t + 2


# ---------------------------------------------------------------------------
# Pydantic config models (input validation)
# ---------------------------------------------------------------------------


class LatticeSpec(BaseModel):
    """Lx x Ly rectangular lattice; y = 0 is the unmeasured top boundary."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    lx: Annotated[int, Field(ge=4)]
    ly: Annotated[int, Field(ge=2)]
    bc_x: Literal["periodic", "open"] = "periodic"

    @field_validator("lx")
    @classmethod
    def _even_lx(cls, value: int) -> int:
        if value % 2:
            raise ValueError(f"lx must be even, got {value}")
        return value

    @property
    def n_sites(self) -> int:
        return self.lx * self.ly

    def site(self, x: int, y: int) -> int:
        """Column index of site (x, y)."""
        return x + self.lx * y


class CliffordCircuitSpec(BaseModel):
    """t time steps of four diluted gate layers."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    t: Annotated[int, Field(ge=1)]
    p_gate: Probability


class MeasurementPolicy(BaseModel):
    """Bulk measurement basis rule: graph model draws X w.p. p_x, the Clifford model always Z."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    p_x: Probability = 0.0
    basis: Literal["graph", "clifford"] = "graph"

    @model_validator(mode="after")
    def _clifford_is_z_only(self) -> "MeasurementPolicy":
        if self.basis == "clifford" and self.p_x != 0.0:
            raise ValueError("the clifford basis rule measures Z only; p_x must be 0")
        return self


class Geometry(BaseModel):
    """Boundary region: one or two half-open intervals (start, length) on the x ring."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["strip-top", "cylinder-two-edge"] = "strip-top"
    intervals: tuple[tuple[int, int], ...] = Field(default=((0, 1),), min_length=1, max_length=2)

    def sites(self, lx: int) -> list[int]:
        """Sorted x positions covered by all intervals.

        Raises:
            ValueError: If an interval leaves [0, lx) or two intervals overlap.
        """
        covered: list[int] = []
        for start, length in self.intervals:
            if not 0 <= start < lx:
                raise ValueError(f"interval start {start} outside [0, {lx})")
            if not 1 <= length <= lx:
                raise ValueError(f"interval length {length} outside [1, {lx}]")
            covered.extend((start + k) % lx for k in range(length))
        if len(set(covered)) != len(covered):
            raise ValueError(f"intervals {self.intervals} overlap")
        return sorted(covered)

    def describe(self) -> str:
        return "+".join(f"{start}:{length}" for start, length in self.intervals)


class ExperimentConfig(BaseModel):
    """Flat run configuration shared by every experiment command."""

    model_config = ConfigDict(extra="forbid")

    model: Literal["graph", "clifford", "statmech-rbim"]
    q: Annotated[int, Field(ge=2)] = 2
    lx: list[Annotated[int, Field(ge=2)]] = Field(min_length=1)
    ly: list[Annotated[int, Field(ge=2)]] | None = None
    bc_x: Literal["periodic", "open"] = "periodic"
    params: list[Probability] = Field(min_length=1)
    region_fraction: Annotated[float, Field(gt=0.0, lt=1.0)] = 0.25
    region_lengths: list[Annotated[int, Field(ge=1)]] | None = None
    t: Annotated[int, Field(ge=1)] = 2
    window: Annotated[int, Field(ge=1)] | None = None
    samples: Annotated[int, Field(ge=1)] = 100
    interval_draws: Annotated[int, Field(ge=1)] = 16
    seed: Annotated[int, Field(ge=0)] = 0
    workers: Annotated[int, Field(ge=1)] = 1
    couplings: list[Annotated[float, Field(ge=0.0)]] | None = None
    sweeps: Annotated[int, Field(ge=1)] = 2000
    burn_in: Annotated[int, Field(ge=0)] = 500
    output: Path = Path("results")

    @field_validator("q")
    @classmethod
    def _prime_q(cls, value: int) -> int:
        if not is_prime(value):
            raise ValueError(f"q must be prime, got {value}")
        return value

    @model_validator(mode="after")
    def _check_model_constraints(self) -> "ExperimentConfig":
        if self.model == "statmech-rbim":
            for size in self.lx:
                if size < 8 or size % 2:
                    raise ValueError(f"rbim lattice sizes must be even and >= 8, got {size}")
            return self
        for size in self.lx:
            if size < 4 or size % 2:
                raise ValueError(f"lattice sizes must be even and >= 4, got {size}")
        if self.model == "clifford" and self.q != 2:
            raise ValueError(f"the clifford model samples two-qubit gates only; q must be 2, got {self.q}")
        if self.window is not None and self.window < self.min_window:
            raise ValueError(
                f"window {self.window} is smaller than the light cone ({self.min_window} rows)"
            )
        return self

    @property
    def min_window(self) -> int:
        return clifford_window(self.t) if self.model == "clifford" else GRAPH_MIN_WINDOW

    @property
    def effective_window(self) -> int:
        if self.window is not None:
            return self.window
        return clifford_window(self.t) if self.model == "clifford" else GRAPH_DEFAULT_WINDOW

    def lattice(self, lx: int, ly: int | None = None) -> LatticeSpec:
        """Lattice for one size; Ly defaults to Lx (steady state)."""
        return LatticeSpec(lx=lx, ly=lx if ly is None else ly, bc_x=self.bc_x)

    def policy(self, param: float) -> MeasurementPolicy:
        if self.model == "clifford":
            return MeasurementPolicy(p_x=0.0, basis="clifford")
        return MeasurementPolicy(p_x=param, basis="graph")

    def circuit(self, param: float) -> CliffordCircuitSpec:
        return CliffordCircuitSpec(t=self.t, p_gate=param)


# ---------------------------------------------------------------------------
# Result dataclasses (frozen, output-only)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunRecord:
    """One sampled observation; ``value`` is an entropy in dits or an MC observable."""

    model: str
    q: int
    lx: int
    ly: int
    param: float
    region: str
    sample: int
    seed: int
    value: float

    @property
    def sort_key(self) -> tuple[str, int, int, int, float, str, int]:
        return (self.model, self.q, self.lx, self.ly, self.param, self.region, self.sample)


@dataclass(frozen=True)
class FitResult:
    """Estimator output: ``kind`` is one of alpha, delta, lambda, pc."""

    kind: str
    value: float
    stderr: float
    window: str
    n_points: int = 0
    r_squared: float | None = None

    def __post_init__(self) -> None:
        if not self.stderr >= 0:
            raise ValueError(f"stderr must be >= 0, got {self.stderr}")
