"""Request and response models shared by the service and the command-line client."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Kind(str, Enum):
    bound_derivation = "bound-derivation"
    hydrogen_bound_curve = "hydrogen-bound-curve"
    sim_sweep = "sim-sweep"
    ionization = "ionization"
    order_comparison = "order-comparison"
    oracle_battery = "oracle-battery"


KIND_HELP = {
    Kind.bound_derivation: "exact error bound of a product formula (JSON)",
    Kind.hydrogen_bound_curve: "closed-form first-order hydrogen bound against N",
    Kind.sim_sweep: "simulated Trotter error of a hydrogen level per mode count",
    Kind.ionization: "ionization probability after Trotter evolution against N",
    Kind.order_comparison: "simulated error against the total number of unitaries per order",
    Kind.oracle_battery: "random dense pairs checked against the derived bound",
}


class Level(BaseModel):
    n: int = Field(ge=1)
    l: int = Field(ge=0)

    @model_validator(mode="after")
    def _check(self):
        if self.l >= self.n:
            raise ValueError(f"l={self.l} must be below n={self.n}")
        return self

    @property
    def label(self) -> str:
        return f"n{self.n}_l{self.l}"


class Expectation(BaseModel):
    """Declared assertion lo <= metric <= hi."""

    metric: str
    lo: float = float("-inf")
    hi: float = float("inf")


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    kind: Kind
    level: Optional[Level] = None
    levels: list[Level] = Field(default_factory=list)
    order: Optional[int] = None
    orders: list[int] = Field(default_factory=list)
    taus: list[str] = Field(default_factory=list)
    formula: str = "ABA"
    t: float = Field(default=1.0, gt=0)
    N: list[int] = Field(default_factory=list)
    R: float = Field(default=30.0, gt=0)
    modes: list[int] = Field(default_factory=list)
    n_max: Optional[int] = None
    max_loss: float = Field(default=1e-6, gt=0)
    printed: bool = True
    count: int = Field(default=500, ge=1)
    dim: int = Field(default=4, ge=2, le=64)
    seed: int = 0
    window: Optional[tuple[float, float]] = None
    expect: list[Expectation] = Field(default_factory=list)
    out: Optional[str] = None

    @field_validator("N")
    @classmethod
    def _positive_steps(cls, v):
        if any(n < 1 for n in v):
            raise ValueError("every N must be >= 1")
        return v

    @field_validator("modes")
    @classmethod
    def _mode_counts(cls, v):
        if any(m < 8 for m in v):
            raise ValueError("every mode count must be >= 8")
        return v

    @field_validator("orders")
    @classmethod
    def _orders(cls, v):
        bad = [p for p in v if p not in (1, 2, 4)]
        if bad:
            raise ValueError(f"orders must be drawn from 1, 2, 4 (got {bad})")
        return v

    @field_validator("taus")
    @classmethod
    def _rationals(cls, v):
        for x in v:
            try:
                Fraction(x)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"switching time {x!r} is not a rational number") from None
        return v

    @field_validator("formula")
    @classmethod
    def _formula(cls, v):
        if v.upper() not in ("ABA", "BAB"):
            raise ValueError("formula must be ABA or BAB")
        return v.upper()

    @model_validator(mode="after")
    def _requirements(self):
        k = self.kind
        needs_n = k in (Kind.hydrogen_bound_curve, Kind.sim_sweep, Kind.ionization,
                        Kind.order_comparison, Kind.oracle_battery)
        if needs_n and not self.N:
            raise ValueError("N: list of Trotter step counts must not be empty")
        if k in (Kind.hydrogen_bound_curve, Kind.sim_sweep, Kind.order_comparison) and self.level is None:
            raise ValueError("level: n and l are required")
        if k in (Kind.sim_sweep, Kind.ionization, Kind.order_comparison) and not self.modes:
            raise ValueError("modes: at least one mode count is required")
        if k == Kind.ionization and self.level is None and not self.levels:
            raise ValueError("level: n and l (or levels) are required")
        if k == Kind.bound_derivation and self.order is None:
            raise ValueError("order: required for bound derivation")
        if k == Kind.sim_sweep and self.order is None:
            raise ValueError("order: required for a simulation sweep")
        if k in (Kind.order_comparison, Kind.oracle_battery) and not self.orders:
            raise ValueError("orders: at least one order is required")
        if self.order is not None and self.order not in (1, 2, 4) and not self.taus:
            if self.order < 2 or self.order % 2:
                raise ValueError("order: need 1 or an even order unless taus are given")
        return self


class Assertion(BaseModel):
    metric: str
    lo: float
    hi: float
    value: Optional[float]
    passed: bool


class Curve(BaseModel):
    name: str
    rows: list[tuple[float, float]]
    meta: dict = Field(default_factory=dict)


class RunResult(BaseModel):
    kind: Kind
    curves: list[Curve] = Field(default_factory=list)
    documents: dict[str, dict] = Field(default_factory=dict)
    metrics: dict[str, float] = Field(default_factory=dict)
    assertions: list[Assertion] = Field(default_factory=list)

    @property
    def green(self) -> bool:
        return all(a.passed for a in self.assertions)


class DeriveRequest(BaseModel):
    order: int = Field(ge=1)
    taus: list[str] = Field(default_factory=list)
    simplify: bool = True


class BoundTermOut(BaseModel):
    word: str
    coeff_exact: str
    coeff_float: float


class DeriveResponse(BaseModel):
    order: int
    terms: list[BoundTermOut]
    global_factor: str


class HydrogenBoundRequest(BaseModel):
    level: Level
    t: float = Field(default=1.0, gt=0)
    N: list[int]
    printed: bool = True


class HydrogenBoundResponse(BaseModel):
    level: Level
    terms: list[dict]
    values: list[tuple[int, float]]
