"""Run configuration: strict JSON schema, overrides and canonical form."""
from __future__ import annotations

import hashlib
import json
from typing import Literal

import numpy as np
import pydantic
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import constants

from .cavity import CavityProfile, ModeSpec
from .errors import ParseError, ValidationError, VibCavityError
from .units import Units


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class ProfileSpec(_Strict):
    kind: Literal["constant", "sinusoidal", "step", "piecewise_linear"]
    L0: float | None = None
    epsilon: float = 0.0
    Omega: float = 0.0
    phase: float = 0.0
    step_time: float | None = None
    step_L2: float | None = None
    knots: list[tuple[float, float]] | None = None

    @model_validator(mode="after")
    def _buildable(self):
        self.build()
        return self

    def build(self) -> CavityProfile:
        try:
            if self.kind == "piecewise_linear":
                if not self.knots:
                    raise ValueError("piecewise_linear profile needs knots")
                return CavityProfile.piecewise(self.knots)
            if self.L0 is None:
                raise ValueError(f"{self.kind} profile needs L0")
            if self.kind == "constant":
                return CavityProfile.constant(self.L0)
            if self.kind == "sinusoidal":
                return CavityProfile.sinusoidal(self.L0, self.epsilon, self.Omega, self.phase)
            if self.step_time is None or self.step_L2 is None:
                raise ValueError("step profile needs step_time and step_L2")
            return CavityProfile.step(self.L0, self.step_time, self.step_L2)
        except VibCavityError as exc:
            raise ValueError(str(exc)) from exc


class DriveSpec(_Strict):
    epsilon_rel: float | None = Field(default=None, ge=0)
    Omega: float | None = Field(default=None, gt=0)
    gamma: float = Field(default=0.0, ge=0)
    zeta: float = Field(default=0.0, ge=0)


class GridSpec(_Strict):
    values: list[float] | None = None
    start: float | None = None
    stop: float | None = None
    count: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _one_form(self):
        ranged = (self.start, self.stop, self.count)
        if self.values is None and None in ranged:
            raise ValueError("grid needs either values or start/stop/count")
        if self.values is not None and any(v is not None for v in ranged):
            raise ValueError("grid takes values or start/stop/count, not both")
        return self

    def array(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        return np.linspace(self.start, self.stop, self.count)


class UnruhSpec(_Strict):
    V_c: float = Field(default=1.0, gt=0)
    a: float | None = None
    omega_grid: GridSpec | None = None


class NumericsSpec(_Strict):
    tol: float = Field(default=1e-10, gt=0)
    t_end: float | None = Field(default=None, gt=0)
    sample_count: int = Field(default=101, ge=2)
    times: list[float] | None = None

    @model_validator(mode="after")
    def _times(self):
        if self.times is not None:
            ts = np.asarray(self.times)
            if ts.size == 0 or np.any(np.diff(ts) <= 0) or ts[0] < 0:
                raise ValueError("times must be non-negative and strictly increasing")
            if self.t_end is not None and ts[-1] > self.t_end:
                raise ValueError("times must not exceed t_end")
        return self

    def grid(self) -> np.ndarray:
        if self.times is not None:
            return np.asarray(self.times, dtype=float)
        if self.t_end is None:
            raise ValidationError("numerics.t_end (or numerics.times) is required")
        return np.linspace(0.0, self.t_end, self.sample_count)

    def end(self) -> float:
        return float(self.grid()[-1])


class ScanSpec(_Strict):
    Omega_grid: GridSpec | None = None
    workers: int = Field(default=1, ge=1)


class CasimirSpec(_Strict):
    models: list[Literal["ode", "ideal", "damped", "saturated"]] = [
        "ode", "ideal", "damped", "saturated"]


class CompareSpec(_Strict):
    source: Literal["ideal", "ode"] = "ideal"


class ConstantsSpec(_Strict):
    c: float = Field(default=constants.c, gt=0)
    hbar: float = Field(default=constants.hbar, gt=0)
    k_B: float = Field(default=constants.k, gt=0)


class RunConfig(_Strict):
    profile: ProfileSpec
    mode: int = Field(default=1, ge=1)
    drive: DriveSpec = DriveSpec()
    unruh: UnruhSpec = UnruhSpec()
    numerics: NumericsSpec = NumericsSpec()
    units: Literal["internal", "si"] = "internal"
    constants: ConstantsSpec | None = None
    scan: ScanSpec = ScanSpec()
    casimir: CasimirSpec = CasimirSpec()
    compare: CompareSpec = CompareSpec()

    @model_validator(mode="after")
    def _constants_only_for_si(self):
        if self.constants is not None and self.units != "si":
            raise ValueError("constants block is only accepted with units='si'")
        return self

    def unit_system(self) -> Units:
        if self.units == "internal":
            return Units()
        k = self.constants or ConstantsSpec()
        return Units(k.c, k.hbar, k.k_B, "si")

    def cavity(self) -> CavityProfile:
        return self.profile.build()

    def mode_spec(self) -> ModeSpec:
        return ModeSpec(self.mode, self.cavity().L0, self.unit_system().c)

    def canonical(self) -> str:
        return canonical_json(self.model_dump(mode="json"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _describe(err: dict) -> str:
    loc = ".".join(str(p) for p in err["loc"]) or "<root>"
    return f"{loc}: {err['msg']}"


def validate_config(raw: dict) -> RunConfig:
    """Validate an already-decoded config mapping."""
    try:
        return RunConfig.model_validate(raw)
    except pydantic.ValidationError as exc:
        errors = exc.errors()
        unknown = [e for e in errors if e["type"] == "extra_forbidden"]
        if unknown:
            keys = ", ".join(".".join(str(p) for p in e["loc"]) for e in unknown)
            raise ParseError(f"unknown key(s): {keys}") from None
        raise ValidationError("; ".join(_describe(e) for e in errors)) from None


def parse_config(text: bytes | str) -> RunConfig:
    """Parse and validate a JSON run configuration."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"config is not UTF-8: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ParseError("config must be a JSON object")
    return validate_config(raw)


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    """Apply ``dotted.path=value`` patches; values are JSON when they parse as JSON."""
    raw = json.loads(json.dumps(raw))
    for item in overrides:
        path, sep, value = item.partition("=")
        if not sep or not path:
            raise ParseError(f"override {item!r} is not of the form key=value")
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError:
            parsed = value
        keys = path.split(".")
        node = raw
        for key in keys[:-1]:
            child = node.setdefault(key, {})
            if not isinstance(child, dict):
                raise ParseError(f"override {path!r}: {key!r} is not a mapping")
            node = child
        node[keys[-1]] = parsed
    return raw
