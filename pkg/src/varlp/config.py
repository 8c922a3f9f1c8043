"""Experiment configuration: a strict JSON schema and builders for library objects."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .exponents import ExponentFunction
from .weights import Weight

__all__ = [
    "ExperimentConfig",
    "ExponentSpec",
    "WeightSpec",
    "DomainSpec",
    "OperatorSpec",
    "FunctionSpec",
    "ScanSpec",
    "FamilySpec",
    "load_config",
    "bundled_configs",
    "dumps",
]

INF = float("inf")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")


class ExponentSpec(_Strict):
    form: Literal["constant", "affine", "piecewise", "tabulated"]
    params: dict
    tail: Optional[tuple[float, float]] = None
    domain: Optional[tuple[float, float]] = None

    def build(self) -> ExponentFunction:
        p, dom = self.params, self.domain
        if self.form == "constant":
            out = ExponentFunction.constant(p["value"], dom or (-INF, INF))
            return out.with_tail(*self.tail) if self.tail else out
        if self.form == "affine":
            return ExponentFunction.affine(p["c0"], p["c1"], dom or (0.0, INF), self.tail)
        if self.form == "piecewise":
            return ExponentFunction.piecewise(p["breaks"], p["values"], self.tail, dom)
        return ExponentFunction.tabulated(p["xs"], p["ps"], self.tail, dom)


class WeightSpec(_Strict):
    form: Literal["constant", "power", "piecewise_power"]
    params: dict = Field(default_factory=dict)
    monotone: Optional[Literal["increasing", "decreasing", "none"]] = None
    domain: tuple[float, float] = (0.0, INF)

    def build(self) -> Weight:
        p = self.params
        if self.form == "constant":
            w = Weight.constant(p.get("c", 1.0), self.domain)
            return w if self.monotone in (None, "increasing") else Weight.power(0.0, w.coefs[0], self.domain, self.monotone)
        if self.form == "power":
            return Weight.power(p["beta"], p.get("c", 1.0), self.domain, self.monotone)
        return Weight.piecewise_power(p["breaks"], p["coefs"], p["exps"], self.monotone or "none")


class DomainSpec(_Strict):
    kind: Literal["bounded", "halfline", "line"] = "bounded"
    interval: tuple[float, float] = (0.0, 1.0)
    a: float = 1.0


class OperatorSpec(_Strict):
    id: Literal["identity", "maximal_bounded", "maximal_dyadic", "maximal_window", "maximal_M",
                "hilbert", "hardy", "hardy_dual"] = "maximal_bounded"
    alpha: float = 0.0


class FunctionSpec(_Strict):
    kind: Literal["constant", "indicator", "power", "random-steps"]
    params: dict = Field(default_factory=dict)


class ScanSpec(_Strict):
    intervals: Optional[Union[int, list[tuple[float, float]]]] = None
    t_points: int = 61
    t_range: Optional[tuple[float, float]] = None
    x_points: Optional[Union[int, list[float]]] = None
    r_points: Optional[Union[int, list[float]]] = None
    xr_points: Optional[int] = None


class FamilySpec(_Strict):
    kind: Literal["random-steps", "power", "indicators", "extremal", "normalized"]
    seed: int = 0
    count: int = 8
    params: dict = Field(default_factory=dict)


class OutputSpec(_Strict):
    dir: Optional[str] = None
    report: Optional[str] = None
    plot: Optional[str] = None


class ExperimentConfig(_Strict):
    name: Optional[str] = None
    exponent: ExponentSpec
    q_exponent: Optional[ExponentSpec] = None
    weights: dict[str, WeightSpec] = Field(default_factory=dict)
    domain: DomainSpec = Field(default_factory=DomainSpec)
    operator: OperatorSpec = Field(default_factory=OperatorSpec)
    function: Optional[FunctionSpec] = None
    scan: ScanSpec = Field(default_factory=ScanSpec)
    families: list[FamilySpec] = Field(default_factory=list)
    resolutions: list[int] = Field(default_factory=lambda: [128, 256])
    seed: int = 0
    theorem: Optional[Literal["T1.1", "C1.1", "T1.2", "T1.3", "TA", "T2.1", "T2.2"]] = None
    criterion: Optional[str] = None
    output: OutputSpec = Field(default_factory=OutputSpec)

    # builders ----------------------------------------------------------

    def p(self) -> ExponentFunction:
        return self.exponent.build()

    def q(self) -> ExponentFunction:
        return self.q_exponent.build() if self.q_exponent else self.p()

    def weight(self, key, default=None) -> Weight:
        if key in self.weights:
            return self.weights[key].build()
        if default is not None:
            return default
        return Weight.constant(1.0, (-INF, INF) if self.domain.kind == "line" else (0.0, INF))

    def t_scan(self):
        lo, hi = self.scan.t_range or (1e-3 * self.domain.a, 1e3 * self.domain.a)
        return np.geomspace(lo, hi, self.scan.t_points)

    def with_overrides(self, resolution=None, seed=None) -> "ExperimentConfig":
        data = self.model_dump()
        if resolution is not None:
            data["resolutions"] = [int(resolution) // 2, int(resolution)]
        if seed is not None:
            data["seed"] = int(seed)
            for fam in data["families"]:
                fam["seed"] = int(seed)
        return ExperimentConfig.model_validate(data)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


BUNDLED = "bundled:"


def bundled_configs():
    """Names of the configurations shipped with the package."""
    root = resources.files("varlp") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_config(path) -> ExperimentConfig:
    """Read a config file, ``bundled:NAME`` for a shipped one, or a saved report
    (whose embedded config is used)."""
    path = str(path)
    if path.startswith(BUNDLED):
        text = (resources.files("varlp") / "configs" / f"{path[len(BUNDLED):]}.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from None
    if isinstance(data, dict) and "command" in data and "config" in data:
        data = data["config"]
    return ExperimentConfig.model_validate(data)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, ``Infinity`` for inf."""
    return json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=True) + "\n"
