"""Experiment configuration: one JSON document, validated into plain dataclasses.

Every validation failure raises :class:`ConfigError` carrying the dotted path
of the offending field (and the line/column for JSON syntax errors).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .cocycle import DrivingSystem
from .lie_core import DecompositionError, GroupElement, MAX_DIM, Tolerances, exp_diag

__all__ = ["ConfigError", "ToleranceConfig", "ExperimentConfig", "load_config", "parse_config", "build_matrix"]

OUTPUTS = ("csv", "json", "svg")


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class ToleranceConfig:
    wall: float = 1e-6
    rank: float = 1e-8
    epsilon: float = 0.0
    t_min: int = 1
    symmetry: float = 1e-4
    det: float = 1e-9


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    group: str
    n: int
    root_system: str
    driving: DrivingSystem | None
    matrix: np.ndarray | None
    horizon: int
    samples: int
    chain_samples: int
    seed: int
    tolerances: ToleranceConfig
    outputs: tuple[str, ...] = field(default=OUTPUTS)


def _expect(value, kind, path: str, what: str):
    if kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif kind is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool) and np.isfinite(value)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise ConfigError(path, f"expected {what}, got {json.dumps(value)[:60]}")
    return value


def _unknown(obj: dict, allowed: set, path: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"{path}.{extra[0]}" if path else extra[0], "unknown field")


def build_matrix(spec: Any, n: int, path: str) -> np.ndarray:
    """A matrix given as row-major rows, ``{"exp_diag": [...]}`` or ``{"rotation": {...}}``."""
    if isinstance(spec, dict):
        if set(spec) == {"exp_diag"}:
            h = _vector(spec["exp_diag"], n, f"{path}.exp_diag")
            return exp_diag(h)
        if set(spec) == {"rotation"}:
            rot = _expect(spec["rotation"], dict, f"{path}.rotation", "an object")
            _unknown(rot, {"angle", "plane"}, f"{path}.rotation")
            angle = float(_expect(rot.get("angle"), float, f"{path}.rotation.angle", "a number"))
            plane = rot.get("plane", [1, 2])
            if (not isinstance(plane, list) or len(plane) != 2
                    or not all(isinstance(i, int) and 1 <= i <= n for i in plane) or plane[0] == plane[1]):
                raise ConfigError(f"{path}.rotation.plane", f"expected two distinct indices in 1..{n}")
            i, j = plane[0] - 1, plane[1] - 1
            m = np.eye(n)
            c, s = np.cos(angle), np.sin(angle)
            m[i, i], m[i, j], m[j, i], m[j, j] = c, -s, s, c
            return m
        raise ConfigError(path, "matrix object must have exactly one of 'exp_diag' or 'rotation'")
    _expect(spec, list, path, f"a list of {n} rows")
    if len(spec) != n:
        raise ConfigError(path, f"expected {n} rows, got {len(spec)}")
    return np.array([_vector(row, n, f"{path}[{i}]") for i, row in enumerate(spec)])


def _vector(spec: Any, n: int, path: str) -> np.ndarray:
    _expect(spec, list, path, f"a list of {n} numbers")
    if len(spec) != n:
        raise ConfigError(path, f"expected {n} numbers, got {len(spec)}")
    return np.array([float(_expect(x, float, f"{path}[{i}]", "a finite number")) for i, x in enumerate(spec)])


def _group_element(m: np.ndarray, group: str, normalize: bool, tol: Tolerances, path: str) -> GroupElement:
    try:
        if group == "gl":
            return GroupElement.gl(m)
        if normalize:
            return GroupElement.normalized(m)
        return GroupElement.sl(m, tol)
    except DecompositionError as exc:
        raise ConfigError(path, str(exc)) from exc


def _index_list(spec: Any, path: str, bound: int | None = None) -> list[int]:
    _expect(spec, list, path, "a list of integers")
    out = []
    for i, x in enumerate(spec):
        _expect(x, int, f"{path}[{i}]", "an integer")
        if x < 0 or (bound is not None and x >= bound):
            raise ConfigError(f"{path}[{i}]", f"index {x} out of range")
        out.append(x)
    if not out:
        raise ConfigError(path, "must not be empty")
    return out


def _driving(spec: Any, n: int, group: str, tol: Tolerances, path: str = "driving") -> DrivingSystem:
    _expect(spec, dict, path, "an object")
    _unknown(spec, {"kind", "matrices", "word", "transitions", "labels", "base_separation", "normalize"}, path)
    kind = spec.get("kind", "point")
    if kind not in ("point", "cyclic", "automaton"):
        raise ConfigError(f"{path}.kind", "expected 'point', 'cyclic' or 'automaton'")
    normalize = bool(_expect(spec.get("normalize", False), bool, f"{path}.normalize", "true or false"))
    mats_spec = _expect(spec.get("matrices"), list, f"{path}.matrices", "a list of matrices")
    if not mats_spec:
        raise ConfigError(f"{path}.matrices", "must not be empty")
    mats = [_group_element(build_matrix(m, n, f"{path}.matrices[{i}]"), group, normalize, tol,
                           f"{path}.matrices[{i}]") for i, m in enumerate(mats_spec)]
    sep = float(_expect(spec.get("base_separation", 1.0), float, f"{path}.base_separation", "a number"))
    if sep <= 0:
        raise ConfigError(f"{path}.base_separation", "must be positive")
    try:
        if kind == "point":
            if len(mats) != 1:
                raise ConfigError(f"{path}.matrices", "a point base takes exactly one matrix")
            return DrivingSystem.point(mats[0], sep)
        if kind == "cyclic":
            word = _index_list(spec["word"], f"{path}.word", len(mats)) if "word" in spec else None
            return DrivingSystem.cyclic(mats, word, sep)
        if "transitions" not in spec:
            raise ConfigError(f"{path}.transitions", "required for an automaton")
        trans = _index_list(spec["transitions"], f"{path}.transitions")
        labels = _index_list(spec["labels"], f"{path}.labels", len(mats)) if "labels" in spec else None
        return DrivingSystem.automaton(mats, trans, labels, sep)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(path, str(exc)) from exc


def _tolerances(spec: Any, path: str = "tolerances") -> ToleranceConfig:
    _expect(spec, dict, path, "an object")
    _unknown(spec, set(ToleranceConfig.__dataclass_fields__), path)
    values = {}
    for name, default in ToleranceConfig().__dict__.items():
        if name not in spec:
            continue
        kind = int if isinstance(default, int) else float
        v = _expect(spec[name], kind, f"{path}.{name}", "an integer" if kind is int else "a finite number")
        if v < 0 or (name == "t_min" and v < 1):
            raise ConfigError(f"{path}.{name}", "out of range")
        values[name] = v
    return ToleranceConfig(**values)


def parse_config(doc: Any) -> ExperimentConfig:
    """Validate a decoded JSON document."""
    _expect(doc, dict, "", "a JSON object at top level")
    allowed = {"group", "n", "root_system", "driving", "matrix", "horizon", "samples", "chain_samples",
               "seed", "tolerances", "outputs"}
    _unknown(doc, allowed, "")
    group = doc.get("group", "sl")
    if group not in ("sl", "gl"):
        raise ConfigError("group", "expected 'sl' or 'gl'")
    if "n" not in doc:
        raise ConfigError("n", "required")
    n = _expect(doc["n"], int, "n", "an integer")
    if not 2 <= n <= MAX_DIM:
        raise ConfigError("n", f"must lie in [2, {MAX_DIM}]")
    rs = doc.get("root_system", "A")
    if rs not in ("A", "C"):
        raise ConfigError("root_system", "expected 'A' or 'C'")
    tols = _tolerances(doc.get("tolerances", {}))
    tol = Tolerances(det=tols.det)
    driving = _driving(doc["driving"], n, group, tol) if "driving" in doc else None
    matrix = build_matrix(doc["matrix"], n, "matrix") if "matrix" in doc else None
    horizon = _expect(doc.get("horizon", 500), int, "horizon", "an integer")
    if horizon < 1:
        raise ConfigError("horizon", "must be >= 1")
    samples = _expect(doc.get("samples", 8), int, "samples", "an integer")
    if samples < 1:
        raise ConfigError("samples", "must be >= 1")
    chain_samples = _expect(doc.get("chain_samples", 0), int, "chain_samples", "an integer")
    if chain_samples < 0:
        raise ConfigError("chain_samples", "must be >= 0")
    seed = _expect(doc.get("seed", 0), int, "seed", "an integer")
    if seed < 0:
        raise ConfigError("seed", "must be >= 0")
    outputs = doc.get("outputs", list(OUTPUTS))
    _expect(outputs, list, "outputs", "a list")
    for i, o in enumerate(outputs):
        if o not in OUTPUTS:
            raise ConfigError(f"outputs[{i}]", f"expected one of {list(OUTPUTS)}")
    return ExperimentConfig(group, n, rs, driving, matrix, horizon, samples, chain_samples, seed, tols,
                            tuple(outputs))


def load_config(path: str | Path) -> ExperimentConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc
    return parse_config(doc)
