"""
Job configuration parsing for gsframes.

A job is a single JSON document naming a finite group, optional frame data
and the check to run. Parsing happens in three passes: JSON decoding (errors
carry a line, column and byte position), shape validation with jsonschema
against the packaged job schema, and semantic validation (group axioms,
coefficient lengths, index ranges).
"""

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema
import numpy as np

from .group_core import FiniteGroup, NotAGroup, build_abelian, build_group_from_table, symmetric_group

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "v1.0"
_schema_path = Path(__file__).resolve().parent / "config" / f"job_schema_{SCHEMA_VERSION}.json"
_schema_cache: Optional[Dict[str, Any]] = None


class ParseError(Exception):
    """Raised when a job document is not valid UTF-8 JSON."""

    def __init__(self, message: str, line: int = 1, column: int = 1, position: int = 0):
        super().__init__(f"{message} (line {line}, column {column}, position {position})")
        self.line = line
        self.column = column
        self.position = position


class ConfigValidationError(Exception):
    """Raised when a job document is well-formed JSON but not a valid job."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


@dataclass
class JobConfig:
    """A validated job. Complex inputs are already converted to numpy arrays."""
    group: FiniteGroup
    command: str
    group_spec: Dict[str, Any] = field(default_factory=dict)
    p: float = 2.0
    ambient: Dict[str, Any] = field(default_factory=dict)
    lattice: Optional[List[Tuple[int, int]]] = None
    pair: Union[str, Dict[str, np.ndarray], None] = None
    frame: Optional[Dict[str, np.ndarray]] = None
    orbit: Optional[Dict[str, Any]] = None
    x: Optional[np.ndarray] = None
    tolerance: Dict[str, float] = field(default_factory=dict)
    seed: Optional[int] = None

    @property
    def pair_seed(self) -> Optional[int]:
        """Seed of a "seeded-random:<seed>" pair preset."""
        if isinstance(self.pair, str) and self.pair.startswith("seeded-random:"):
            return int(self.pair.split(":", 1)[1])
        return None


def load_schema() -> Dict[str, Any]:
    """Load the packaged job schema (cached)."""
    global _schema_cache
    if _schema_cache is None:
        if not _schema_path.exists():
            raise FileNotFoundError(f"Schema file not found: {_schema_path}")
        with open(_schema_path, "r", encoding="utf-8") as f:
            _schema_cache = json.load(f)
        logger.debug(f"Loaded job schema {SCHEMA_VERSION}")
    return _schema_cache


def _line_and_column(text: str, position: int) -> Tuple[int, int]:
    before = text[:position]
    line = before.count("\n") + 1
    return line, position - (before.rfind("\n") + 1) + 1


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name} is not allowed")


def _decode(text: Union[str, bytes]) -> Any:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            prefix = bytes(text[:e.start]).decode("utf-8", errors="replace")
            line, column = _line_and_column(prefix, len(prefix))
            raise ParseError(f"Invalid UTF-8: {e.reason}", line, column, e.start)
    if text.startswith("\ufeff"):
        text = text[1:]
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno, e.pos)
    except ValueError as e:
        raise ParseError(str(e))


def _field_path(path) -> str:
    parts = ""
    for item in path:
        parts += f"[{item}]" if isinstance(item, int) else (f".{item}" if parts else str(item))
    return parts or "<document>"


def _complex_array(values: List[List[float]]) -> np.ndarray:
    pairs = np.asarray(values, dtype=float)
    return pairs[..., 0] + 1j * pairs[..., 1]


def _build_group(spec: Dict[str, Any]) -> FiniteGroup:
    label = spec.get("label", "")
    try:
        if "abelian" in spec:
            return build_abelian([int(v) for v in spec["abelian"]], label=label)
        if "symmetric" in spec:
            group = symmetric_group(int(spec["symmetric"]))
            return replace(group, label=label) if label else group
        return build_group_from_table(spec["table"], label=label)
    except NotAGroup as e:
        witness = ", ".join(str(w) for w in e.witness)
        raise ConfigValidationError("group.table", f"{e} [{e.axiom} witness ({witness})]")


def _check_length(name: str, values: np.ndarray, expected: int) -> None:
    if values.shape[0] != expected:
        raise ConfigValidationError(name, f"expected {expected} coefficients, got {values.shape[0]}")


def _check_families(frame: Dict[str, np.ndarray], n: int) -> None:
    for name in ("functionals", "vectors"):
        rows = frame[name]
        if len(rows) != n:
            raise ConfigValidationError(f"frame.{name}", f"expected {n} members (one per group element), got {len(rows)}")
    dims = {len(row) for name in ("functionals", "vectors") for row in frame[name]}
    if len(dims) != 1:
        raise ConfigValidationError("frame", f"all members must share one ambient dimension, got {sorted(dims)}")
    m = dims.pop()
    if m > n:
        raise ConfigValidationError("frame", f"ambient dimension {m} exceeds the group order {n}")


def _check_index(name: str, value: int, n: int) -> None:
    if not 0 <= value < n:
        raise ConfigValidationError(name, f"index {value} is outside 0..{n - 1}")


def parse_config(text: Union[str, bytes]) -> JobConfig:
    """
    Parse and validate a job document.

    Args:
        text: UTF-8 bytes or a decoded string holding one JSON object.

    Returns:
        JobConfig with the group built and every index checked.

    Raises:
        ParseError: If the input is not UTF-8 JSON.
        ConfigValidationError: If the document does not describe a valid job.
    """
    data = _decode(text)
    try:
        jsonschema.validate(data, load_schema())
    except jsonschema.ValidationError as e:
        raise ConfigValidationError(_field_path(e.absolute_path), e.message)

    group = _build_group(data["group"])
    n = group.order
    cfg = JobConfig(group=group, command=data["command"], group_spec=dict(data["group"]))
    cfg.p = float(data.get("p", 2.0))
    cfg.ambient = dict(data.get("ambient", {}))
    cfg.seed = int(data["seed"]) if "seed" in data else None

    if "lattice" in data:
        gens = []
        for i, (k, c) in enumerate(data["lattice"]["generators"]):
            _check_index(f"lattice.generators[{i}]", k, n)
            _check_index(f"lattice.generators[{i}]", c, n)
            gens.append((int(k), int(c)))
        cfg.lattice = gens

    pair = data.get("pair")
    if isinstance(pair, dict):
        cfg.pair = {name: _complex_array(pair[name]) for name in ("f", "tau")}
        for name, values in cfg.pair.items():
            _check_length(f"pair.{name}", values, n)
    else:
        cfg.pair = pair

    if "frame" in data:
        _check_families(data["frame"], n)
        cfg.frame = {name: _complex_array(data["frame"][name]) for name in ("functionals", "vectors")}

    if "orbit" in data:
        operator = data["orbit"]["operator"]
        kind, value = next(iter(operator.items()))
        if kind in ("left-regular", "right-regular"):
            _check_index(f"orbit.operator.{kind}", value, n)
            value = int(value)
        elif kind == "scalar":
            value = complex(value[0], value[1])
        else:
            if len({len(row) for row in value}) != 1 or len(value) != len(value[0]):
                raise ConfigValidationError("orbit.operator.matrix", "matrix must be square")
            value = _complex_array(value)
        cfg.orbit = {"kind": kind, "value": value, "mode": data["orbit"].get("mode", "commutant")}

    if "x" in data:
        cfg.x = _complex_array(data["x"])
        _check_length("x", cfg.x, n)

    tolerance = data.get("tolerance")
    if isinstance(tolerance, dict):
        cfg.tolerance = {k: float(v) for k, v in tolerance.items()}
    elif tolerance is not None:
        cfg.tolerance = {"residual": float(tolerance), "exact": float(tolerance)}

    logger.debug(f"Parsed job '{cfg.command}' on {group.describe()}")
    return cfg


def load_job(path: Union[str, Path]) -> JobConfig:
    """Read and parse a job file."""
    with open(path, "rb") as f:
        return parse_config(f.read())
