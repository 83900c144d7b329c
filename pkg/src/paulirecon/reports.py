"""Experiment reports and their JSON schema."""
from __future__ import annotations

import dataclasses
import json
from importlib import resources
from typing import Any

import numpy as np

from . import __version__

SCHEMA_NAME = "report.schema.json"


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays, dataclasses and complex numbers."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


@dataclasses.dataclass
class ExperimentReport:
    experiment: str
    params: dict
    outputs: dict
    passed: bool
    seed: int = 0
    runtime_ms: int = 0
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": to_jsonable(self.params),
            "outputs": to_jsonable(self.outputs),
            "pass": bool(self.passed),
            "runtime_ms": int(self.runtime_ms),
            "seed": int(self.seed),
            "version": self.version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def load_schema() -> dict:
    return json.loads(resources.files("paulirecon").joinpath(SCHEMA_NAME).read_text())


def validate(report: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``report`` does not match the schema."""
    import jsonschema

    jsonschema.validate(report, load_schema())
