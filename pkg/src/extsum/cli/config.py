"""Run configuration: a flat JSON object, validated field by field."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from ..errors import InvalidParameterError
from ..problems import list_problems

__all__ = ["RunConfig", "ConfigError", "load_config", "SEED_ENV"]

SEED_ENV = "EXTSUM_SEED"
ALGORITHMS = ("efb", "projected_eps_subgrad", "passty")
STRATEGIES = ("min_norm", "boundary", "random")
FORMATS = ("csv", "json")


class ConfigError(InvalidParameterError):
    """Invalid configuration; `errors` maps field names to messages."""

    def __init__(self, errors):
        self.errors = dict(errors)
        super().__init__("; ".join(f"{k}: {v}" for k, v in self.errors.items()))


def _real(value):
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    if isinstance(value, bool):
        raise TypeError("boolean is not a number")
    return float(value)


@dataclass(frozen=True)
class RunConfig:
    problem_id: str = "paper-example"
    algorithm: str = "efb"
    schedule: dict = field(default_factory=lambda: {"c": 1.0, "p": 1.0, "q": 1.0 / 3.0})
    strategy: str = "min_norm"
    seed: Optional[int] = None
    max_iter: int = 1000
    record_every: int = 1
    output_path: Optional[str] = None
    output_format: Optional[str] = None
    unsafe_schedule: bool = False
    tol: Optional[float] = None

    @classmethod
    def from_mapping(cls, data):
        """Build and validate a config; every bad field is reported at once."""
        data = dict(data)
        errors = {}
        known = {f for f in cls.__dataclass_fields__}
        sched = dict(cls().schedule)
        if "schedule" in data:
            raw = data.pop("schedule")
            if not isinstance(raw, dict):
                errors["schedule"] = "must be an object with keys c, p, q"
                raw = {}
            data.update({k: v for k, v in raw.items()})
        for key in ("c", "p", "q"):
            if key in data:
                try:
                    sched[key] = _real(data.pop(key))
                except (TypeError, ValueError, ZeroDivisionError):
                    errors[f"schedule.{key}"] = "must be a real number"
        for key, value in sched.items():
            if f"schedule.{key}" not in errors and not value > 0:
                errors[f"schedule.{key}"] = f"must be positive, got {value}"
        unknown = set(data) - known
        for key in sorted(unknown):
            errors[key] = "unknown field"
            data.pop(key)

        values = {"schedule": sched}
        for key in ("problem_id", "algorithm", "strategy", "output_format"):
            if key in data and data[key] is not None:
                values[key] = str(data[key])
        if values.get("problem_id", cls.problem_id) not in list_problems():
            errors["problem_id"] = f"unknown problem; choose from {', '.join(list_problems())}"
        if values.get("algorithm", cls.algorithm) not in ALGORITHMS:
            errors["algorithm"] = f"must be one of {', '.join(ALGORITHMS)}"
        if values.get("strategy", cls.strategy) not in STRATEGIES:
            errors["strategy"] = f"must be one of {', '.join(STRATEGIES)}"
        if values.get("output_format") not in (None,) + FORMATS:
            errors["output_format"] = f"must be one of {', '.join(FORMATS)}"
        for key in ("max_iter", "record_every"):
            if key in data:
                v = data[key]
                if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v or v < 1:
                    errors[key] = "must be a positive integer"
                else:
                    values[key] = int(v)
        if data.get("seed") is not None:
            try:
                values["seed"] = int(data["seed"])
            except (TypeError, ValueError):
                errors["seed"] = "must be an integer"
        if data.get("tol") is not None:
            try:
                values["tol"] = _real(data["tol"])
                if not values["tol"] > 0:
                    errors["tol"] = "must be positive"
            except (TypeError, ValueError, ZeroDivisionError):
                errors["tol"] = "must be a real number"
        if data.get("output_path") is not None:
            values["output_path"] = str(data["output_path"])
        if "unsafe_schedule" in data:
            if not isinstance(data["unsafe_schedule"], bool):
                errors["unsafe_schedule"] = "must be true or false"
            else:
                values["unsafe_schedule"] = data["unsafe_schedule"]
        if values.get("strategy") == "random" and values.get("seed") is None:
            errors["seed"] = "random strategy needs a seed"
        if errors:
            raise ConfigError(errors)
        return cls(**values)

    @property
    def resolved_format(self):
        if self.output_format:
            return self.output_format
        if self.output_path and Path(self.output_path).suffix.lower() == ".json":
            return "json"
        return "csv"

    def echo(self):
        return asdict(self)


def load_config(path=None, overrides=None, env=None):
    """Merge a JSON config file, the seed environment variable and CLI overrides.

    Precedence, lowest first: file, ``EXTSUM_SEED``, explicit overrides.
    """
    env = os.environ if env is None else env
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ConfigError({"config": f"cannot read {path}: {exc}"}) from None
        if not isinstance(data, dict):
            raise ConfigError({"config": "top level must be a JSON object"})
    if env.get(SEED_ENV):
        data["seed"] = env[SEED_ENV]
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in ("c", "p", "q") and isinstance(data.get("schedule"), dict):
            data["schedule"] = {**data["schedule"], key: value}
        else:
            data[key] = value
    return RunConfig.from_mapping(data)
