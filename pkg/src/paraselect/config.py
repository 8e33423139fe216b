"""JSON run configuration.

::

    {"constraints": {"k1": 0, "k2": "10", "k3": "0.525"},
     "weights": {"none": "0", "closed_only": "1", "single_open": "3",
                 "multi_open": "6", "discourse_lambda": "1"},
     "allow_sentence_deletion": false}

Rationals may be given as decimal or ``p/q`` strings; they are parsed
exactly.  Every section is optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Union

from .cost_model import CostWeights
from .ilp_model import ModelConfig

__all__ = ["RunSettings", "ConfigError", "load_config", "settings_from_mapping"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunSettings:
    constraints: ModelConfig = field(default_factory=ModelConfig)
    weights: CostWeights = field(default_factory=CostWeights)
    allow_sentence_deletion: bool = False


def settings_from_mapping(data: Optional[Mapping]) -> RunSettings:
    data = dict(data or {})
    unknown = set(data) - {"constraints", "weights", "allow_sentence_deletion"}
    if unknown:
        raise ConfigError(f"unknown config section(s) {sorted(unknown)}")
    try:
        constraints = ModelConfig.from_mapping(data.get("constraints"))
        weights = CostWeights.from_mapping(data.get("weights"))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    deletion = data.get("allow_sentence_deletion", False)
    if not isinstance(deletion, bool):
        raise ConfigError("allow_sentence_deletion must be true or false")
    return RunSettings(constraints, weights, deletion)


def load_config(path: Union[str, Path, None]) -> RunSettings:
    if path is None:
        return RunSettings()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return settings_from_mapping(data)
