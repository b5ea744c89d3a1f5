"""Pipeline configuration: one JSON file, overridden by command-line flags.

Precedence, lowest first: built-in defaults, the config file, the
``MERIT_SCORER_URL`` environment variable (scorer endpoint only), flags.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Mapping

from .corpus import ValidityConfig
from .div import SplitSpec
from .epds import ComposeWeights, EpdsConfig
from .errors import ConfigError
from .features import BaseScoreConfig
from .lm_scoring import SCORER_URL_ENV, ScorerConfig
from .sar import SarConfig


@dataclass(frozen=True)
class MetricOptions:
    smoothing: str = "add-one"
    granularity: str = "word"
    level: str = "corpus"
    chrf_beta: float = 2.0
    rouge_beta: float = 1.0


@dataclass(frozen=True)
class PipelineConfig:
    validity: ValidityConfig = field(default_factory=ValidityConfig)
    base: BaseScoreConfig = field(default_factory=BaseScoreConfig)
    scorer: ScorerConfig = field(default_factory=ScorerConfig)
    weights: ComposeWeights = field(default_factory=ComposeWeights)
    split: SplitSpec = field(default_factory=lambda: SplitSpec(80, 20, 20))
    sar: SarConfig = field(default_factory=SarConfig)
    metrics: MetricOptions = field(default_factory=MetricOptions)
    # K for every language, or a per-language mapping
    k: int | dict[str, int] = 120
    strict: bool = False
    seed: int = 0
    paths: dict[str, str] = field(default_factory=dict)

    @property
    def epds(self) -> EpdsConfig:
        return EpdsConfig(self.validity, self.base, self.scorer, self.weights)

    def k_for(self, lang: str) -> int:
        if isinstance(self.k, Mapping):
            if lang not in self.k:
                raise ConfigError(f"no K configured for language {lang!r}")
            return int(self.k[lang])
        return int(self.k)

    def to_dict(self) -> dict:
        d = asdict(self)
        # the endpoint is deployment detail, not part of the experiment
        d["scorer"].pop("endpoint", None)
        return d

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


_SECTIONS = {
    "validity": ValidityConfig,
    "base": BaseScoreConfig,
    "scorer": ScorerConfig,
    "weights": ComposeWeights,
    "split": SplitSpec,
    "sar": SarConfig,
    "metrics": MetricOptions,
}


def _build(cls, values: Mapping[str, Any], base=None):
    names = {f.name for f in fields(cls)}
    unknown = set(values) - names
    if unknown:
        raise ConfigError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    values = dict(values)
    if "weights" in values and isinstance(values["weights"], list):
        values["weights"] = tuple(values["weights"])
    return replace(base, **values) if base is not None else cls(**values)


def config_from_dict(data: Mapping[str, Any], base: PipelineConfig | None = None) -> PipelineConfig:
    base = base or PipelineConfig()
    top = {f.name for f in fields(PipelineConfig)}
    unknown = set(data) - top
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    updates: dict[str, Any] = {}
    for key, value in data.items():
        if key in _SECTIONS:
            if not isinstance(value, Mapping):
                raise ConfigError(f"section {key!r} must be an object")
            updates[key] = _build(_SECTIONS[key], value, getattr(base, key))
        else:
            updates[key] = value
    try:
        return replace(base, **updates)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path=None, overrides: Mapping[str, Any] | None = None) -> PipelineConfig:
    cfg = PipelineConfig()
    if path:
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        cfg = config_from_dict(data, cfg)
    env = os.environ.get(SCORER_URL_ENV)
    if env:
        cfg = replace(cfg, scorer=replace(cfg.scorer, endpoint=env))
    if overrides:
        cfg = config_from_dict(overrides, cfg)
    return cfg
