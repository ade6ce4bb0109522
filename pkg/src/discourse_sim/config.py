"""Run configuration: JSON file, CLI overrides, validation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

from .coefficients import DEFAULT_COEFFICIENTS
from .generation import DEFAULT_BASE_URL, DEFAULT_MODEL, GEN_TEMPERATURE, SCORE_TEMPERATURE
from .model import ConfigError, merge_priors

BACKENDS = ("remote", "stub")


@dataclass(frozen=True)
class NetworkConfig:
    k: int = 6
    p: float = 0.3


@dataclass(frozen=True)
class SimConfig:
    n_agents: int = 100
    n_days: int = 15
    seed: int = 42
    network: NetworkConfig = field(default_factory=NetworkConfig)
    backend: str = "remote"
    model_name: str = DEFAULT_MODEL
    base_url: str = DEFAULT_BASE_URL
    request_timeout: float = 60.0
    max_in_flight: int = 4
    gen_temperature: float = GEN_TEMPERATURE
    score_temperature: float = SCORE_TEMPERATURE
    offline: bool = False
    search_endpoint: str = "https://html.duckduckgo.com/html/"
    timeline_path: str | None = None
    lexicon_path: str | None = None
    news_fixture_path: str | None = None
    out_dir: str = "runs/latest"
    coefficients: dict[str, float] | None = None
    priors: dict[str, dict[str, list[float]]] | None = None
    extended_beliefs: bool = False
    bimodality: bool = False
    workers: int = 4

    def validate(self) -> "SimConfig":
        if self.n_agents <= self.network.k:
            raise ConfigError(f"n_agents ({self.n_agents}) must exceed network k ({self.network.k})")
        if self.n_days < 0:
            raise ConfigError("n_days must be >= 0")
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if self.network.k < 2 or self.network.k % 2:
            raise ConfigError(f"network k must be an even integer >= 2, got {self.network.k}")
        if not 0.0 <= self.network.p <= 1.0:
            raise ConfigError(f"network p must lie in [0, 1], got {self.network.p}")
        if self.backend not in BACKENDS:
            raise ConfigError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        for name in ("gen_temperature", "score_temperature"):
            if not 0.0 <= getattr(self, name) <= 2.0:
                raise ConfigError(f"{name} must lie in [0, 2]")
        if self.workers < 1 or self.max_in_flight < 1:
            raise ConfigError("workers and max_in_flight must be >= 1")
        try:
            DEFAULT_COEFFICIENTS.with_overrides(self.coefficients)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        merge_priors(self.priors)
        return self

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any]) -> "SimConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        data = dict(raw)
        if "network" in data:
            net = data["network"]
            if not isinstance(net, Mapping) or set(net) - {"k", "p"}:
                raise ConfigError("network must be an object with keys 'k' and 'p'")
            data["network"] = NetworkConfig(**net)
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def with_overrides(self, **overrides: Any) -> "SimConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def load_config(path: str | Path | None) -> SimConfig:
    if path is None:
        return SimConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return SimConfig.from_dict(raw)
