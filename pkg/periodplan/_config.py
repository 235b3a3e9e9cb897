from __future__ import annotations

import hashlib
import json
import logging
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from ._exceptions import ConfigError
from ._types import NOT_GIVEN, is_given
from ._version import __version__
from .types.matrices import parse_rational

__all__ = ["Config", "NetworkConfig", "load_config", "read_config_file", "ENV_PREFIX"]

logger = logging.getLogger(__name__)

ENV_PREFIX = "PERIODPLAN_"


class NetworkConfig(BaseModel):
    """Training hyperparameters shared by the MLP and CNN"""

    gamma: float = Field(default=1e-3, gt=0)
    decay: float = Field(default=0.0, ge=0)
    batch_size: int = Field(default=32, ge=1)
    epochs: int = Field(default=20, ge=0)
    mlp_widths: List[int] = Field(default_factory=lambda: [500, 500, 500, 100, 100])
    cnn_channels: List[int] = Field(default_factory=lambda: [8, 16])
    cnn_dense: int = Field(default=64, ge=1)


class Config(BaseModel):
    """
    Resolved run configuration

    Sources, lowest priority first: defaults, a key=value file, PERIODPLAN_*
    environment variables, explicit command-line flags.
    """

    workdir: Path = Path("periodplan-data")
    vertices_path: Optional[Path] = None
    edges_path: Optional[Path] = None
    labels_path: Optional[Path] = None
    features_path: Optional[Path] = None
    models_dir: Optional[Path] = None
    checkpoint_path: Optional[Path] = None
    budget_seconds: float = Field(default=30.0, gt=0)
    step_limit: Optional[int] = Field(default=None, gt=0)
    pca_components: int = Field(default=23, ge=1)
    basepoints: List[str] = Field(default_factory=lambda: ["0", "1"])
    alpha: float = Field(default=0.5, gt=0, lt=1)
    seed: int = 0
    workers: int = Field(default=1, ge=1)
    isolation: Literal["thread", "process"] = "thread"
    retries: int = Field(default=0, ge=0)
    top_n: int = Field(default=10, ge=1)
    log_level: str = "WARNING"
    network: NetworkConfig = Field(default_factory=NetworkConfig)

    @field_validator("basepoints")
    @classmethod
    def _check_basepoints(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("at least one basepoint is required")
        for s in value:
            try:
                parse_rational(s)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"basepoint {s!r} is not a rational number") from exc
        return value

    @field_validator("log_level")
    @classmethod
    def _check_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value}")
        return value

    def path(self, name: str) -> Path:
        """A store path, defaulting to a file under workdir"""
        defaults = {
            "vertices_path": "vertices.jsonl",
            "edges_path": "edges.jsonl",
            "labels_path": "labels.jsonl",
            "features_path": "features.jsonl",
            "models_dir": "models",
            "checkpoint_path": "checkpoint.jsonl",
        }
        value = getattr(self, name)
        return Path(value) if value is not None else self.workdir / defaults[name]

    def basepoint_values(self) -> List[Fraction]:
        return [parse_rational(s) for s in self.basepoints]

    def fingerprint(self) -> str:
        """SHA-256 of the resolved configuration"""
        payload = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def provenance(self, command: str) -> Dict[str, Any]:
        return {"command": command, "config_hash": self.fingerprint(), "version": __version__}


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Parse ``key = value`` lines; '#' comments and blank lines are skipped"""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    out: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{number}: expected key = value, got {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _nest(flat: Mapping[str, Any]) -> Dict[str, Any]:
    """Route network.* (or network_*) keys into the nested section; split list values"""
    out: Dict[str, Any] = {}
    network: Dict[str, Any] = {}
    list_fields = {"basepoints", "mlp_widths", "cnn_channels"}
    for key, value in flat.items():
        key = key.lower()
        if isinstance(value, str) and key.split(".")[-1] in list_fields | {
            f"network_{f}" for f in list_fields
        }:
            value = [v.strip() for v in value.split(",") if v.strip()]
        if key.startswith("network.") or key.startswith("network_"):
            network[key[len("network.") :]] = value
        else:
            out[key] = value
    if network:
        out["network"] = network
    return out


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Config:
    """Resolve defaults < file < environment < overrides into a validated Config.

    Override values equal to NOT_GIVEN (flags the user did not pass) are ignored.

    Raises:
        ConfigError: unknown keys or failed validation
    """
    environ = os.environ if environ is None else environ
    merged: Dict[str, Any] = {}
    if path is not None:
        merged.update(read_config_file(path))
    for key, value in environ.items():
        if key.startswith(ENV_PREFIX):
            merged[key[len(ENV_PREFIX) :].lower()] = value
    for key, value in (overrides or {}).items():
        if is_given(value) and value is not None:
            merged[key] = value
    data = _nest(merged)
    network = dict(Config().network.model_dump())
    network.update(data.pop("network", {}))
    unknown = set(data) - set(Config.model_fields)
    unknown |= {f"network.{k}" for k in set(network) - set(NetworkConfig.model_fields)}
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    try:
        config = Config.model_validate({**data, "network": network})
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    logger.debug("resolved configuration %s", config.fingerprint()[:12])
    return config


