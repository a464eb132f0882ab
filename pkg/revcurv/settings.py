"""Run configuration.

Defaults live in ``config/settings.yaml`` under the ``verification`` key.
Explicit overrides (CLI flags) win over the file, and ``REVCURV_OUT`` wins
over both for the output directory.
"""

from __future__ import annotations

import os
import pathlib
from typing import Any

import yaml
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from revcurv.errors import ConfigError
from revcurv.profile_construction import ConstructionParams

log = logger.bind(name="Settings")

SETTINGS_FILE = pathlib.Path(os.getenv("REVCURV_SETTINGS", "config/settings.yaml"))
OUT_ENV = "REVCURV_OUT"

DEFAULT_REGIONS = [
    "cap:0,0,1,0.3",
    "cap:0,0,1,0.6",
    "cap:0,0,1,1.0",
    "cap:0,0,1,1.4",
    "cap:0,0,1,1.5707963267948966",
]


class RunConfig(BaseModel):
    """Everything one verification run depends on."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    delta: float = 0.1
    a: float = 0.0
    grid_n: int = 4096
    quad_order: int = 64
    quad_panels: int = 8
    step_tol: float = Field(1e-10, gt=0.0, le=1e-3)
    seed: int = Field(0, ge=0)
    out_dir: pathlib.Path = pathlib.Path("reports")
    baseline: bool = False
    regions: list[str] = Field(default_factory=lambda: list(DEFAULT_REGIONS))
    parallel: bool = False

    @model_validator(mode="after")
    def _check_construction(self) -> "RunConfig":
        # surfaces delta/a/grid violations as field errors of this model
        self.construction_params()
        return self

    def construction_params(self) -> ConstructionParams:
        return ConstructionParams(
            delta=self.delta,
            a=self.a,
            grid_n=self.grid_n,
            quad_order=self.quad_order,
            quad_panels=self.quad_panels,
        )

    def echo(self) -> dict[str, Any]:
        """Flat view for the report header."""
        data = self.model_dump()
        data["out_dir"] = str(self.out_dir)
        return data


def _read_section(path: pathlib.Path) -> dict[str, Any]:
    if not path.exists():
        log.warning("Settings file {} not found, using defaults", path)
        return {}
    with path.open(encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    section = raw.get("verification", {}) or {}
    if not isinstance(section, dict):
        raise ConfigError(f"{path}: 'verification' must be a mapping")
    return section


def load_run_config(path: str | pathlib.Path | None = None, **overrides: Any) -> RunConfig:
    """Merge file defaults, non-``None`` overrides and the environment."""
    data = _read_section(pathlib.Path(path) if path is not None else SETTINGS_FILE)
    data.update({key: value for key, value in overrides.items() if value is not None})
    env_out = os.getenv(OUT_ENV)
    if env_out:
        data["out_dir"] = env_out
    try:
        return RunConfig(**data)
    except ValidationError as exc:
        messages = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigError(messages) from exc
