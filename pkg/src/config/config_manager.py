#!/usr/bin/env python

"""
Configuration Manager
Handles pipeline parameters (presets, config files, overrides) and
application settings from environment variables
"""

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.errors import ConfigurationError
from src.preprocess.homography import HomographyParams
from src.preprocess.smoothing import BilateralParams, default_radius

COLOUR_SCALE = 255.0


class PipelineConfig(BaseModel):
    """All tunable thresholds and transform parameters

    Colour thresholds (sigma0, delta_l, mu_b, f_r) are given in 0-255 units;
    sigma_g is dimensionless.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    sigma0: float = Field(10.0, gt=0)
    sigma_g: float = Field(1.0, ge=0)
    delta_l: float = Field(22.5, ge=0)
    mu_b: float = Field(230.0, ge=0)
    a: float = 0.0
    b: float = 0.4
    f_r: float = Field(50.0, gt=0)
    g_s: float = Field(50.0, gt=0)
    radius: Optional[int] = Field(None, ge=1)
    max_radius: int = Field(16, ge=1)
    smoothing: Literal["bilateral", "gaussian", "none"] = "bilateral"
    gaussian_sigma: float = Field(3.0, gt=0)
    use_homography: bool = True
    use_lt_check: bool = True
    use_offscale: bool = True

    @model_validator(mode="after")
    def _check_homography(self) -> "PipelineConfig":
        HomographyParams(self.a, self.b)
        return self

    @property
    def sigma1(self) -> float:
        return math.sqrt(2.0 / 3.0) * self.sigma0

    @property
    def sigma2(self) -> float:
        return math.sqrt(1.0 / 3.0) * self.sigma0

    @property
    def effective_radius(self) -> int:
        if self.radius is not None:
            return self.radius
        return default_radius(self.g_s, self.max_radius)

    @property
    def homography_params(self) -> HomographyParams:
        return HomographyParams(self.a, self.b)

    @property
    def bilateral_params(self) -> BilateralParams:
        """Bilateral parameters for images normalised to [0, 1]"""
        return BilateralParams(self.f_r / COLOUR_SCALE, self.g_s, self.effective_radius)

    @staticmethod
    def normalise(value: float) -> float:
        """0-255 colour units to the internal [0, 1] scale"""
        return value / COLOUR_SCALE

    def echo(self) -> Dict[str, Any]:
        """Config as written to reports, derived thresholds included"""
        values = self.model_dump()
        values["sigma1"] = self.sigma1
        values["sigma2"] = self.sigma2
        values["effective_radius"] = self.effective_radius
        return values


PRESETS: Dict[str, Dict[str, Any]] = {
    "selected-sfu": {"mu_b": 230.0, "sigma0": 10.0, "sigma_g": 1.0, "delta_l": 22.5},
    "iitp-close": {"mu_b": 160.0, "sigma0": 8.5, "sigma_g": 1.0, "delta_l": 25.0},
    "iitp-diffuse": {"mu_b": 250.0, "sigma0": 6.0, "sigma_g": 1.0, "delta_l": 30.0},
}
_SHARED_PRESET_VALUES = {"a": 0.0, "b": 0.4, "f_r": 50.0, "g_s": 50.0}


def build_pipeline_config(values: Dict[str, Any]) -> PipelineConfig:
    """Validate a flat mapping into a PipelineConfig"""
    try:
        return PipelineConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigurationError(f"invalid pipeline configuration: {problems}") from None


def config_presets() -> Dict[str, PipelineConfig]:
    """The named reference configurations"""
    return {
        name: build_pipeline_config({**_SHARED_PRESET_VALUES, **values})
        for name, values in PRESETS.items()
    }


@dataclass
class AppConfig:
    """Application settings"""

    # Logging configuration
    log_level: str = "INFO"
    log_file: Optional[str] = None
    log_rotation: str = "100 MB"

    # Evaluation parallelism
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)


class ConfigManager:
    """Configuration manager - handles all configuration sources"""

    def __init__(self, env_file: Optional[str] = None):
        """Initialize configuration manager

        Args:
            env_file: optional .env file; the default search applies when omitted
        """
        load_dotenv(env_file)
        self.config = AppConfig()
        self._load_from_env()
        self._log_config_summary()

    def _load_from_env(self):
        """Load application settings from environment variables"""
        self.config.log_level = os.getenv("COLORSEG_LOG_LEVEL", self.config.log_level).upper()
        self.config.log_file = os.getenv("COLORSEG_LOG_FILE", self.config.log_file) or None
        self.config.log_rotation = os.getenv("COLORSEG_LOG_ROTATION", self.config.log_rotation)

        threads = os.getenv("COLORSEG_THREADS")
        if threads:
            try:
                self.config.threads = max(1, int(threads))
            except ValueError:
                logger.warning(f"⚠️ Ignoring non-integer COLORSEG_THREADS={threads!r}")

    def _log_config_summary(self):
        logger.debug(
            f"📝 Logging: Level={self.config.log_level}, File={self.config.log_file}; "
            f"evaluation threads={self.config.threads}"
        )

    def load_pipeline_config(
        self,
        preset: Optional[str] = None,
        config_file: Optional[Union[str, Path]] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> PipelineConfig:
        """Resolve a pipeline configuration

        Preset values are overridden by config-file values, which are
        overridden by explicit overrides (None values are ignored).
        """
        values: Dict[str, Any] = {}
        if preset:
            if preset not in PRESETS:
                raise ConfigurationError(
                    f"unknown preset {preset!r}; choose from {', '.join(sorted(PRESETS))}"
                )
            values.update(_SHARED_PRESET_VALUES)
            values.update(PRESETS[preset])
        if config_file:
            values.update(self.read_config_file(config_file))
        if overrides:
            values.update({k: v for k, v in overrides.items() if v is not None})

        config = build_pipeline_config(values)
        logger.info(
            f"✅ Pipeline config: preset={preset or 'default'}, sigma0={config.sigma0}, "
            f"sigma_G={config.sigma_g}, delta_L={config.delta_l}, mu_B={config.mu_b}, "
            f"a={config.a}, b={config.b}"
        )
        return config

    @staticmethod
    def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
        """Parse a flat `key = value` file with PipelineConfig field names"""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"cannot read config file {path}: {e}") from None

        values: Dict[str, str] = {}
        known = set(PipelineConfig.model_fields)
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{number}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ConfigurationError(f"{path}:{number}: unknown key {key!r}")
            values[key] = value
        return values
