"""Configuration management module."""

from .config_manager import (
    PRESETS,
    AppConfig,
    ConfigManager,
    PipelineConfig,
    build_pipeline_config,
    config_presets,
)

__all__ = [
    "PRESETS",
    "AppConfig",
    "ConfigManager",
    "PipelineConfig",
    "build_pipeline_config",
    "config_presets",
]
