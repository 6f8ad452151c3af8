"""
Configuration management for QOsc
"""

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_prefix="QOSC_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Series truncation
    max_terms: int = Field(10000, ge=1)
    series_tolerance: float = Field(1e-16, gt=0)
    quiet_terms: int = Field(3, ge=1)

    # Quadrature
    quadrature_budget: int = Field(2_000_000, ge=1000)
    panel_nodes: int = Field(32, ge=4)
    panel_width: float = Field(2.0, gt=0)
    max_doublings: int = Field(8, ge=1)
    tanh_sinh_levels: int = Field(10, ge=2)

    # Logging Configuration
    log_level: str = "INFO"
    log_format: Literal["console", "json"] = "console"

    # OpenTelemetry Configuration
    tracing_enabled: bool = False
    otel_service_name: str = "qosc"

    # Output
    csv_digits: int = Field(17, ge=1, le=17)


def get_settings() -> Settings:
    """Get application settings"""
    env_file = Path(__file__).parent / ".env"
    if env_file.exists():
        return Settings(_env_file=str(env_file))
    return Settings()


# Global settings instance
settings = get_settings()
