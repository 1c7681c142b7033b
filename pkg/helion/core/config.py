"""
Configuration settings for Helion
"""

from typing import Literal

from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Process-wide settings, overridable through HELION_* environment variables"""

    PROJECT_NAME: str = "helion"
    VERSION: str = "1.0.0"

    # Output
    OUTPUT_DIR: str = "helion-out"
    FORMAT_VERSION: int = 1

    # Parallelism (joblib workers)
    THREADS: int = 1

    # Numerics
    SIGMA_SQ: float = 0.5  # shot-noise variance per quadrature, photon units
    EIGEN_METHOD: Literal["lapack", "jacobi"] = "lapack"

    # Logging
    LOG_LEVEL: str = "INFO"

    model_config = {
        "env_prefix": "HELION_",
        "env_file": ".env",
        "case_sensitive": True,
        "extra": "ignore",
    }

    @field_validator("THREADS")
    @classmethod
    def threads_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("THREADS must be at least 1")
        return v

    @field_validator("SIGMA_SQ")
    @classmethod
    def sigma_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("SIGMA_SQ must be positive")
        return v


# Create settings instance
settings = Settings()
