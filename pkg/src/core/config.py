from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide defaults, overridable through MEASURELESS_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="MEASURELESS_",
        env_file=".env",
        extra="ignore",
    )

    # Constant propagation
    n_max: int = 64
    max_controls: int = 3
    amplitude_tol: float = 1e-12
    prob_tol: float = 1e-9

    # Oracle limits
    verify_tol: float = 1e-9
    max_static_qubits: int = 14
    max_dynamic_qubits: int = 12
    max_prob_gates: int = 20
    ensemble_cap: int = 4096
    max_branches: int = 65536

    log_level: str = "INFO"


@lru_cache
def get_settings() -> Settings:
    """
    Get the cached settings instance.

    Returns:
        The settings loaded from the environment
    """
    return Settings()
