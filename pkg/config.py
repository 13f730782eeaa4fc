from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    # Application Configuration
    app_name: str = "Quantower"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "INFO"

    # Tolerances
    tolerance: float = 1e-10
    strict_tolerance: float = 1e-12

    # Resource guards
    max_dimension: int = 4096
    dense_norm_limit: int = 1024

    # Randomized suites
    default_seed: int = 1995
    default_draws: int = 200
    max_sector: int = 6

    # Truncation defaults
    default_bose_cutoff: int = 3

    config_file: Optional[str] = None

    class Config:
        env_file = ".env"
        case_sensitive = False


settings = Settings()
