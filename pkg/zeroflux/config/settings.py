from functools import lru_cache

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """Runtime settings loaded from environment variables (.env file)"""

    # Logging; file output is opt-in and the directory is created on first use
    log_level: str = "INFO"
    log_dir: str = "logs"
    log_to_file: bool = False

    # Output
    output_root: str = "runs"
    csv_float_format: str = "%.17g"  # full round-trip precision
    record_wall_time: bool = True  # off -> manifest.json is byte-reproducible

    # Refinement studies run levels in a process pool when > 1
    max_workers: int = 1

    model_config = SettingsConfigDict(
        env_prefix="ZEROFLUX_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    """Cached settings instance - loads once from .env"""
    return Settings()


settings = get_settings()
