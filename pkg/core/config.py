"""
core/config.py
Search budgets, thread count, refinement factor and log level, read from the environment.
Loads from .env file automatically; every field has a working default.
"""

from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Runtime settings loaded from environment variables / .env file."""

    # --- Exact search ---
    SEARCH_BUDGET: int = 2_000_000          # Expanded configurations before ResourceLimit
    TURN_ORACLE_MAX_STATES: int = 200_000   # Guard for the exhaustive turn oracle

    # --- Structured solvers ---
    FPT_THREADS: int = 1

    # --- Disjoint paths ---
    DPATHS_NODE_BUDGET: int = 5_000_000

    # --- Reduction ---
    REFINEMENT_FACTOR: int = 1000
    TEST_REFINEMENT_FACTOR: int = 20

    # --- Generation ---
    DEFAULT_SEED: int = 0

    # --- Logging ---
    LOG_LEVEL: str = "INFO"

    model_config = {
        "env_file": ".env",
        "extra": "ignore",
    }


@lru_cache
def get_settings() -> Settings:
    """Singleton access to runtime settings."""
    return Settings()
