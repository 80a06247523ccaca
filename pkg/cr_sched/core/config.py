# cr_sched/core/config.py

"""
Application configuration loader using Pydantic BaseSettings.

This module defines the Settings class, which loads and validates environment
variables (prefixed with CR_SCHED_) and an optional .env file. Every field has a
default, so a bare checkout runs without any configuration.
"""

import sys
from typing import Literal

from pydantic import AnyUrl, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from cr_sched.core.logger import logger, set_level


class Settings(BaseSettings):
    """
    Defines all environment-based configuration values for cr-sched.

    Each field maps to CR_SCHED_<FIELD NAME> in the environment or the .env file.
    Scenario files and CLI flags take precedence over these defaults.
    """

    model_config = SettingsConfigDict(
        env_prefix="CR_SCHED_",
        env_file=".env",
        extra="ignore",
    )

    # Monte Carlo defaults
    default_trials: int = Field(1_000_000, ge=1)          # Trials per run
    default_seed: int = Field(20190516, ge=0, lt=2**64)   # Master seed
    default_beta: float = Field(3.0, gt=0)                # Path-loss exponent
    workers: int = Field(1, ge=1)                         # Local threads for trial blocks
    block_size: int = Field(65536, ge=1)                  # Trials per block (part of the stream layout)
    simulation_backend: Literal["local", "celery"] = "local"

    # Celery broker / result backend for distributed trial blocks
    celery_broker_url: AnyUrl = Field("redis://localhost:6379/0", validate_default=True)
    celery_result_backend: AnyUrl = Field("redis://localhost:6379/0", validate_default=True)
    celery_task_timeout: float = Field(600.0, gt=0)       # Seconds to wait for one block

    # Analytics
    tau_rel: float = Field(1e-6, gt=0)                    # Near-degenerate relative gap
    quad_abs_tol: float = Field(1e-10, gt=0)
    quad_rel_tol: float = Field(1e-9, gt=0)
    quad_max_subdivisions: int = Field(2000, ge=1)
    degenerate_fallback: Literal["quadrature", "limit"] = "quadrature"

    log_level: str = "INFO"
    debug: bool = False


try:
    settings = Settings()
except ValidationError as e:
    logger.error("Invalid configuration detected:\n%s", e)
    sys.exit("Startup aborted due to invalid configuration. Please check your CR_SCHED_* variables or .env file.")

set_level("DEBUG" if settings.debug else settings.log_level)
