"""Application settings using Pydantic Settings."""

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application configuration with environment variable support."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = Field(
        default="WARNING", description="Logging level (DEBUG, INFO, WARNING, ERROR)"
    )
    log_file: Optional[Path] = Field(
        default=None, description="Optional log file path"
    )

    # Critical point search
    default_max_degree: int = Field(
        default=8, ge=1, le=16, description="Highest field degree m searched by default"
    )
    critical_search_budget: int = Field(
        default=2**25,
        ge=1,
        description="Maximum candidate rho tuples evaluated, cumulative over layers",
    )
    search_chunk_size: int = Field(
        default=2**16, ge=1, le=2**22, description="Candidate tuples per vectorized chunk"
    )
    search_workers: int = Field(
        default=4, ge=1, le=64, description="Threads evaluating candidate chunks"
    )

    # Rank computation
    probabilistic_min_degree: int = Field(
        default=12,
        ge=1,
        le=16,
        description="Minimum degree of the evaluation field for probabilistic rank",
    )
    cross_check_rounds: int = Field(
        default=5, ge=1, le=50, description="Seeds used when cross-checking rank methods"
    )
    verify_obstruction: bool = Field(
        default=True, description="Re-check delta^2 = o * id before every rank computation"
    )

    # Randomness
    default_seed: int = Field(
        default=1729, description="Seed used when a job gives none; echoed in every report"
    )

    # Reports
    report_timing: bool = Field(
        default=False,
        description="Include wall-clock timing in reports (breaks byte reproducibility)",
    )

    # Selftest
    selftest_corpus_size: int = Field(
        default=100, ge=1, le=10000, description="Random (P, c, rho) triples in the selftest corpus"
    )
    selftest_seed: int = Field(
        default=1729, description="Seed of the selftest corpus"
    )


# Singleton settings instance
settings = Settings()
