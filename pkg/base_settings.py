"""Environment settings and the default repository set"""
from functools import lru_cache
from types import MappingProxyType
import os
from typing import Any, Mapping, TypeAlias

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .repositories.csv import CsvArtifactRepository
from .repositories.parameters import FileParameterRepository

# Repository sets are immutable mappings from role to repository
RepoSet: TypeAlias = Mapping[str, Any]

_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
_TRUE = {"1", "true", "yes", "on"}


class Settings(BaseModel):
    """Process-wide settings read from RRDEU_* environment variables"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    log_level: str = Field("INFO", description="Logging level of the robust_rdeu logger")
    output_dir: str = Field("runs", description="Parent directory of run directories")
    debug: bool = Field(False, description="Force DEBUG logging")

    @field_validator("log_level")
    def validate_level(cls, v):
        level = v.strip().upper()
        if level not in _LEVELS:
            raise ValueError(f"Unknown log level: {v}")
        return level

    @property
    def effective_level(self) -> str:
        return "DEBUG" if self.debug else self.log_level


def read_settings() -> Settings:
    """Settings from the environment, after loading a .env file if one exists"""
    load_dotenv()
    return Settings(
        log_level=os.getenv("RRDEU_LOG_LEVEL", "INFO"),
        output_dir=os.getenv("RRDEU_OUTPUT_DIR", "runs"),
        debug=os.getenv("RRDEU_DEBUG", "").strip().lower() in _TRUE,
    )


@lru_cache()
def get_settings() -> Settings:
    """Cached process settings"""
    return read_settings()


def create_reposet(**repos) -> RepoSet:
    """Create a new immutable repository set with arbitrary repositories"""
    return MappingProxyType(repos)


@lru_cache()
def get_reposet() -> RepoSet:
    """Default repositories writing to the local filesystem"""
    return create_reposet(
        artifact_repository=CsvArtifactRepository(),
        parameter_repository=FileParameterRepository(),
    )
