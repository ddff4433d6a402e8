from pydantic_settings import BaseSettings
from pydantic import Field, field_validator
from functools import lru_cache


APP_NAME = "pfkernel"
VERSION = "0.1.0"


class Settings(BaseSettings):

    # Quadrature
    nodes_real: int = Field(default=80, alias="PFKERNEL_NODES_REAL")
    nodes_complex_re: int = Field(default=48, alias="PFKERNEL_NODES_COMPLEX_RE")
    nodes_complex_im: int = Field(default=32, alias="PFKERNEL_NODES_COMPLEX_IM")
    bruteforce_nodes: int = Field(default=48, alias="PFKERNEL_BRUTEFORCE_NODES")

    # Validation
    seed: int = Field(default=7, alias="PFKERNEL_SEED")
    tolerance: float = Field(default=1e-9, alias="PFKERNEL_TOL")

    # Sampling
    sample_chunk: int = Field(default=50_000, alias="PFKERNEL_SAMPLE_CHUNK")
    sample_workers: int = Field(default=4, alias="PFKERNEL_SAMPLE_WORKERS")

    # Logging
    log_level: str = Field(default="WARNING", alias="PFKERNEL_LOG_LEVEL")

    # API
    api_host: str = Field(default="0.0.0.0", alias="PFKERNEL_API_HOST")
    api_port: int = Field(default=8000, alias="PFKERNEL_API_PORT")
    api_reload: bool = Field(default=False, alias="PFKERNEL_API_RELOAD")

    @field_validator("nodes_real", "nodes_complex_re", "nodes_complex_im", "bruteforce_nodes")
    @classmethod
    def _enough_nodes(cls, value: int) -> int:
        if value < 8:
            raise ValueError(f"node count must be >= 8, got {value}")
        return value

    @field_validator("sample_chunk", "sample_workers")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be >= 1, got {value}")
        return value

    class Config:
        env_file = ".env"
        extra = "ignore"
        populate_by_name = True


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


def reload_settings() -> Settings:
    """Clear cache and reload settings."""
    get_settings.cache_clear()
    return get_settings()
