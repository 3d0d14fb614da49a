"""Configuration management for the grading toolkit."""
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource


class Settings(BaseSettings):
    """Toolkit settings.

    Values come from explicit keyword arguments only (CLI flags). Environment
    variables and dotenv files are deliberately not consulted so that a run is
    reproducible from its command line alone.
    """

    # Completion
    max_rules: int = Field(default=100_000, gt=0)

    # Brute-force oracle
    max_oracle_vectors: int = Field(default=10_000_000, gt=0)
    default_oracle_degree: int = Field(default=6, ge=2)

    # Certificates
    max_certificate_steps: int = Field(default=1_000_000, gt=0)
    max_certificate_vectors: int = Field(default=200_000, gt=0)

    # Logging
    log_level: str = "WARNING"
    log_file: Optional[str] = None

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)


# Global settings instance
settings = Settings()
