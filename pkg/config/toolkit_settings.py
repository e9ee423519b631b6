from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class ToolkitSettings(BaseSettings):
    # Ambient settings only; numeric results never depend on these
    LOG_LEVEL: str = "INFO"
    AUDIT_LOG_ENABLED: bool = True
    # JSON audit events are also appended here when set
    AUDIT_LOG_FILE: Optional[str] = None

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="",
        extra="ignore",
    )
