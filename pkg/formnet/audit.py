"""
Run audit trail: one structured JSON event per pipeline stage start, finish or failure.
Uses structlog on a dedicated stdlib logger; events go to stderr and optionally to AUDIT_LOG_FILE.
"""

import logging
import sys
from typing import Any, Optional

import structlog

from config.toolkit_settings import ToolkitSettings

AUDIT_LOGGER_NAME = "formnet_audit"

_configured = False
_structlog_ready = False
_enabled = True


def _configure_structlog(log_file: Optional[str]) -> None:
    """Configure structlog for JSON output; optional file from AUDIT_LOG_FILE."""
    shared_processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        structlog.processors.JSONRenderer(sort_keys=True),
    ]
    logger = logging.getLogger(AUDIT_LOGGER_NAME)
    logger.setLevel(logging.INFO)
    logger.propagate = False
    if not logger.handlers:
        logger.addHandler(logging.StreamHandler(sys.stderr))
        if log_file:
            try:
                logger.addHandler(logging.FileHandler(log_file, encoding="utf-8"))
            except OSError as e:
                logging.getLogger(__name__).warning("Audit log file %s unavailable: %s", log_file, e)
    structlog.configure(
        processors=shared_processors,
        wrapper_class=structlog.make_filtering_bound_logger(logging.INFO),
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def configure_audit(settings: Optional[ToolkitSettings] = None) -> None:
    global _configured, _structlog_ready, _enabled
    settings = settings or ToolkitSettings()
    _enabled = settings.AUDIT_LOG_ENABLED
    if _enabled and not _structlog_ready:
        _configure_structlog(settings.AUDIT_LOG_FILE)
        _structlog_ready = True
    _configured = True


def audit_enabled() -> bool:
    return _enabled


def get_run_logger(run_id: str, stage: str = "run"):
    """Return a structlog logger bound with run_id and stage."""
    if not _configured and _enabled:
        configure_audit()
    return structlog.get_logger(AUDIT_LOGGER_NAME).bind(run_id=run_id, stage=stage)


def log_stage_event(run_id: str, stage: str, action: str, **details: Any) -> None:
    if not _configured:
        configure_audit()
    if not _enabled:
        return
    get_run_logger(run_id, stage).info(action, **details)
