"""
Run manifests: everything needed to re-run a command, plus the artifacts it produced.
"""

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

from pydantic import BaseModel, Field

import formnet
from formnet.jsonio import FORMAT_VERSION, read_model, write_model

from .config import MANIFEST_FILE, MANIFEST_SUFFIX

logger = logging.getLogger(__name__)


class RunManifest(BaseModel):
    format_version: int = FORMAT_VERSION
    command: str
    flags: Dict[str, Any] = {}
    seeds: Dict[str, int] = {}
    config_digests: Dict[str, str] = {}
    artifacts: List[str] = []
    tool_version: str = formnet.__version__
    timestamp: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def add_artifact(self, path: Path) -> None:
        p = str(path)
        if p not in self.artifacts:
            self.artifacts.append(p)


def manifest_path(out: Path) -> Path:
    """<dir>/manifest.json for directory outputs, <file>.manifest.json otherwise."""
    out = Path(out)
    if out.is_dir():
        return out / MANIFEST_FILE
    return out.with_name(out.name + MANIFEST_SUFFIX)


def write_manifest(manifest: RunManifest, out: Path) -> Path:
    path = write_model(manifest, manifest_path(out))
    logger.info("Wrote run manifest %s (%d artifacts)", path, len(manifest.artifacts))
    return path


def read_manifest(path: Path) -> RunManifest:
    return read_model(path, RunManifest)
