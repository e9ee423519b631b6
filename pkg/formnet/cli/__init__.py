"""Command-line surface and the end-to-end reproduction pipeline."""

from .commands import app
from .config import SCALE_PRESETS, DesignTraining, ScalePreset, get_preset
from .manifest import RunManifest, manifest_path, read_manifest, write_manifest
from .reproduce import run_reproduce, run_stage

__all__ = [
    "app",
    "SCALE_PRESETS",
    "DesignTraining",
    "ScalePreset",
    "get_preset",
    "RunManifest",
    "manifest_path",
    "read_manifest",
    "write_manifest",
    "run_reproduce",
    "run_stage",
]
