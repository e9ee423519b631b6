"""Shared helpers for the versioned JSON documents the toolkit writes (configs, metadata, reports)."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Type, TypeVar

from pydantic import BaseModel, ValidationError

from .errors import FormatError, VersionMismatchError

FORMAT_VERSION = 1

ModelT = TypeVar("ModelT", bound=BaseModel)


def canonical_json(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, no insignificant whitespace."""
    if isinstance(obj, BaseModel):
        obj = obj.model_dump(mode="json")
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def model_digest(model: BaseModel) -> str:
    return sha256_hex(canonical_json(model))


def write_model(model: BaseModel, path: Path) -> Path:
    """Write a pydantic document as indented UTF-8 JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def read_model(path: Path, model_cls: Type[ModelT], *, expected_version: int = FORMAT_VERSION) -> ModelT:
    """Read a versioned pydantic document; version is checked before full validation."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(f"Cannot read {path}: {e}") from e
    if not isinstance(raw, dict):
        raise FormatError(f"{path} does not contain a JSON object")
    version = raw.get("format_version")
    if version != expected_version:
        raise VersionMismatchError(f"{path}: format_version {version!r}, expected {expected_version}")
    try:
        return model_cls.model_validate(raw)
    except ValidationError as e:
        raise FormatError(f"{path}: invalid {model_cls.__name__}: {e}") from e
