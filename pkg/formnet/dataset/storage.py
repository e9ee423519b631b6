"""
On-disk dataset layout: a directory with `meta` (JSON text) plus raw little-endian binary32 arrays.
"""

import logging
from pathlib import Path

import numpy as np

from formnet.errors import DigestMismatchError, FormatError, TruncatedFileError
from formnet.jsonio import read_model, write_model

from .config import INPUTS_FILE, META_FILE, STORAGE_DTYPE, TARGETS_FILE
from .models import Dataset, DatasetMeta, content_digest

logger = logging.getLogger(__name__)


def save_dataset(ds: Dataset, path: Path) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    (path / INPUTS_FILE).write_bytes(ds.inputs.astype(STORAGE_DTYPE, copy=False).tobytes(order="C"))
    (path / TARGETS_FILE).write_bytes(ds.targets.astype(STORAGE_DTYPE, copy=False).tobytes(order="C"))
    write_model(ds.meta, path / META_FILE)
    logger.info("Saved dataset (%d samples) to %s", ds.N, path)
    return path


def _read_array(file: Path, shape: tuple) -> np.ndarray:
    try:
        raw = file.read_bytes()
    except OSError as e:
        raise FormatError(f"Cannot read {file}: {e}") from e
    expected = int(np.prod(shape)) * np.dtype(STORAGE_DTYPE).itemsize
    if len(raw) < expected:
        raise TruncatedFileError(f"{file}: {len(raw)} bytes, expected {expected}")
    if len(raw) > expected:
        raise FormatError(f"{file}: {len(raw)} bytes, expected {expected}")
    return np.frombuffer(raw, dtype=STORAGE_DTYPE).reshape(shape).astype(np.float32)


def load_dataset(path: Path) -> Dataset:
    path = Path(path)
    meta = read_model(path / META_FILE, DatasetMeta)
    N, K, M = meta.n_samples, meta.K, meta.M
    inputs = _read_array(path / INPUTS_FILE, (N, K, M, M))
    targets = _read_array(path / TARGETS_FILE, (N, M, M))
    if content_digest(inputs, targets) != meta.content_digest:
        raise DigestMismatchError(f"{path}: array contents do not match the recorded digest")
    if meta.forward_config.digest() != meta.forward_config_digest:
        raise DigestMismatchError(f"{path}: forward config does not match the recorded digest")
    return Dataset(inputs=inputs, targets=targets, meta=meta)
