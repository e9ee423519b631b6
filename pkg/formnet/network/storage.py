"""
Model file: one UTF-8 JSON header line (format version, configs, norm stats, layer manifest,
parameter digest) followed by little-endian binary32 parameter blocks in manifest order.
"""

import json
import logging
from collections import OrderedDict
from pathlib import Path

import numpy as np
import torch
from pydantic import ValidationError

from formnet.errors import DigestMismatchError, FormatError, TruncatedFileError, VersionMismatchError
from formnet.jsonio import FORMAT_VERSION, sha256_hex

from .config import MODEL_DTYPE, MODEL_HEADER_END
from .models import LayerEntry, ModelHeader, TrainedModel
from .unet import build_unet

logger = logging.getLogger(__name__)


def save_model(model: TrainedModel, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    state = model.net.state_dict()
    payload = model.parameter_bytes()
    header = ModelHeader(
        format_version=FORMAT_VERSION,
        unet=model.unet,
        train=model.train,
        norm=model.norm,
        history=model.history,
        layers=[LayerEntry(name=name, shape=tuple(t.shape)) for name, t in state.items()],
        digest=sha256_hex(payload),
    )
    path.write_bytes(header.model_dump_json().encode("utf-8") + MODEL_HEADER_END + payload)
    logger.info("Saved model (%d parameter blocks) to %s", len(header.layers), path)
    return path


def load_model(path: Path) -> TrainedModel:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise FormatError(f"Cannot read {path}: {e}") from e
    end = raw.find(MODEL_HEADER_END)
    if end < 0:
        raise TruncatedFileError(f"{path}: no header terminator")
    try:
        doc = json.loads(raw[:end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(f"{path}: unreadable header: {e}") from e
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: header is not a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise VersionMismatchError(f"{path}: format_version {doc.get('format_version')!r}, expected {FORMAT_VERSION}")
    try:
        header = ModelHeader.model_validate(doc)
    except ValidationError as e:
        raise FormatError(f"{path}: invalid model header: {e}") from e

    payload = raw[end + len(MODEL_HEADER_END) :]
    itemsize = np.dtype(MODEL_DTYPE).itemsize
    expected = sum(int(np.prod(entry.shape)) for entry in header.layers) * itemsize
    if len(payload) < expected:
        raise TruncatedFileError(f"{path}: {len(payload)} parameter bytes, expected {expected}")
    if len(payload) > expected:
        raise FormatError(f"{path}: {len(payload)} parameter bytes, expected {expected}")
    if sha256_hex(payload) != header.digest:
        raise DigestMismatchError(f"{path}: parameter bytes do not match the recorded digest")

    net = build_unet(header.unet, seed=0)
    expected_names = list(net.state_dict().keys())
    if [entry.name for entry in header.layers] != expected_names:
        raise FormatError(f"{path}: layer manifest does not match the configured network")
    state = OrderedDict()
    offset = 0
    for entry in header.layers:
        count = int(np.prod(entry.shape))
        block = np.frombuffer(payload, dtype=MODEL_DTYPE, count=count, offset=offset)
        state[entry.name] = torch.from_numpy(block.astype(np.float32).reshape(entry.shape))
        offset += count * itemsize
    try:
        net.load_state_dict(state)
    except RuntimeError as e:
        raise FormatError(f"{path}: {e}") from e
    net.eval()
    return TrainedModel(net=net, norm=header.norm, unet=header.unet, train=header.train, history=header.history)
