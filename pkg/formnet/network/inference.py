"""
Prediction with trained models and ensembles.
"""

import logging
from typing import Sequence

import numpy as np
import torch

from formnet.dataset import denormalize_targets, normalize_inputs
from formnet.errors import InvalidInputError, InvalidShapeError
from formnet.surfaces import OPLField, SurfaceGrid, disc_mask

from .models import TrainedModel
from .unet import unet_forward

logger = logging.getLogger(__name__)

PREDICT_BATCH_SIZE = 64


def predict_batch(model: TrainedModel, inputs: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """ΔL in nm [N, K, M, M] → predicted ΔT in nm [N, M, M] (float32), zero outside the disc."""
    if inputs.ndim != 4 or inputs.shape[1] != model.unet.in_channels:
        raise InvalidShapeError(f"Expected [N, {model.unet.in_channels}, M, M] inputs, got {inputs.shape}")
    M = inputs.shape[-1]
    x = normalize_inputs(inputs, masks, model.norm)
    dtype = next(model.net.parameters()).dtype
    outputs = []
    with torch.no_grad():
        for start in range(0, x.shape[0], PREDICT_BATCH_SIZE):
            batch = torch.from_numpy(x[start : start + PREDICT_BATCH_SIZE]).to(dtype)
            outputs.append(unet_forward(model.net, batch)[:, 0].cpu().numpy())
    out = np.concatenate(outputs, axis=0) if outputs else np.zeros((0, M, M), dtype=np.float32)
    return denormalize_targets(out, disc_mask(M), model.norm)


def predict(model: TrainedModel, delta_L: OPLField) -> SurfaceGrid:
    """Normalize, forward, denormalize; pixels outside the disc are exactly 0."""
    out = predict_batch(model, delta_L.values[None], delta_L.mask)
    return SurfaceGrid(values=out[0])


def ensemble_predict(members: Sequence[TrainedModel], delta_L: OPLField) -> SurfaceGrid:
    """Elementwise mean of member predictions."""
    if not members:
        raise InvalidInputError("An ensemble needs at least one member")
    total = np.zeros((delta_L.M, delta_L.M), dtype=np.float64)
    for member in members:
        total += predict(member, delta_L).values
    return SurfaceGrid(values=total / len(members))


def ensemble_predict_batch(members: Sequence[TrainedModel], inputs: np.ndarray, masks: np.ndarray) -> np.ndarray:
    if not members:
        raise InvalidInputError("An ensemble needs at least one member")
    total = np.zeros((inputs.shape[0],) + inputs.shape[2:], dtype=np.float64)
    for member in members:
        total += predict_batch(member, inputs, masks)
    return total / len(members)
