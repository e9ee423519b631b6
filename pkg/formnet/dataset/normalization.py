"""
Mask-preserving normalization.
Statistics come from the training set only; pixels outside a mask are zero after normalization
and after denormalization.
"""

import logging

import numpy as np

from formnet.errors import DegenerateChannelError

from .models import Dataset, NormStats

logger = logging.getLogger(__name__)


def compute_norm_stats(train: Dataset) -> NormStats:
    masks = train.input_masks()
    disc = train.target_mask()
    means, stds = [], []
    for k in range(train.meta.K):
        v = train.inputs[:, k][:, masks[k]].astype(np.float64)
        std = float(v.std()) if v.size else 0.0
        if not std > 0.0:
            raise DegenerateChannelError(f"Input channel {k} has zero variance over the training set", channel=str(k))
        means.append(float(v.mean()))
        stds.append(std)
    t = train.targets[:, disc].astype(np.float64)
    t_std = float(t.std()) if t.size else 0.0
    if not t_std > 0.0:
        raise DegenerateChannelError("Targets have zero variance over the training set", channel="target")
    stats = NormStats(input_mean=means, input_std=stds, target_mean=float(t.mean()), target_std=t_std)
    logger.debug("Norm stats: input_std=%s target_std=%.3f", [round(s, 3) for s in stds], t_std)
    return stats


def _per_channel(values, K: int) -> np.ndarray:
    return np.asarray(values, dtype=np.float64).reshape(K, 1, 1)


def normalize_inputs(inputs: np.ndarray, masks: np.ndarray, stats: NormStats) -> np.ndarray:
    """inputs (..., K, M, M) in nm → normalized float32."""
    mean = _per_channel(stats.input_mean, stats.K)
    std = _per_channel(stats.input_std, stats.K)
    out = np.where(masks, (inputs.astype(np.float64) - mean) / std, 0.0)
    return out.astype(np.float32)


def denormalize_inputs(inputs: np.ndarray, masks: np.ndarray, stats: NormStats) -> np.ndarray:
    mean = _per_channel(stats.input_mean, stats.K)
    std = _per_channel(stats.input_std, stats.K)
    out = np.where(masks, inputs.astype(np.float64) * std + mean, 0.0)
    return out.astype(np.float32)


def normalize_targets(targets: np.ndarray, disc: np.ndarray, stats: NormStats) -> np.ndarray:
    out = np.where(disc, (targets.astype(np.float64) - stats.target_mean) / stats.target_std, 0.0)
    return out.astype(np.float32)


def denormalize_targets(targets: np.ndarray, disc: np.ndarray, stats: NormStats) -> np.ndarray:
    """Normalized network output (..., M, M) → nm, zero outside the disc."""
    out = np.where(disc, targets.astype(np.float64) * stats.target_std + stats.target_mean, 0.0)
    return out.astype(np.float32)
