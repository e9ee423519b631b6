"""
Error metrics over in-disc pixels, accumulated in float64.
"""

from typing import Sequence, Tuple, Union

import numpy as np

from formnet.errors import InvalidInputError, InvalidShapeError
from formnet.surfaces import SurfaceGrid, disc_mask

GridsLike = Union[Sequence[SurfaceGrid], np.ndarray]


def _stack(grids: GridsLike) -> np.ndarray:
    if isinstance(grids, np.ndarray):
        arr = grids.astype(np.float64)
        return arr[None] if arr.ndim == 2 else arr
    return np.stack([g.values for g in grids]).astype(np.float64) if len(grids) else np.zeros((0, 0, 0))


def in_disc_errors(preds: GridsLike, truths: GridsLike) -> np.ndarray:
    """Per-sample in-disc differences pred − truth, shape [N, P]."""
    p, t = _stack(preds), _stack(truths)
    if p.shape[0] != t.shape[0]:
        raise InvalidInputError(f"Got {p.shape[0]} predictions for {t.shape[0]} truths")
    if p.shape[0] == 0:
        raise InvalidInputError("Metrics need at least one sample")
    if p.shape != t.shape:
        raise InvalidShapeError(f"Prediction grids {p.shape[1:]} do not match truth grids {t.shape[1:]}")
    mask = disc_mask(p.shape[-1])
    return (p - t)[:, mask]


def rmse_in_disc(preds: GridsLike, truths: GridsLike) -> float:
    """RMS error pooled over all samples and in-disc pixels."""
    e = in_disc_errors(preds, truths)
    return float(np.sqrt(np.mean(e * e)))


def median_abs_in_disc(preds: GridsLike, truths: GridsLike) -> float:
    """Median of the pooled absolute errors; an even count takes the mean of the middle pair."""
    return float(np.median(np.abs(in_disc_errors(preds, truths))))


def per_sample_statistics(preds: GridsLike, truths: GridsLike) -> Tuple[np.ndarray, np.ndarray]:
    """(per-sample RMSE, per-sample median absolute error)."""
    e = in_disc_errors(preds, truths)
    return np.sqrt(np.mean(e * e, axis=1)), np.median(np.abs(e), axis=1)


def mse_in_disc(preds: GridsLike, truths: GridsLike) -> float:
    e = in_disc_errors(preds, truths)
    return float(np.mean(e * e))
