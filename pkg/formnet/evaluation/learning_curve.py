"""
Prediction error against the amount of training data, for single networks and ensembles.
"""

import csv
import logging
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from formnet.dataset import Dataset, compute_norm_stats, subset
from formnet.errors import InvalidInputError
from formnet.network import TrainConfig, UNetConfig, train_ensemble

from .config import DEFAULT_ENSEMBLE_SIZE, LEARNING_CURVE_HEADER
from .metrics import mse_in_disc
from .models import LearningCurveRow
from .report import predict_dataset

logger = logging.getLogger(__name__)


def _check_fractions(fractions: Sequence[float]) -> None:
    if not fractions:
        raise InvalidInputError("At least one fraction is required")
    if any(not 0.0 < f <= 1.0 for f in fractions):
        raise InvalidInputError(f"Fractions must lie in (0, 1], got {list(fractions)}")
    if list(fractions) != sorted(fractions):
        raise InvalidInputError(f"Fractions must be sorted ascending, got {list(fractions)}")


def learning_curve(
    train_pool: Dataset,
    test: Dataset,
    fractions: Sequence[float],
    unet_cfg: UNetConfig,
    tc: TrainConfig,
    ensemble_size: int = DEFAULT_ENSEMBLE_SIZE,
    seed: Optional[int] = None,
    workers: int = 1,
) -> List[LearningCurveRow]:
    """
    For each fraction, train an ensemble on the first round(f·n) samples of one seeded
    permutation of `train_pool` (so smaller subsets are nested in larger ones) and evaluate
    on the fixed `test` set. The single-network column is the member trained with tc.seed.
    """
    _check_fractions(fractions)
    seed = tc.seed if seed is None else seed
    order = np.random.default_rng(seed).permutation(train_pool.N)
    masks = test.input_masks()
    truths = test.targets.astype(np.float64)
    rows = []
    for fraction in fractions:
        n_train = max(1, int(np.floor(fraction * train_pool.N + 0.5)))
        part = subset(train_pool, np.sort(order[:n_train]))
        norm = compute_norm_stats(part)
        members = train_ensemble(part, norm, unet_cfg, tc, ensemble_size, workers=workers)
        member_preds = [predict_dataset(m, test.inputs, masks) for m in members]
        member_mse = [mse_in_disc(p, truths) for p in member_preds]
        ensemble_pred = np.mean(np.stack(member_preds), axis=0)
        ensemble_mse = mse_in_disc(ensemble_pred, truths)
        row = LearningCurveRow(
            fraction=fraction,
            n_train=n_train,
            single_rmse_nm=float(np.sqrt(member_mse[0])),
            ensemble_rmse_nm=float(np.sqrt(ensemble_mse)),
            single_mse=member_mse[0],
            mean_member_mse=float(np.mean(member_mse)),
            ensemble_mse=ensemble_mse,
        )
        logger.info(
            "Learning curve f=%.2f (n=%d): single %.2f nm, ensemble %.2f nm",
            fraction, n_train, row.single_rmse_nm, row.ensemble_rmse_nm,
        )
        rows.append(row)
    return rows


def write_learning_curve(rows: Sequence[LearningCurveRow], path: Path) -> Path:
    """Comma-separated text with a header row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(LEARNING_CURVE_HEADER)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in (getattr(row, c) for c in LEARNING_CURVE_HEADER)])
    return path


def read_learning_curve(path: Path) -> List[LearningCurveRow]:
    with Path(path).open(newline="", encoding="utf-8") as f:
        return [LearningCurveRow.model_validate(r) for r in csv.DictReader(f)]
