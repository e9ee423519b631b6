"""
Seeded train/test partition and sub-setting.
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from formnet.errors import InvalidSplitError

from .models import Dataset, content_digest

logger = logging.getLogger(__name__)


def split_indices(N: int, test_frac: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Disjoint, exhaustive (train, test) index arrays, each sorted; test size = round(N·test_frac)."""
    if not 0.0 < test_frac < 1.0:
        raise InvalidSplitError(f"test_frac must lie in (0, 1), got {test_frac}")
    n_test = int(np.floor(N * test_frac + 0.5))
    if n_test == 0 or n_test == N:
        raise InvalidSplitError(f"Split of N={N} with test_frac={test_frac} leaves an empty side")
    perm = np.random.default_rng(seed).permutation(N)
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])


def subset(ds: Dataset, indices: Sequence[int]) -> Dataset:
    idx = np.asarray(indices, dtype=np.int64)
    inputs = ds.inputs[idx]
    targets = ds.targets[idx]
    meta = ds.meta.model_copy(
        update={
            "n_samples": int(idx.size),
            "content_digest": content_digest(inputs, targets),
            "parent_digest": ds.meta.content_digest,
            "source_indices": [int(i) for i in idx],
        }
    )
    return Dataset(inputs=inputs, targets=targets, meta=meta)


def split_dataset(ds: Dataset, test_frac: float, seed: int) -> Tuple[Dataset, Dataset]:
    train_idx, test_idx = split_indices(ds.N, test_frac, seed)
    logger.info("Split %d samples into %d train / %d test (seed=%s)", ds.N, train_idx.size, test_idx.size, seed)
    return subset(ds, train_idx), subset(ds, test_idx)
