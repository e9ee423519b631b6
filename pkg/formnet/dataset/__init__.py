"""Synthetic (ΔL, ΔT) datasets: generation, splitting, normalization and storage."""

from .generator import generate_dataset, sample_difference_topography
from .models import Dataset, DatasetMeta, NormStats, SamplingConfig, content_digest
from .normalization import (
    compute_norm_stats,
    denormalize_inputs,
    denormalize_targets,
    normalize_inputs,
    normalize_targets,
)
from .split import split_dataset, split_indices, subset
from .storage import load_dataset, save_dataset

__all__ = [
    "Dataset",
    "DatasetMeta",
    "NormStats",
    "SamplingConfig",
    "content_digest",
    "generate_dataset",
    "sample_difference_topography",
    "split_dataset",
    "split_indices",
    "subset",
    "compute_norm_stats",
    "normalize_inputs",
    "denormalize_inputs",
    "normalize_targets",
    "denormalize_targets",
    "save_dataset",
    "load_dataset",
]
