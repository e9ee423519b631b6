"""
Pydantic models for evaluation artifacts.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from formnet.jsonio import FORMAT_VERSION


class MetricsReport(BaseModel):
    """
    Model error statistics over in-disc pixels (nm), pooled over all samples, with the
    dataset's own deviation statistics (truth vs zero) for comparison.
    """

    model_config = ConfigDict(frozen=True)

    format_version: int = FORMAT_VERSION
    label: str = "perfect"
    rmse_nm: float
    median_abs_nm: float
    deviation_rmse_nm: float
    deviation_median_abs_nm: float
    per_sample_rmse_nm: List[float]
    per_sample_median_abs_nm: List[float]
    n_samples: int
    n_pixels: int
    dataset_digest: str
    model_digest: str

    @model_validator(mode="after")
    def _check(self) -> "MetricsReport":
        if min(self.rmse_nm, self.median_abs_nm, self.deviation_rmse_nm, self.deviation_median_abs_nm) < 0:
            raise ValueError("error statistics must be >= 0")
        if self.n_samples <= 0 or self.n_pixels <= 0:
            raise ValueError("sample and pixel counts must be > 0")
        if len(self.per_sample_rmse_nm) != self.n_samples or len(self.per_sample_median_abs_nm) != self.n_samples:
            raise ValueError("per-sample lists need one entry per sample")
        return self


class ComparisonTable(BaseModel):
    """Perfect / disturbed (no calibration) / calibrated evaluations of one model."""

    format_version: int = FORMAT_VERSION
    columns: Dict[str, MetricsReport]


class LearningCurveRow(BaseModel):
    fraction: float
    n_train: int
    single_rmse_nm: float
    ensemble_rmse_nm: float
    single_mse: float
    mean_member_mse: float
    ensemble_mse: float


class HeatmapScale(BaseModel):
    format_version: int = FORMAT_VERSION
    min_nm: float
    max_nm: float
    maxval: int
    label: Optional[str] = None
