"""In-disc error metrics, evaluation reports, heatmaps and the learning-curve experiment."""

from .heatmap import emit_heatmap, read_heatmap
from .learning_curve import learning_curve, read_learning_curve, write_learning_curve
from .metrics import in_disc_errors, median_abs_in_disc, mse_in_disc, per_sample_statistics, rmse_in_disc
from .models import ComparisonTable, HeatmapScale, LearningCurveRow, MetricsReport
from .report import (
    evaluate,
    predict_dataset,
    read_comparison_table,
    read_report,
    render_table,
    write_comparison_table,
    write_report,
)

__all__ = [
    "MetricsReport",
    "ComparisonTable",
    "LearningCurveRow",
    "HeatmapScale",
    "in_disc_errors",
    "rmse_in_disc",
    "median_abs_in_disc",
    "mse_in_disc",
    "per_sample_statistics",
    "evaluate",
    "predict_dataset",
    "render_table",
    "write_report",
    "read_report",
    "write_comparison_table",
    "read_comparison_table",
    "emit_heatmap",
    "read_heatmap",
    "learning_curve",
    "write_learning_curve",
    "read_learning_curve",
]
