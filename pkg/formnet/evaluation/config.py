"""
Evaluation and report defaults.
"""

HEATMAP_MAXVAL = 65535
HEATMAP_SCALE_SUFFIX = ".scale.json"
REPORT_TABLE_SUFFIX = ".txt"
TABLE_WIDTH = 100

# Column order of the comparison table
COMPARISON_COLUMNS = ("perfect", "disturbed", "calibrated")

DEFAULT_FRACTIONS = (0.1, 0.25, 0.5, 1.0)
DEFAULT_ENSEMBLE_SIZE = 3
LEARNING_CURVE_HEADER = (
    "fraction",
    "n_train",
    "single_rmse_nm",
    "ensemble_rmse_nm",
    "single_mse",
    "mean_member_mse",
    "ensemble_mse",
)
