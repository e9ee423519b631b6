"""
Model evaluation, metrics reports and the perfect / disturbed / calibrated comparison table.
Each report is JSON plus a companion plain-text table rendered with rich.
"""

import io
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import numpy as np
from rich import box
from rich.console import Console
from rich.table import Table

from formnet.dataset import Dataset
from formnet.errors import InvalidShapeError
from formnet.jsonio import read_model, write_model
from formnet.network import TrainedModel, ensemble_predict_batch, predict_batch
from formnet.surfaces import disc_mask

from .config import COMPARISON_COLUMNS, REPORT_TABLE_SUFFIX, TABLE_WIDTH
from .metrics import median_abs_in_disc, per_sample_statistics, rmse_in_disc
from .models import ComparisonTable, MetricsReport

logger = logging.getLogger(__name__)

ModelLike = Union[TrainedModel, Sequence[TrainedModel]]


def _members(model: ModelLike) -> Sequence[TrainedModel]:
    return [model] if isinstance(model, TrainedModel) else list(model)


def model_digest(model: ModelLike) -> str:
    digests = [m.digest() for m in _members(model)]
    return digests[0] if len(digests) == 1 else "ensemble:" + ",".join(digests)


def predict_dataset(model: ModelLike, inputs: np.ndarray, masks: np.ndarray, workers: int = 1) -> np.ndarray:
    """Predictions [N, M, M] in nm; chunks are evaluated in parallel and reassembled in order."""
    members = _members(model)
    if workers <= 1 or inputs.shape[0] < 2:
        return ensemble_predict_batch(members, inputs, masks)
    chunks = np.array_split(np.arange(inputs.shape[0]), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda idx: ensemble_predict_batch(members, inputs[idx], masks), chunks))
    return np.concatenate(parts, axis=0)


def evaluate(
    model: ModelLike,
    dataset: Dataset,
    inputs: Optional[np.ndarray] = None,
    label: str = "perfect",
    workers: int = 1,
) -> MetricsReport:
    """
    Predict every sample of `dataset` and compare with its targets over in-disc pixels.
    `inputs` replaces the dataset's ΔL (disturbed or hybrid inputs for the same targets).
    An ensemble (sequence of models) is evaluated on its mean prediction.
    """
    members = _members(model)
    x = dataset.inputs if inputs is None else inputs
    if x.shape != dataset.inputs.shape:
        raise InvalidShapeError(f"Inputs {x.shape} do not match dataset inputs {dataset.inputs.shape}")
    if members[0].unet.in_channels != dataset.meta.K:
        raise InvalidShapeError(f"Model expects {members[0].unet.in_channels} channels, dataset has {dataset.meta.K}")
    preds = predict_dataset(members, x, dataset.input_masks(), workers=workers)
    truths = dataset.targets.astype(np.float64)
    zeros = np.zeros_like(truths)
    per_rmse, per_median = per_sample_statistics(preds, truths)
    report = MetricsReport(
        label=label,
        rmse_nm=rmse_in_disc(preds, truths),
        median_abs_nm=median_abs_in_disc(preds, truths),
        deviation_rmse_nm=rmse_in_disc(zeros, truths),
        deviation_median_abs_nm=median_abs_in_disc(zeros, truths),
        per_sample_rmse_nm=per_rmse.tolist(),
        per_sample_median_abs_nm=per_median.tolist(),
        n_samples=dataset.N,
        n_pixels=dataset.N * int(disc_mask(dataset.meta.M).sum()),
        dataset_digest=dataset.digest,
        model_digest=model_digest(members),
    )
    logger.info(
        "Evaluated %s on %d samples: RMSE %.2f nm, median %.2f nm (deviation RMSE %.2f nm)",
        label, report.n_samples, report.rmse_nm, report.median_abs_nm, report.deviation_rmse_nm,
    )
    return report


def render_table(columns: Dict[str, MetricsReport], title: Optional[str] = None) -> str:
    """Aligned plain text: one column per report, rows RMSE and Median (nm)."""
    table = Table(title=title, box=box.SIMPLE, show_header=True)
    table.add_column("Metric")
    for name in columns:
        table.add_column(name, justify="right")
    table.add_row("RMSE", *(f"{r.rmse_nm:.2f}" for r in columns.values()))
    table.add_row("Median", *(f"{r.median_abs_nm:.2f}" for r in columns.values()))
    buffer = io.StringIO()
    Console(file=buffer, width=TABLE_WIDTH, color_system=None, force_terminal=False).print(table)
    return buffer.getvalue()


def _write_table_text(text: str, path: Path) -> Path:
    table_path = Path(path).with_suffix(REPORT_TABLE_SUFFIX)
    table_path.write_text(text, encoding="utf-8")
    return table_path


def write_report(report: MetricsReport, path: Path) -> Path:
    """JSON report at `path` and its text table next to it; the two digests are listed below the table."""
    path = write_model(report, path)
    deviation = report.model_copy(
        update={"rmse_nm": report.deviation_rmse_nm, "median_abs_nm": report.deviation_median_abs_nm}
    )
    text = render_table({"model": report, "deviation": deviation}, title=f"{report.label} (nm)")
    text += f"dataset digest: {report.dataset_digest}\nmodel digest:   {report.model_digest}\n"
    _write_table_text(text, path)
    return path


def read_report(path: Path) -> MetricsReport:
    return read_model(path, MetricsReport)


def write_comparison_table(reports: Dict[str, MetricsReport], path: Path) -> Path:
    """Three-column table in the order perfect, disturbed, calibrated (columns present in `reports`)."""
    ordered = {name: reports[name] for name in COMPARISON_COLUMNS if name in reports}
    ordered.update({k: v for k, v in reports.items() if k not in ordered})
    path = write_model(ComparisonTable(columns=ordered), path)
    _write_table_text(render_table(ordered, title="Prediction error (nm)"), path)
    return path


def read_comparison_table(path: Path) -> ComparisonTable:
    return read_model(path, ComparisonTable)
