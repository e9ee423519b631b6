"""
End-to-end pipeline: data → split → train → perfect / disturbed / calibrated evaluation,
comparison table, heatmaps and run manifest. Each stage is audited; a failing stage aborts
with its name and leaves earlier artifacts in place.
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Union

from formnet.audit import log_stage_event
from formnet.calibration import (
    disturbed_inputs,
    estimate_disturbance,
    generate_calibration_set,
    hybrid_inputs,
    save_estimate,
)
from formnet.dataset import (
    compute_norm_stats,
    generate_dataset,
    save_dataset,
    split_dataset,
    subset,
)
from formnet.errors import StageFailedError
from formnet.evaluation import emit_heatmap, evaluate, write_comparison_table, write_report
from formnet.network import predict, save_model, train_model
from formnet.optics import (
    DesignId,
    default_forward_config,
    get_design,
    sample_disturbance,
    save_disturbance,
    save_forward_config,
)
from formnet.optics.config import DEFAULT_BETA, DEFAULT_GRID_SIZE, DEFAULT_J_DIST

from .config import DISTURBED_EVAL_SAMPLES, HEATMAP_SAMPLES, TEST_FRACTION, get_preset
from .manifest import RunManifest, write_manifest

logger = logging.getLogger(__name__)


@contextmanager
def run_stage(run_id: str, stage: str) -> Iterator[None]:
    log_stage_event(run_id, stage, "stage_started")
    try:
        yield
    except StageFailedError:
        raise
    except Exception as e:
        log_stage_event(run_id, stage, "stage_failed", error=str(e), error_type=type(e).__name__)
        logger.error("Stage %s failed: %s", stage, e)
        raise StageFailedError(stage, e) from e
    log_stage_event(run_id, stage, "stage_finished")


def run_reproduce(
    design: Union[str, DesignId],
    out_dir: Path,
    scale: str = "desk",
    seed: int = 0,
    workers: int = 1,
    grid_size: int = DEFAULT_GRID_SIZE,
    beta: float = DEFAULT_BETA,
    n_samples: Optional[int] = None,
    epochs: Optional[int] = None,
    depth: Optional[int] = None,
    base_width: Optional[int] = None,
    j_dist: int = DEFAULT_J_DIST,
    disturbed_samples: int = DISTURBED_EVAL_SAMPLES,
) -> Path:
    """Run the full pipeline into out_dir and return it. Optional sizes override the scale preset."""
    design_id = get_design(design).design_id
    preset = get_preset(scale)
    n_samples = preset.sample_count(n_samples)
    unet_cfg = preset.unet_config(len(get_design(design_id).channels()), depth, base_width)
    tc = preset.train_config(design_id, seed, epochs=epochs)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    run_id = f"reproduce-{design_id.value}-{scale}-{seed}"

    manifest = RunManifest(
        command="reproduce",
        flags={
            "design": design_id.value,
            "scale": scale,
            "workers": workers,
            "grid_size": grid_size,
            "beta": beta,
            "n_samples": n_samples,
            "j_dist": j_dist,
            "disturbed_samples": disturbed_samples,
            "unet": unet_cfg.model_dump(),
            "train": tc.model_dump(),
        },
        seeds={"data": seed, "split": seed, "train": seed, "disturbance": seed},
    )
    log_stage_event(run_id, "run", "run_started", design=design_id.value, scale=scale, seed=seed)

    with run_stage(run_id, "gen-data"):
        cfg = default_forward_config(design_id, grid_size, beta)
        manifest.add_artifact(save_forward_config(cfg, out_dir / "forward_config.json"))
        manifest.config_digests["forward_config"] = cfg.digest()
        dataset = generate_dataset(design_id, n_samples, seed, cfg, workers=workers)
        manifest.add_artifact(save_dataset(dataset, out_dir / "data"))

    with run_stage(run_id, "split"):
        train_ds, test_ds = split_dataset(dataset, TEST_FRACTION, seed)
        manifest.add_artifact(save_dataset(train_ds, out_dir / "train"))
        manifest.add_artifact(save_dataset(test_ds, out_dir / "test"))

    with run_stage(run_id, "train"):
        norm = compute_norm_stats(train_ds)
        model = train_model(train_ds, norm, unet_cfg, tc)
        manifest.add_artifact(save_model(model, out_dir / "model.bin"))
        manifest.config_digests["model"] = model.digest()

    with run_stage(run_id, "evaluate-perfect"):
        full_report = evaluate(model, test_ds, label="perfect", workers=workers)
        report_path = write_report(full_report, out_dir / "report_perfect.json")
        manifest.add_artifact(report_path)
        manifest.add_artifact(report_path.with_suffix(".txt"))
        held_out = subset(test_ds, range(min(disturbed_samples, test_ds.N)))
        perfect = evaluate(model, held_out, label="perfect", workers=workers)

    with run_stage(run_id, "disturbance"):
        d_true = sample_disturbance(cfg, seed, j_dist)
        manifest.add_artifact(save_disturbance(d_true, out_dir / "disturbance.json"))

    with run_stage(run_id, "evaluate-disturbed"):
        x_disturbed = disturbed_inputs(held_out.targets, cfg, d_true)
        disturbed = evaluate(model, held_out, inputs=x_disturbed, label="disturbed", workers=workers)

    with run_stage(run_id, "calibrate"):
        est = estimate_disturbance(generate_calibration_set(cfg, d_true), cfg, j_dist)
        manifest.add_artifact(save_estimate(est, out_dir / "estimate.json"))

    with run_stage(run_id, "evaluate-calibrated"):
        x_hybrid = hybrid_inputs(held_out.targets, cfg, d_true, est)
        calibrated = evaluate(model, held_out, inputs=x_hybrid, label="calibrated", workers=workers)

    with run_stage(run_id, "report"):
        table = write_comparison_table(
            {"perfect": perfect, "disturbed": disturbed, "calibrated": calibrated}, out_dir / "comparison.json"
        )
        manifest.add_artifact(table)
        manifest.add_artifact(table.with_suffix(".txt"))
        for i in range(min(HEATMAP_SAMPLES, held_out.N)):
            for name, grid in (
                ("prediction", predict(model, held_out.delta_opd(i))),
                ("truth", held_out.delta_topography(i)),
            ):
                image, sidecar = emit_heatmap(grid, out_dir / "heatmaps" / f"sample{i}_{name}.pgm", label=name)
                manifest.add_artifact(image)
                manifest.add_artifact(sidecar)

    write_manifest(manifest, out_dir)
    log_stage_event(
        run_id, "run", "run_finished",
        rmse_perfect=perfect.rmse_nm, rmse_disturbed=disturbed.rmse_nm, rmse_calibrated=calibrated.rmse_nm,
    )
    logger.info(
        "Reproduce finished: RMSE perfect %.2f nm, disturbed %.2f nm, calibrated %.2f nm",
        perfect.rmse_nm, disturbed.rmse_nm, calibrated.rmse_nm,
    )
    return out_dir
