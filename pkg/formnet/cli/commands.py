"""
formnet command-line interface.

Every command is a pure function of its flags and seeds, writes a run manifest next to its
output, and exits 0 on success, 2 on invalid flags or config, 3 on numeric failure and
4 on I/O or format errors.
"""

import functools
import logging
from pathlib import Path
from typing import Annotated, List, Optional

import torch
import typer
from pydantic import ValidationError
from rich import box
from rich.console import Console
from rich.table import Table

from config.toolkit_settings import ToolkitSettings
from formnet.audit import configure_audit
from formnet.calibration import (
    disturbed_inputs,
    estimate_disturbance,
    generate_calibration_set,
    hybrid_inputs,
    load_estimate,
    save_estimate,
)
from formnet.calibration.config import DEFAULT_AMPLITUDES_NM
from formnet.dataset import (
    SamplingConfig,
    compute_norm_stats,
    generate_dataset,
    load_dataset,
    save_dataset,
    split_dataset,
    subset,
)
from formnet.dataset.config import (
    SAMPLING_J_MAX,
    SAMPLING_J_MIN,
    SAMPLING_RMS_MAX_NM,
    SAMPLING_RMS_MIN_NM,
)
from formnet.errors import FormnetError, InvalidConfigError, InvalidInputError
from formnet.evaluation import (
    emit_heatmap,
    evaluate,
    learning_curve,
    render_table,
    rmse_in_disc,
    write_comparison_table,
    write_learning_curve,
    write_report,
)
from formnet.evaluation.config import DEFAULT_ENSEMBLE_SIZE, DEFAULT_FRACTIONS
from formnet.network import (
    TrainConfig,
    UNetConfig,
    count_parameters,
    count_weighted_layers,
    load_model,
    predict,
    save_model,
    train_ensemble,
    train_model,
)
from formnet.optics import (
    DesignId,
    default_forward_config,
    load_disturbance,
    sample_disturbance,
    save_disturbance,
)
from formnet.optics.config import DEFAULT_BETA, DEFAULT_GRID_SIZE, DEFAULT_J_DIST

from .config import DEFAULT_SCALE, DEFAULT_WORKERS, DISTURBED_EVAL_SAMPLES, TEST_FRACTION, get_preset
from .manifest import RunManifest, write_manifest
from .reproduce import run_reproduce

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="formnet",
    help="Virtual optical form measurement: simulate, calibrate, train and evaluate U-Net surface reconstruction",
    add_completion=False,
    no_args_is_help=True,
)

console = Console()

DesignOpt = Annotated[DesignId, typer.Option("--design", help="Design topography")]
SeedOpt = Annotated[int, typer.Option("--seed", help="Random seed (required)")]
ScaleOpt = Annotated[str, typer.Option("--scale", help="Preset: desk or paper")]
WorkersOpt = Annotated[int, typer.Option("--workers", min=1, help="Parallel workers; results do not depend on it")]
GridOpt = Annotated[int, typer.Option("--grid-size", help="Grid size M")]
BetaOpt = Annotated[float, typer.Option("--beta", help="Quadratic OPD coefficient (1/nm)")]
DepthOpt = Annotated[Optional[int], typer.Option("--depth", help="U-Net depth D (default from scale)")]
WidthOpt = Annotated[Optional[int], typer.Option("--base-width", help="U-Net base width C0 (default from scale)")]
EpochsOpt = Annotated[Optional[int], typer.Option("--epochs", help="Training epochs (default from scale)")]
BatchOpt = Annotated[Optional[int], typer.Option("--batch-size", help="Mini-batch size (default from scale)")]
Lr0Opt = Annotated[Optional[float], typer.Option("--lr0", help="Initial learning rate (default from scale)")]
DropFactorOpt = Annotated[Optional[float], typer.Option("--drop-factor", help="Learning-rate drop factor (default from scale)")]
DropPeriodOpt = Annotated[Optional[int], typer.Option("--drop-period", help="Epochs between learning-rate drops (default from scale)")]
DecayOpt = Annotated[Optional[float], typer.Option("--weight-decay", help="L2 weight penalty lambda (default from scale)")]


def configure_logging(level: Optional[str] = None) -> ToolkitSettings:
    settings = ToolkitSettings()
    name = (level or settings.LOG_LEVEL).upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
    logging.getLogger().setLevel(getattr(logging, name, logging.INFO))
    configure_audit(settings)
    return settings


@app.callback()
def main_callback(
    log_level: Annotated[Optional[str], typer.Option("--log-level", help="Override LOG_LEVEL")] = None,
):
    configure_logging(log_level)
    # intra-op threading stays fixed so numeric results are independent of --workers
    torch.set_num_threads(1)


def exit_on_error(fn):
    """Map toolkit errors to exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FormnetError as e:
            logger.error("%s", e)
            console.print(f"error: {e}", style="red", markup=False)
            raise typer.Exit(code=e.exit_code)
        except ValidationError as e:
            logger.error("Invalid configuration: %s", e)
            console.print(f"error: invalid configuration: {e}", style="red", markup=False)
            raise typer.Exit(code=InvalidInputError.exit_code)
        except OSError as e:
            logger.error("I/O error: %s", e)
            console.print(f"error: {e}", style="red", markup=False)
            raise typer.Exit(code=4)
        except (typer.Exit, typer.Abort):
            raise
        except Exception as e:
            logger.exception("Unexpected error in %s", fn.__name__)
            console.print(f"error: {e}", style="red", markup=False)
            raise typer.Exit(code=1)

    return wrapper


def _train_configs(
    design: DesignId,
    in_channels: int,
    scale: str,
    seed: int,
    depth: Optional[int],
    base_width: Optional[int],
    epochs: Optional[int],
    batch_size: Optional[int],
    lr0: Optional[float],
    drop_factor: Optional[float],
    drop_period: Optional[int],
    weight_decay: Optional[float],
) -> tuple[UNetConfig, TrainConfig]:
    preset = get_preset(scale)
    unet_cfg = preset.unet_config(in_channels, depth, base_width)
    tc = preset.train_config(
        design,
        seed,
        epochs=epochs,
        batch_size=batch_size,
        lr0=lr0,
        drop_factor=drop_factor,
        drop_period=drop_period,
        weight_decay=weight_decay,
    )
    return unet_cfg, tc


def _parse_floats(text: str, flag: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidConfigError(f"{flag} expects comma-separated numbers, got {text!r}") from None


@app.command("gen-data")
@exit_on_error
def gen_data(
    out: Annotated[Path, typer.Option("--out", help="Dataset directory")],
    seed: SeedOpt,
    design: DesignOpt = DesignId.FREEFORM,
    scale: ScaleOpt = DEFAULT_SCALE,
    n: Annotated[Optional[int], typer.Option("--n", help="Number of samples (default from scale)")] = None,
    grid_size: GridOpt = DEFAULT_GRID_SIZE,
    beta: BetaOpt = DEFAULT_BETA,
    j_min: Annotated[int, typer.Option("--j-min")] = SAMPLING_J_MIN,
    j_max: Annotated[int, typer.Option("--j-max")] = SAMPLING_J_MAX,
    rms_min: Annotated[float, typer.Option("--rms-min", help="nm")] = SAMPLING_RMS_MIN_NM,
    rms_max: Annotated[float, typer.Option("--rms-max", help="nm")] = SAMPLING_RMS_MAX_NM,
    workers: WorkersOpt = DEFAULT_WORKERS,
):
    """Generate a perfect-system (ΔL, ΔT) dataset."""
    n = get_preset(scale).sample_count(n)
    cfg = default_forward_config(design, grid_size, beta)
    sampling = SamplingConfig(j_min=j_min, j_max=j_max, rms_min_nm=rms_min, rms_max_nm=rms_max)
    ds = generate_dataset(design, n, seed, cfg, sampling, workers=workers)
    save_dataset(ds, out)
    manifest = RunManifest(
        command="gen-data",
        flags={"design": design.value, "scale": scale, "n": n, "grid_size": grid_size, "beta": beta,
               "sampling": sampling.model_dump(), "workers": workers},
        seeds={"data": seed},
        config_digests={"forward_config": cfg.digest(), "dataset": ds.digest},
        artifacts=[str(out)],
    )
    write_manifest(manifest, out)
    console.print(f"Generated {n} samples ({design.value}, M={grid_size}, K={cfg.K}) → {out}")


@app.command()
@exit_on_error
def split(
    data: Annotated[Path, typer.Option("--data", help="Dataset directory")],
    train_out: Annotated[Path, typer.Option("--train-out")],
    test_out: Annotated[Path, typer.Option("--test-out")],
    seed: SeedOpt,
    test_frac: Annotated[float, typer.Option("--test-frac")] = TEST_FRACTION,
):
    """Seeded train/test partition of a dataset."""
    ds = load_dataset(data)
    train_ds, test_ds = split_dataset(ds, test_frac, seed)
    save_dataset(train_ds, train_out)
    save_dataset(test_ds, test_out)
    manifest = RunManifest(
        command="split",
        flags={"data": str(data), "test_frac": test_frac},
        seeds={"split": seed},
        config_digests={"dataset": ds.digest, "train": train_ds.digest, "test": test_ds.digest},
        artifacts=[str(train_out), str(test_out)],
    )
    write_manifest(manifest, train_out)
    console.print(f"Split {ds.N} samples into {train_ds.N} train / {test_ds.N} test")


@app.command()
@exit_on_error
def train(
    data: Annotated[Path, typer.Option("--data", help="Training dataset directory")],
    out: Annotated[Path, typer.Option("--out", help="Model file")],
    seed: SeedOpt,
    scale: ScaleOpt = DEFAULT_SCALE,
    depth: DepthOpt = None,
    base_width: WidthOpt = None,
    epochs: EpochsOpt = None,
    batch_size: BatchOpt = None,
    lr0: Lr0Opt = None,
    drop_factor: DropFactorOpt = None,
    drop_period: DropPeriodOpt = None,
    weight_decay: DecayOpt = None,
):
    """Train one U-Net on a dataset."""
    ds = load_dataset(data)
    unet_cfg, tc = _train_configs(
        ds.meta.forward_config.design, ds.meta.K, scale, seed, depth, base_width, epochs, batch_size,
        lr0, drop_factor, drop_period, weight_decay,
    )
    norm = compute_norm_stats(ds)
    model = train_model(ds, norm, unet_cfg, tc)
    save_model(model, out)
    manifest = RunManifest(
        command="train",
        flags={"data": str(data), "scale": scale, "unet": unet_cfg.model_dump(), "train": tc.model_dump()},
        seeds={"train": seed},
        config_digests={"dataset": ds.digest, "model": model.digest()},
        artifacts=[str(out)],
    )
    write_manifest(manifest, out)
    console.print(
        f"Trained U-Net ({count_weighted_layers(unet_cfg)} weighted layers, "
        f"{count_parameters(model.net)} parameters), final loss {model.history.losses[-1]:.6f} → {out}"
    )


@app.command("ensemble-train")
@exit_on_error
def ensemble_train(
    data: Annotated[Path, typer.Option("--data", help="Training dataset directory")],
    out_dir: Annotated[Path, typer.Option("--out-dir", help="Directory for member model files")],
    seed: SeedOpt,
    members: Annotated[int, typer.Option("--members", min=1)] = DEFAULT_ENSEMBLE_SIZE,
    scale: ScaleOpt = DEFAULT_SCALE,
    depth: DepthOpt = None,
    base_width: WidthOpt = None,
    epochs: EpochsOpt = None,
    batch_size: BatchOpt = None,
    lr0: Lr0Opt = None,
    drop_factor: DropFactorOpt = None,
    drop_period: DropPeriodOpt = None,
    weight_decay: DecayOpt = None,
    workers: WorkersOpt = DEFAULT_WORKERS,
):
    """Train an ensemble; member i uses seed + i."""
    ds = load_dataset(data)
    unet_cfg, tc = _train_configs(
        ds.meta.forward_config.design, ds.meta.K, scale, seed, depth, base_width, epochs, batch_size,
        lr0, drop_factor, drop_period, weight_decay,
    )
    norm = compute_norm_stats(ds)
    models = train_ensemble(ds, norm, unet_cfg, tc, members, workers=workers)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        command="ensemble-train",
        flags={"data": str(data), "members": members, "scale": scale, "workers": workers,
               "unet": unet_cfg.model_dump(), "train": tc.model_dump()},
        seeds={f"member_{i}": seed + i for i in range(members)},
        config_digests={"dataset": ds.digest},
    )
    for i, model in enumerate(models):
        path = save_model(model, out_dir / f"member_{i:02d}.bin")
        manifest.add_artifact(path)
        manifest.config_digests[f"member_{i}"] = model.digest()
    write_manifest(manifest, out_dir)
    console.print(f"Trained {members} ensemble members → {out_dir}")


@app.command("predict")
@exit_on_error
def predict_command(
    model: Annotated[Path, typer.Option("--model", help="Model file")],
    data: Annotated[Path, typer.Option("--data", help="Dataset directory")],
    out: Annotated[Path, typer.Option("--out", help="Heatmap file (.pgm)")],
    index: Annotated[int, typer.Option("--index", min=0, help="Sample index")] = 0,
):
    """Predict ΔT for one sample and write it as a heatmap."""
    trained = load_model(model)
    ds = load_dataset(data)
    if index >= ds.N:
        raise InvalidInputError(f"--index {index} is out of range for {ds.N} samples")
    pred = predict(trained, ds.delta_opd(index))
    image, sidecar = emit_heatmap(pred, out, label="prediction")
    error = rmse_in_disc([pred], [ds.delta_topography(index)])
    manifest = RunManifest(
        command="predict",
        flags={"model": str(model), "data": str(data), "index": index},
        config_digests={"dataset": ds.digest, "model": trained.digest()},
        artifacts=[str(image), str(sidecar)],
    )
    write_manifest(manifest, out)
    console.print(f"Sample {index}: RMSE {error:.2f} nm → {image}")


@app.command("eval")
@exit_on_error
def eval_command(
    model: Annotated[List[Path], typer.Option("--model", help="Model file; repeat for an ensemble")],
    data: Annotated[Path, typer.Option("--data", help="Test dataset directory")],
    out: Annotated[Path, typer.Option("--out", help="Report file (.json)")],
    label: Annotated[str, typer.Option("--label")] = "perfect",
    workers: WorkersOpt = DEFAULT_WORKERS,
):
    """Evaluate a model (or ensemble) on a dataset."""
    members = [load_model(p) for p in model]
    ds = load_dataset(data)
    report = evaluate(members, ds, label=label, workers=workers)
    path = write_report(report, out)
    manifest = RunManifest(
        command="eval",
        flags={"model": [str(p) for p in model], "data": str(data), "label": label, "workers": workers},
        config_digests={"dataset": ds.digest, "model": report.model_digest},
        artifacts=[str(path), str(path.with_suffix(".txt"))],
    )
    write_manifest(manifest, out)
    _print_reports({label: report})


@app.command()
@exit_on_error
def calibrate(
    out: Annotated[Path, typer.Option("--out", help="Disturbance estimate file (.json)")],
    design: DesignOpt = DesignId.FREEFORM,
    seed: Annotated[Optional[int], typer.Option("--seed", help="Disturbance seed (required without --disturbance)")] = None,
    disturbance: Annotated[Optional[Path], typer.Option("--disturbance", help="True disturbance file")] = None,
    disturbance_out: Annotated[Optional[Path], typer.Option("--disturbance-out", help="Write the sampled disturbance")] = None,
    grid_size: GridOpt = DEFAULT_GRID_SIZE,
    beta: BetaOpt = DEFAULT_BETA,
    j_dist: Annotated[int, typer.Option("--j-dist")] = DEFAULT_J_DIST,
    amplitudes: Annotated[str, typer.Option("--amplitudes", help="Comma-separated cap amplitudes (nm)")] = ",".join(
        str(a) for a in DEFAULT_AMPLITUDES_NM
    ),
):
    """Estimate the system disturbance from measurements of known spherical specimens."""
    cfg = default_forward_config(design, grid_size, beta)
    if disturbance is not None:
        d_true = load_disturbance(disturbance)
    elif seed is not None:
        d_true = sample_disturbance(cfg, seed, j_dist)
    else:
        raise InvalidConfigError("calibrate needs --seed or --disturbance")
    manifest = RunManifest(
        command="calibrate",
        flags={"design": design.value, "grid_size": grid_size, "beta": beta, "j_dist": j_dist,
               "amplitudes": amplitudes, "disturbance": str(disturbance) if disturbance else None},
        seeds={"disturbance": seed} if seed is not None and disturbance is None else {},
        config_digests={"forward_config": cfg.digest()},
    )
    if disturbance_out is not None:
        manifest.add_artifact(save_disturbance(d_true, disturbance_out))
    cal = generate_calibration_set(cfg, d_true, _parse_floats(amplitudes, "--amplitudes"))
    est = estimate_disturbance(cal, cfg, j_dist)
    manifest.add_artifact(save_estimate(est, out))
    write_manifest(manifest, out)

    table = Table(title="Calibration", box=box.SIMPLE)
    table.add_column("Channel", justify="right")
    table.add_column("gain (true)", justify="right")
    table.add_column("gain (est.)", justify="right")
    table.add_column("residual RMS (nm)", justify="right")
    for k in range(est.K):
        table.add_row(str(k), f"{d_true.gains[k]:+.6f}", f"{est.gains[k]:+.6f}", f"{est.residual_rms[k]:.3e}")
    console.print(table)


@app.command("hybrid-eval")
@exit_on_error
def hybrid_eval(
    model: Annotated[List[Path], typer.Option("--model", help="Model file; repeat for an ensemble")],
    data: Annotated[Path, typer.Option("--data", help="Test dataset directory")],
    disturbance: Annotated[Path, typer.Option("--disturbance", help="True disturbance file")],
    estimate: Annotated[Path, typer.Option("--estimate", help="Disturbance estimate file")],
    out: Annotated[Path, typer.Option("--out", help="Comparison table file (.json)")],
    limit: Annotated[int, typer.Option("--limit", min=1, help="Held-out samples to use")] = DISTURBED_EVAL_SAMPLES,
    workers: WorkersOpt = DEFAULT_WORKERS,
):
    """Compare perfect, disturbed (no calibration) and calibrated (hybrid) inputs."""
    members = [load_model(p) for p in model]
    ds = load_dataset(data)
    held_out = subset(ds, range(min(limit, ds.N)))
    cfg = ds.meta.forward_config
    d_true = load_disturbance(disturbance)
    est = load_estimate(estimate)
    reports = {
        "perfect": evaluate(members, held_out, label="perfect", workers=workers),
        "disturbed": evaluate(
            members, held_out, inputs=disturbed_inputs(held_out.targets, cfg, d_true), label="disturbed", workers=workers
        ),
        "calibrated": evaluate(
            members, held_out, inputs=hybrid_inputs(held_out.targets, cfg, d_true, est), label="calibrated", workers=workers
        ),
    }
    path = write_comparison_table(reports, out)
    manifest = RunManifest(
        command="hybrid-eval",
        flags={"model": [str(p) for p in model], "data": str(data), "disturbance": str(disturbance),
               "estimate": str(estimate), "limit": limit, "workers": workers},
        config_digests={"dataset": held_out.digest, "model": reports["perfect"].model_digest},
        artifacts=[str(path), str(path.with_suffix(".txt"))],
    )
    write_manifest(manifest, out)
    _print_reports(reports)


@app.command("learning-curve")
@exit_on_error
def learning_curve_command(
    data: Annotated[Path, typer.Option("--data", help="Training pool dataset directory")],
    test: Annotated[Path, typer.Option("--test", help="Held-out test dataset directory")],
    out: Annotated[Path, typer.Option("--out", help="Learning-curve file (.csv)")],
    seed: SeedOpt,
    fractions: Annotated[str, typer.Option("--fractions", help="Comma-separated, ascending")] = ",".join(
        str(f) for f in DEFAULT_FRACTIONS
    ),
    members: Annotated[int, typer.Option("--members", min=1)] = DEFAULT_ENSEMBLE_SIZE,
    scale: ScaleOpt = DEFAULT_SCALE,
    depth: DepthOpt = None,
    base_width: WidthOpt = None,
    epochs: EpochsOpt = None,
    batch_size: BatchOpt = None,
    lr0: Lr0Opt = None,
    drop_factor: DropFactorOpt = None,
    drop_period: DropPeriodOpt = None,
    weight_decay: DecayOpt = None,
    workers: WorkersOpt = DEFAULT_WORKERS,
):
    """Prediction error against training-set fraction, single network and ensemble."""
    pool = load_dataset(data)
    test_ds = load_dataset(test)
    unet_cfg, tc = _train_configs(
        pool.meta.forward_config.design, pool.meta.K, scale, seed, depth, base_width, epochs, batch_size,
        lr0, drop_factor, drop_period, weight_decay,
    )
    rows = learning_curve(
        pool, test_ds, _parse_floats(fractions, "--fractions"), unet_cfg, tc, members, seed=seed, workers=workers
    )
    write_learning_curve(rows, out)
    manifest = RunManifest(
        command="learning-curve",
        flags={"data": str(data), "test": str(test), "fractions": fractions, "members": members, "scale": scale,
               "workers": workers, "unet": unet_cfg.model_dump(), "train": tc.model_dump()},
        seeds={"subsets": seed, "train": seed},
        config_digests={"pool": pool.digest, "test": test_ds.digest},
        artifacts=[str(out)],
    )
    write_manifest(manifest, out)
    table = Table(title="Learning curve (nm)", box=box.SIMPLE)
    for column in ("fraction", "n_train", "single RMSE", "ensemble RMSE"):
        table.add_column(column, justify="right")
    for r in rows:
        table.add_row(f"{r.fraction:.2f}", str(r.n_train), f"{r.single_rmse_nm:.2f}", f"{r.ensemble_rmse_nm:.2f}")
    console.print(table)


@app.command()
@exit_on_error
def reproduce(
    out_dir: Annotated[Path, typer.Option("--out-dir", help="Run directory")],
    seed: SeedOpt,
    design: DesignOpt = DesignId.FREEFORM,
    scale: ScaleOpt = DEFAULT_SCALE,
    workers: WorkersOpt = DEFAULT_WORKERS,
    grid_size: GridOpt = DEFAULT_GRID_SIZE,
    beta: BetaOpt = DEFAULT_BETA,
    n: Annotated[Optional[int], typer.Option("--n", help="Number of samples (default from scale)")] = None,
    epochs: EpochsOpt = None,
    depth: DepthOpt = None,
    base_width: WidthOpt = None,
    j_dist: Annotated[int, typer.Option("--j-dist")] = DEFAULT_J_DIST,
):
    """Full pipeline and the perfect / disturbed / calibrated comparison table."""
    run_reproduce(
        design, out_dir, scale=scale, seed=seed, workers=workers, grid_size=grid_size, beta=beta,
        n_samples=n, epochs=epochs, depth=depth, base_width=base_width, j_dist=j_dist,
    )
    console.print((out_dir / "comparison.txt").read_text(encoding="utf-8"), markup=False)


def _print_reports(reports) -> None:
    console.print(render_table(reports, title="Prediction error (nm)"), markup=False, highlight=False)
