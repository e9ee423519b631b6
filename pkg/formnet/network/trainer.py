"""
Training: exact loss gradients, mini-batch Adam with step decay, ensembles, and the
finite-difference gradient check.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
import torch

from formnet.dataset import Dataset, NormStats, normalize_inputs, normalize_targets
from formnet.errors import InvalidInputError, InvalidShapeError, NumericFailureError

from .config import FD_ABS_THRESHOLD, FD_STEP
from .layers import mse_loss
from .models import EpochRecord, TrainConfig, TrainedModel, TrainHistory, UNetConfig
from .optim import AdamState, adam_step, lr_at_epoch
from .unet import UNet, build_unet, unet_forward

logger = logging.getLogger(__name__)


def normalized_tensors(ds: Dataset, norm: NormStats, dtype: torch.dtype = torch.float32) -> Tuple[torch.Tensor, torch.Tensor]:
    """Normalized inputs [N, K, M, M] and targets [N, 1, M, M]."""
    x = normalize_inputs(ds.inputs, ds.input_masks(), norm)
    y = normalize_targets(ds.targets, ds.target_mask(), norm)
    return torch.from_numpy(x).to(dtype), torch.from_numpy(y[:, None]).to(dtype)


def batch_loss(net: UNet, inputs: torch.Tensor, targets: torch.Tensor, lam: float) -> torch.Tensor:
    return mse_loss(unet_forward(net, inputs), targets, net.weights(), lam)


def loss_gradient(net: UNet, inputs: torch.Tensor, targets: torch.Tensor, lam: float) -> Tuple[float, List[torch.Tensor]]:
    """Loss value and ∂loss/∂Φ, one tensor per entry of net.parameters()."""
    params = list(net.parameters())
    loss = batch_loss(net, inputs, targets, lam)
    if not torch.isfinite(loss):
        raise NumericFailureError("Loss is not finite")
    grads = torch.autograd.grad(loss, params)
    for g in grads:
        if not torch.isfinite(g).all():
            raise NumericFailureError("Gradient is not finite")
    return float(loss.detach()), list(grads)


def gradient_check(
    net: UNet, inputs: torch.Tensor, targets: torch.Tensor, lam: float, step: float = FD_STEP
) -> float:
    """
    Max error of loss_gradient against central differences over every parameter entry.
    Relative error where |analytic| >= FD_ABS_THRESHOLD, absolute below it. Run in float64.
    """
    _, grads = loss_gradient(net, inputs, targets, lam)
    worst = 0.0
    with torch.no_grad():
        for p, g in zip(net.parameters(), grads):
            flat, gflat = p.view(-1), g.reshape(-1)
            for i in range(flat.numel()):
                orig = flat[i].item()
                flat[i] = orig + step
                plus = batch_loss(net, inputs, targets, lam).item()
                flat[i] = orig - step
                minus = batch_loss(net, inputs, targets, lam).item()
                flat[i] = orig
                fd = (plus - minus) / (2.0 * step)
                analytic = gflat[i].item()
                diff = abs(analytic - fd)
                if abs(analytic) >= FD_ABS_THRESHOLD:
                    diff /= max(abs(analytic), abs(fd))
                worst = max(worst, diff)
    return worst


def train(net: UNet, train_ds: Dataset, norm: NormStats, tc: TrainConfig) -> Tuple[UNet, TrainHistory]:
    """
    Seeded epoch shuffling, mini-batches in order with the final partial batch kept,
    then per batch loss_gradient followed by one adam_step at lr_at_epoch.
    Updates `net` in place and returns it.
    """
    if train_ds.meta.K != net.cfg.in_channels:
        raise InvalidShapeError(f"Dataset has {train_ds.meta.K} channels, network expects {net.cfg.in_channels}")
    net.cfg.check_spatial(train_ds.meta.M)
    dtype = next(net.parameters()).dtype
    x, y = normalized_tensors(train_ds, norm, dtype)
    n = x.shape[0]
    rng = np.random.default_rng(tc.seed)
    params = list(net.parameters())
    state = AdamState.fresh([p.detach() for p in params])
    history = TrainHistory()
    step = 0
    net.train()
    for epoch in range(tc.epochs):
        started = time.perf_counter()
        lr = lr_at_epoch(tc, epoch)
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, tc.batch_size):
            idx = torch.from_numpy(order[start : start + tc.batch_size])
            try:
                loss, grads = loss_gradient(net, x[idx], y[idx], tc.weight_decay)
            except NumericFailureError as e:
                raise NumericFailureError(f"Training step {step}: {e}", step=step) from e
            with torch.no_grad():
                updated, state = adam_step(
                    [p.detach() for p in params], grads, state, lr, beta1=tc.beta1, beta2=tc.beta2, eps=tc.eps
                )
                for p, new in zip(params, updated):
                    p.copy_(new)
            total += loss * idx.numel()
            step += 1
        record = EpochRecord(epoch=epoch, loss=total / n, lr=lr, seconds=time.perf_counter() - started)
        history.records.append(record)
        logger.info("Epoch %d/%d loss=%.6f lr=%.3g (%.1fs)", epoch + 1, tc.epochs, record.loss, lr, record.seconds)
    net.eval()
    return net, history


def train_model(train_ds: Dataset, norm: NormStats, unet_cfg: UNetConfig, tc: TrainConfig) -> TrainedModel:
    """Build with tc.seed and train."""
    net = build_unet(unet_cfg, tc.seed, input_size=train_ds.meta.M)
    net, history = train(net, train_ds, norm, tc)
    return TrainedModel(net=net, norm=norm, unet=unet_cfg, train=tc, history=history)


def train_ensemble(
    train_ds: Dataset,
    norm: NormStats,
    unet_cfg: UNetConfig,
    tc: TrainConfig,
    members: int,
    workers: Optional[int] = 1,
) -> List[TrainedModel]:
    """Member i is built and shuffled with seed tc.seed + i; members train independently."""
    if members < 1:
        raise InvalidInputError(f"members must be >= 1, got {members}")
    configs = [tc.model_copy(update={"seed": tc.seed + i}) for i in range(members)]

    def work(member_tc: TrainConfig) -> TrainedModel:
        logger.info("Training ensemble member seed=%d", member_tc.seed)
        return train_model(train_ds, norm, unet_cfg, member_tc)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(work, configs))
    return [work(c) for c in configs]
