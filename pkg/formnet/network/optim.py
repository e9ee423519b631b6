"""
Adam with bias correction and the step-decay learning-rate schedule.
"""

import math
from typing import List, Sequence, Tuple

import torch
from pydantic import BaseModel, ConfigDict

from formnet.errors import InvalidInputError, InvalidShapeError

from .config import ADAM_BETA1, ADAM_BETA2, ADAM_EPS
from .models import TrainConfig


class AdamState(BaseModel):
    """First / second moments per parameter tensor and the step counter t."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: List[torch.Tensor]
    v: List[torch.Tensor]
    t: int = 0

    @classmethod
    def fresh(cls, params: Sequence[torch.Tensor]) -> "AdamState":
        return cls(m=[torch.zeros_like(p) for p in params], v=[torch.zeros_like(p) for p in params], t=0)


def adam_step(
    params: Sequence[torch.Tensor],
    grads: Sequence[torch.Tensor],
    state: AdamState,
    lr: float,
    beta1: float = ADAM_BETA1,
    beta2: float = ADAM_BETA2,
    eps: float = ADAM_EPS,
) -> Tuple[List[torch.Tensor], AdamState]:
    """One functional Adam update; inputs are left untouched."""
    if not (len(params) == len(grads) == len(state.m) == len(state.v)):
        raise InvalidShapeError("params, grads and Adam moments must have the same length")
    t = state.t + 1
    bias1 = 1.0 - beta1**t
    bias2 = 1.0 - beta2**t
    new_params, new_m, new_v = [], [], []
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape or p.shape != m.shape:
            raise InvalidShapeError(f"Gradient shape {tuple(g.shape)} does not match parameter {tuple(p.shape)}")
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * g * g
        denom = v.sqrt() / math.sqrt(bias2) + eps
        new_params.append(p - (lr / bias1) * m / denom)
        new_m.append(m)
        new_v.append(v)
    return new_params, AdamState(m=new_m, v=new_v, t=t)


def lr_at_epoch(tc: TrainConfig, epoch: int) -> float:
    """lr0 · γ^floor(epoch / p)."""
    if epoch < 0:
        raise InvalidInputError(f"epoch must be >= 0, got {epoch}")
    return tc.lr0 * tc.drop_factor ** (epoch // tc.drop_period)
