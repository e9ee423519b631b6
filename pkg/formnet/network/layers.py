"""
Validated layer primitives over torch.nn.functional.

Every forward result is checked for NaN/Inf; shape violations raise InvalidShapeError
before torch sees the tensors. Gradients come from autograd; the explicit input / weight
gradients of conv2d are exposed for adjoint checks.
"""

from typing import Iterable, Sequence

import torch
import torch.nn.functional as F
from torch.nn import grad as nn_grad

from formnet.errors import InvalidShapeError, NumericFailureError

CONV_KERNELS = (1, 2, 3)


def check_finite(t: torch.Tensor, where: str) -> torch.Tensor:
    if not torch.isfinite(t).all():
        raise NumericFailureError(f"Non-finite values after {where}")
    return t


def _padding(kernel: int) -> int:
    return (kernel - 1) // 2


def _check_conv_args(x: torch.Tensor, weight: torch.Tensor, bias: torch.Tensor, stride: int) -> int:
    if x.dim() != 4:
        raise InvalidShapeError(f"conv2d input must be 4D [batch, channels, H, W], got {tuple(x.shape)}")
    if weight.dim() != 4 or weight.shape[2] != weight.shape[3] or weight.shape[2] not in CONV_KERNELS:
        raise InvalidShapeError(f"conv2d weight must be [out, in, k, k] with k in {CONV_KERNELS}, got {tuple(weight.shape)}")
    if weight.shape[1] != x.shape[1]:
        raise InvalidShapeError(f"conv2d weight expects {weight.shape[1]} input channels, got {x.shape[1]}")
    if bias is not None and tuple(bias.shape) != (weight.shape[0],):
        raise InvalidShapeError(f"conv2d bias must have shape ({weight.shape[0]},), got {tuple(bias.shape)}")
    if stride not in (1, 2):
        raise InvalidShapeError(f"stride must be 1 or 2, got {stride}")
    if stride == 2 and (x.shape[2] % 2 or x.shape[3] % 2):
        raise InvalidShapeError(f"stride-2 conv needs even spatial size, got {tuple(x.shape[2:])}")
    return _padding(weight.shape[2])


def conv2d(x: torch.Tensor, weight: torch.Tensor, bias: torch.Tensor = None, stride: int = 1) -> torch.Tensor:
    """Cross-correlation plus bias; 3×3 and 1×1 kernels keep the spatial size at stride 1."""
    padding = _check_conv_args(x, weight, bias, stride)
    return check_finite(F.conv2d(x, weight, bias, stride=stride, padding=padding), "conv2d")


def conv_transpose2d(x: torch.Tensor, weight: torch.Tensor, bias: torch.Tensor = None, stride: int = 2) -> torch.Tensor:
    """2×2 stride-2 transposed convolution; weight is [in, out, 2, 2] and the spatial size doubles."""
    if x.dim() != 4:
        raise InvalidShapeError(f"conv_transpose2d input must be 4D, got {tuple(x.shape)}")
    if weight.dim() != 4 or tuple(weight.shape[2:]) != (2, 2) or stride != 2:
        raise InvalidShapeError(f"conv_transpose2d needs a [in, out, 2, 2] kernel at stride 2, got {tuple(weight.shape)}")
    if weight.shape[0] != x.shape[1]:
        raise InvalidShapeError(f"conv_transpose2d weight expects {weight.shape[0]} input channels, got {x.shape[1]}")
    if bias is not None and tuple(bias.shape) != (weight.shape[1],):
        raise InvalidShapeError(f"conv_transpose2d bias must have shape ({weight.shape[1]},), got {tuple(bias.shape)}")
    return check_finite(F.conv_transpose2d(x, weight, bias, stride=2), "conv_transpose2d")


def relu(x: torch.Tensor) -> torch.Tensor:
    # torch's backward passes gradient only where x > 0, so the subgradient at 0 is 0
    return F.relu(x)


def concat_channels(skip: torch.Tensor, up: torch.Tensor) -> torch.Tensor:
    """Join along channels with the skip features first."""
    if skip.dim() != 4 or up.dim() != 4:
        raise InvalidShapeError("concat_channels needs 4D tensors")
    if skip.shape[0] != up.shape[0] or skip.shape[2:] != up.shape[2:]:
        raise InvalidShapeError(f"Cannot concatenate {tuple(skip.shape)} and {tuple(up.shape)}")
    return torch.cat((skip, up), dim=1)


def weight_penalty(weights: Iterable[torch.Tensor]) -> torch.Tensor:
    """Σ w² over the given weight tensors."""
    total = None
    for w in weights:
        term = w.pow(2).sum()
        total = term if total is None else total + term
    return total if total is not None else torch.zeros(())


def mse_loss(pred: torch.Tensor, target: torch.Tensor, weights: Iterable[torch.Tensor] = (), lam: float = 0.0) -> torch.Tensor:
    """Mean squared error over all pixels plus lam · Σ w² (biases are not passed in)."""
    if pred.shape != target.shape:
        raise InvalidShapeError(f"Prediction shape {tuple(pred.shape)} != target shape {tuple(target.shape)}")
    loss = torch.mean((pred - target) ** 2)
    if lam:
        loss = loss + lam * weight_penalty(weights).to(loss.dtype)
    return loss


def conv2d_input_grad(input_shape: Sequence[int], weight: torch.Tensor, grad_output: torch.Tensor, stride: int = 1) -> torch.Tensor:
    """∂⟨conv2d(x), grad_output⟩/∂x, i.e. the adjoint of conv2d applied to grad_output."""
    return nn_grad.conv2d_input(
        list(input_shape), weight, grad_output, stride=stride, padding=_padding(weight.shape[2])
    )


def conv2d_weight_grad(x: torch.Tensor, weight_shape: Sequence[int], grad_output: torch.Tensor, stride: int = 1) -> torch.Tensor:
    return nn_grad.conv2d_weight(x, list(weight_shape), grad_output, stride=stride, padding=_padding(weight_shape[2]))
