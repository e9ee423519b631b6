"""
U-Net image-to-image regressor f: ΔL (K×M×M) ↦ ΔT (M×M).

Layout for depth D and base width C0 (widths C0·2^d):
  encoder stage d: conv3×3+relu, conv3×3+relu, stride-2 conv3×3 doubling the channels
  bottleneck:      2 × conv3×3+relu at C0·2^D
  decoder stage d: transposed conv 2×2 halving the channels, concat(skip, up), 2 × conv3×3+relu
  head:            linear conv1×1 to one channel
Every convolution and transposed convolution counts as one weighted layer, giving 6·D + 3.
"""

import logging
from typing import Iterator, List, Optional, Union

import torch
from torch import nn

from formnet.errors import InvalidShapeError

from .layers import concat_channels, conv2d, conv_transpose2d, relu
from .models import UNetConfig

logger = logging.getLogger(__name__)


class ConvLayer(nn.Module):
    def __init__(self, in_channels: int, out_channels: int, kernel: int, stride: int = 1):
        super().__init__()
        self.stride = stride
        self.weight = nn.Parameter(torch.zeros(out_channels, in_channels, kernel, kernel))
        self.bias = nn.Parameter(torch.zeros(out_channels))

    @property
    def fan_in(self) -> int:
        out_ch, in_ch, k, _ = self.weight.shape
        return in_ch * k * k

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return conv2d(x, self.weight, self.bias, self.stride)


class UpLayer(nn.Module):
    def __init__(self, in_channels: int, out_channels: int):
        super().__init__()
        self.weight = nn.Parameter(torch.zeros(in_channels, out_channels, 2, 2))
        self.bias = nn.Parameter(torch.zeros(out_channels))

    @property
    def fan_in(self) -> int:
        return self.weight.shape[0]

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return conv_transpose2d(x, self.weight, self.bias)


class EncoderStage(nn.Module):
    def __init__(self, in_channels: int, width: int, kernel: int):
        super().__init__()
        self.conv1 = ConvLayer(in_channels, width, kernel)
        self.conv2 = ConvLayer(width, width, kernel)
        self.down = ConvLayer(width, 2 * width, kernel, stride=2)


class DecoderStage(nn.Module):
    def __init__(self, width: int, kernel: int):
        super().__init__()
        self.up = UpLayer(2 * width, width)
        self.conv1 = ConvLayer(2 * width, width, kernel)
        self.conv2 = ConvLayer(width, width, kernel)


class UNet(nn.Module):
    def __init__(self, cfg: UNetConfig):
        super().__init__()
        self.cfg = cfg
        k = cfg.kernel
        self.encoder = nn.ModuleList(
            EncoderStage(cfg.in_channels if d == 0 else cfg.width(d), cfg.width(d), k) for d in range(cfg.depth)
        )
        bottom = cfg.width(cfg.depth)
        self.bottleneck1 = ConvLayer(bottom, bottom, k)
        self.bottleneck2 = ConvLayer(bottom, bottom, k)
        # decoder[i] runs at encoder stage depth-1-i
        self.decoder = nn.ModuleList(DecoderStage(cfg.width(d), k) for d in reversed(range(cfg.depth)))
        self.head = ConvLayer(cfg.width(0), cfg.out_channels, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        skips: List[torch.Tensor] = []
        for stage in self.encoder:
            x = relu(stage.conv1(x))
            x = relu(stage.conv2(x))
            skips.append(x)
            x = stage.down(x)
        x = relu(self.bottleneck1(x))
        x = relu(self.bottleneck2(x))
        for stage, skip in zip(self.decoder, reversed(skips)):
            x = concat_channels(skip, stage.up(x))
            x = relu(stage.conv1(x))
            x = relu(stage.conv2(x))
        return self.head(x)

    def weighted_layers(self) -> Iterator[Union[ConvLayer, UpLayer]]:
        return (m for m in self.modules() if isinstance(m, (ConvLayer, UpLayer)))

    def weights(self) -> List[torch.Tensor]:
        """Weight tensors only; biases are excluded from the L2 penalty."""
        return [layer.weight for layer in self.weighted_layers()]


def build_unet(
    cfg: UNetConfig, seed: int, input_size: Optional[int] = None, dtype: torch.dtype = torch.float32
) -> UNet:
    """Weights ~ N(0, √(2 / fan_in)) drawn in module order from a generator seeded with `seed`; biases 0."""
    if input_size is not None:
        cfg.check_spatial(input_size)
    net = UNet(cfg)
    gen = torch.Generator().manual_seed(seed)
    with torch.no_grad():
        for layer in net.weighted_layers():
            std = (2.0 / layer.fan_in) ** 0.5
            layer.weight.copy_(torch.randn(layer.weight.shape, generator=gen, dtype=torch.float64) * std)
            layer.bias.zero_()
    net = net.to(dtype)
    logger.debug("Built U-Net depth=%d base_width=%d (%d parameters)", cfg.depth, cfg.base_width, count_parameters(net))
    return net


def unet_forward(net: UNet, x: torch.Tensor) -> torch.Tensor:
    """[batch, K, M, M] → [batch, 1, M, M]."""
    cfg = net.cfg
    if x.dim() != 4 or x.shape[1] != cfg.in_channels:
        raise InvalidShapeError(f"Expected input [batch, {cfg.in_channels}, M, M], got {tuple(x.shape)}")
    for size in x.shape[2:]:
        if size % (2**cfg.depth) != 0:
            raise InvalidShapeError(f"Spatial size {size} is not divisible by 2^depth = {2**cfg.depth}")
    return net(x)


def count_parameters(net: nn.Module) -> int:
    return sum(p.numel() for p in net.parameters())


def count_weighted_layers(cfg: UNetConfig) -> int:
    return 6 * cfg.depth + 3
