"""Tests for the U-Net layout, initialization and shape contract."""
import pytest
import torch


def test_output_shape():
    """[batch, K, M, M] maps to [batch, 1, M, M]."""
    from formnet.network import UNetConfig, build_unet, unet_forward

    net = build_unet(UNetConfig(depth=2, base_width=4, in_channels=4), seed=0)
    out = unet_forward(net, torch.zeros(2, 4, 16, 16))
    assert out.shape == (2, 1, 16, 16)


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_weighted_layer_count(depth):
    """A depth-D network has 6·D + 3 weighted layers."""
    from formnet.network import UNetConfig, build_unet, count_weighted_layers

    cfg = UNetConfig(depth=depth, base_width=2)
    net = build_unet(cfg, seed=0)
    assert len(list(net.weighted_layers())) == count_weighted_layers(cfg) == 6 * depth + 3
    assert len(net.weights()) == 6 * depth + 3


def test_parameter_count_smallest_network():
    """D = 1, C0 = 2, one input channel: 579 parameters."""
    from formnet.network import UNetConfig, build_unet, count_parameters

    assert count_parameters(build_unet(UNetConfig(depth=1, base_width=2), seed=0)) == 579


def test_initialization_is_seeded():
    """Same seed, same weights; biases start at zero."""
    from formnet.network import UNetConfig, build_unet

    cfg = UNetConfig(depth=2, base_width=4)
    a = build_unet(cfg, seed=3).state_dict()
    b = build_unet(cfg, seed=3).state_dict()
    c = build_unet(cfg, seed=4).state_dict()
    assert all(torch.equal(a[k], b[k]) for k in a)
    assert not torch.equal(a["encoder.0.conv1.weight"], c["encoder.0.conv1.weight"])
    assert all(torch.all(v == 0) for k, v in a.items() if k.endswith("bias"))


def test_initialization_scale():
    """Weights are drawn with std √(2 / fan_in)."""
    from formnet.network import UNetConfig, build_unet

    net = build_unet(UNetConfig(depth=3, base_width=16), seed=0)
    weight = net.bottleneck1.weight.detach().double()
    expected = (2.0 / (128 * 9)) ** 0.5
    assert abs(weight.std().item() / expected - 1.0) < 0.02
    assert abs(weight.mean().item()) < 0.05 * expected


def test_dtype_option():
    """Networks can be built in float64 for gradient checks."""
    from formnet.network import UNetConfig, build_unet

    net = build_unet(UNetConfig(depth=1, base_width=2), seed=0, dtype=torch.float64)
    assert all(p.dtype == torch.float64 for p in net.parameters())


def test_spatial_size_must_divide():
    """M must be divisible by 2^D at build time and at forward time."""
    from formnet.errors import InvalidConfigError, InvalidShapeError
    from formnet.network import UNetConfig, build_unet, unet_forward

    cfg = UNetConfig(depth=3, base_width=2)
    with pytest.raises(InvalidConfigError):
        build_unet(cfg, seed=0, input_size=12)
    net = build_unet(cfg, seed=0)
    with pytest.raises(InvalidShapeError):
        unet_forward(net, torch.zeros(1, 1, 12, 12))
    with pytest.raises(InvalidShapeError):
        unet_forward(net, torch.zeros(1, 2, 16, 16))


def test_config_validation():
    """depth, widths and channels must be positive; kernel and output channels are fixed."""
    from formnet.network import UNetConfig

    with pytest.raises(ValueError):
        UNetConfig(depth=0)
    with pytest.raises(ValueError):
        UNetConfig(out_channels=2)
    assert UNetConfig(base_width=8).width(2) == 32
