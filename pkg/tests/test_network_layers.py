"""Tests for the validated layer primitives and their adjoints."""
import pytest
import torch


def _rand(*shape, seed=0):
    gen = torch.Generator().manual_seed(seed)
    return torch.randn(*shape, generator=gen, dtype=torch.float64)


def test_conv2d_preserves_size_at_stride_one():
    """3×3 and 1×1 kernels keep H×W; stride 2 halves it."""
    from formnet.network import conv2d

    x = _rand(2, 3, 8, 8)
    assert conv2d(x, _rand(5, 3, 3, 3), _rand(5)).shape == (2, 5, 8, 8)
    assert conv2d(x, _rand(4, 3, 1, 1)).shape == (2, 4, 8, 8)
    assert conv2d(x, _rand(6, 3, 3, 3), stride=2).shape == (2, 6, 4, 4)


def test_conv2d_one_by_one_by_hand():
    """A 1×1 kernel of 2 with bias 1 maps x to 2x + 1."""
    from formnet.network import conv2d

    x = _rand(1, 1, 8, 8)
    w = torch.full((1, 1, 1, 1), 2.0, dtype=torch.float64)
    b = torch.ones(1, dtype=torch.float64)
    assert torch.equal(conv2d(x, w, b), 2.0 * x + 1.0)


@pytest.mark.parametrize(
    "x_shape,w_shape,stride",
    [
        ((1, 2, 8, 8), (3, 3, 3, 3), 1),
        ((1, 3, 8, 8), (3, 3, 5, 5), 1),
        ((1, 3, 7, 8), (3, 3, 3, 3), 2),
        ((3, 8, 8), (3, 3, 3, 3), 1),
    ],
)
def test_conv2d_shape_violations(x_shape, w_shape, stride):
    """Channel mismatch, unsupported kernels, odd stride-2 input and non-4D input are rejected."""
    from formnet.errors import InvalidShapeError
    from formnet.network import conv2d

    with pytest.raises(InvalidShapeError):
        conv2d(torch.zeros(x_shape, dtype=torch.float64), torch.zeros(w_shape, dtype=torch.float64), stride=stride)


@pytest.mark.parametrize("stride", [1, 2])
def test_conv2d_adjoint_identities(stride):
    """⟨conv(x), g⟩ = ⟨x, input_grad(g)⟩ = ⟨w, weight_grad(x, g)⟩ within 1e−10."""
    from formnet.network import conv2d, conv2d_input_grad, conv2d_weight_grad

    x = _rand(2, 3, 8, 8, seed=1)
    w = _rand(4, 3, 3, 3, seed=2)
    y = conv2d(x, w, stride=stride)
    g = _rand(*y.shape, seed=3)
    lhs = torch.sum(y * g).item()
    via_input = torch.sum(x * conv2d_input_grad(x.shape, w, g, stride=stride)).item()
    via_weight = torch.sum(w * conv2d_weight_grad(x, w.shape, g, stride=stride)).item()
    assert abs(lhs - via_input) < 1e-10 * max(1.0, abs(lhs))
    assert abs(lhs - via_weight) < 1e-10 * max(1.0, abs(lhs))


def test_conv_transpose_doubles_and_is_adjoint_of_strided_conv():
    """2×2 stride-2 transposed convolution doubles H×W and is the adjoint of the strided correlation."""
    import torch.nn.functional as F

    from formnet.network import conv_transpose2d

    x = _rand(2, 4, 4, 4, seed=4)
    w = _rand(4, 3, 2, 2, seed=5)
    y = conv_transpose2d(x, w)
    assert y.shape == (2, 3, 8, 8)
    g = _rand(*y.shape, seed=6)
    lhs = torch.sum(y * g).item()
    rhs = torch.sum(x * F.conv2d(g, w, stride=2)).item()
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_conv_transpose_rejects_wrong_kernel():
    """Only [in, out, 2, 2] kernels are accepted."""
    from formnet.errors import InvalidShapeError
    from formnet.network import conv_transpose2d

    with pytest.raises(InvalidShapeError):
        conv_transpose2d(_rand(1, 4, 4, 4), _rand(4, 3, 3, 3))
    with pytest.raises(InvalidShapeError):
        conv_transpose2d(_rand(1, 2, 4, 4), _rand(4, 3, 2, 2))


def test_relu_subgradient_at_zero():
    """ReLU passes gradient only where the input is strictly positive."""
    from formnet.network import relu

    x = torch.tensor([-1.0, 0.0, 2.0], dtype=torch.float64, requires_grad=True)
    relu(x).sum().backward()
    assert x.grad.tolist() == [0.0, 0.0, 1.0]


def test_concat_channels_order_and_shapes():
    """Skip features come first; mismatched spatial sizes are rejected."""
    from formnet.errors import InvalidShapeError
    from formnet.network import concat_channels

    skip = torch.zeros(1, 2, 4, 4)
    up = torch.ones(1, 3, 4, 4)
    out = concat_channels(skip, up)
    assert out.shape == (1, 5, 4, 4)
    assert torch.all(out[:, :2] == 0) and torch.all(out[:, 2:] == 1)
    with pytest.raises(InvalidShapeError):
        concat_channels(skip, torch.ones(1, 3, 8, 8))


def test_mse_loss_with_penalty():
    """Mean squared error over all pixels plus lam · Σ w²."""
    from formnet.network import mse_loss

    pred = torch.tensor([[1.0, 2.0], [3.0, 4.0]], dtype=torch.float64)
    target = torch.zeros(2, 2, dtype=torch.float64)
    w = torch.tensor([1.0, -2.0], dtype=torch.float64)
    assert mse_loss(pred, target).item() == pytest.approx(7.5)
    assert mse_loss(pred, target, [w], lam=0.1).item() == pytest.approx(7.5 + 0.1 * 5.0)


def test_mse_loss_shape_mismatch():
    """Prediction and target must agree in shape."""
    from formnet.errors import InvalidShapeError
    from formnet.network import mse_loss

    with pytest.raises(InvalidShapeError):
        mse_loss(torch.zeros(2, 2), torch.zeros(2, 3))


def test_non_finite_activation_is_numeric_failure():
    """An Inf weight surfaces as a numeric failure in the forward pass."""
    from formnet.errors import NumericFailureError
    from formnet.network import conv2d

    w = torch.full((1, 1, 3, 3), float("inf"), dtype=torch.float64)
    with pytest.raises(NumericFailureError):
        conv2d(_rand(1, 1, 8, 8), w)
