"""U-Net regressor on torch: validated layers, network, Adam, training, inference and model files."""

from .inference import ensemble_predict, ensemble_predict_batch, predict, predict_batch
from .layers import (
    check_finite,
    concat_channels,
    conv2d,
    conv2d_input_grad,
    conv2d_weight_grad,
    conv_transpose2d,
    mse_loss,
    relu,
    weight_penalty,
)
from .models import EpochRecord, ModelHeader, TrainConfig, TrainedModel, TrainHistory, UNetConfig
from .optim import AdamState, adam_step, lr_at_epoch
from .storage import load_model, save_model
from .trainer import (
    gradient_check,
    loss_gradient,
    normalized_tensors,
    train,
    train_ensemble,
    train_model,
)
from .unet import UNet, build_unet, count_parameters, count_weighted_layers, unet_forward

__all__ = [
    "UNetConfig",
    "TrainConfig",
    "TrainHistory",
    "EpochRecord",
    "ModelHeader",
    "TrainedModel",
    "check_finite",
    "conv2d",
    "conv_transpose2d",
    "conv2d_input_grad",
    "conv2d_weight_grad",
    "relu",
    "concat_channels",
    "mse_loss",
    "weight_penalty",
    "UNet",
    "build_unet",
    "unet_forward",
    "count_parameters",
    "count_weighted_layers",
    "AdamState",
    "adam_step",
    "lr_at_epoch",
    "normalized_tensors",
    "loss_gradient",
    "gradient_check",
    "train",
    "train_model",
    "train_ensemble",
    "predict",
    "predict_batch",
    "ensemble_predict",
    "ensemble_predict_batch",
    "save_model",
    "load_model",
]
