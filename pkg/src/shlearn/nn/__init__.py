"""Neural sequence labeler mapping token rules to highlighting classes."""

from .io import ModelFormatError, SavedModel, load_model, save_model
from .kernels import BACKEND
from .model import (
    Model,
    ModelConfig,
    VocabError,
    backward,
    forward,
    init_model,
    loss,
    predict,
)
from .train import Adam, TrainResult, TrainSchedule, train

__all__ = [
    "Adam",
    "BACKEND",
    "Model",
    "ModelConfig",
    "ModelFormatError",
    "SavedModel",
    "TrainResult",
    "TrainSchedule",
    "VocabError",
    "backward",
    "forward",
    "init_model",
    "load_model",
    "loss",
    "predict",
    "save_model",
    "train",
]
