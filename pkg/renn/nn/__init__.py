"""
Neural Core - encoder BiLSTM, softmax/cross-entropy, dropout, Adam,
verificação de gradiente e checkpoints.
"""
from .functional import (
    NumericalError,
    check_finite,
    cross_entropy,
    dropout,
    log_softmax,
    nll_from_logits,
    seed_everything,
    softmax,
)
from .encoder import BiLSTMEncoder, LSTMCell, encoder_forward
from .optim import Adam, adam_step
from .gradcheck import grad_check
from .checkpoint import CheckpointError, load_checkpoint, read_checkpoint, save_checkpoint

__all__ = [
    "NumericalError",
    "check_finite",
    "cross_entropy",
    "dropout",
    "log_softmax",
    "nll_from_logits",
    "seed_everything",
    "softmax",
    "BiLSTMEncoder",
    "LSTMCell",
    "encoder_forward",
    "Adam",
    "adam_step",
    "grad_check",
    "CheckpointError",
    "load_checkpoint",
    "read_checkpoint",
    "save_checkpoint",
]
