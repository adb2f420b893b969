"""
Encoder BiLSTM

Uma camada, sem peepholes. Ordem dos gates no peso [4H x (d+H)]:
input, forget, output, candidato.
"""
import math
from typing import Optional

import torch
from torch import nn

from .functional import check_finite


def glorot_(weight: torch.Tensor, fan_in: int, fan_out: int, generator: Optional[torch.Generator]):
    bound = math.sqrt(6.0 / (fan_in + fan_out))
    with torch.no_grad():
        weight.uniform_(-bound, bound, generator=generator)
    return weight


class LSTMCell(nn.Module):
    """Célula LSTM com um único peso para os quatro gates."""

    def __init__(
        self,
        input_size: int,
        hidden_size: int,
        generator: Optional[torch.Generator] = None,
        dtype: torch.dtype = torch.float32,
    ):
        super().__init__()
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.weight = nn.Parameter(torch.empty(4 * hidden_size, input_size + hidden_size, dtype=dtype))
        self.bias = nn.Parameter(torch.zeros(4 * hidden_size, dtype=dtype))
        self.reset_parameters(generator)

    def reset_parameters(self, generator: Optional[torch.Generator] = None):
        H = self.hidden_size
        for chunk in self.weight.data.split(H, dim=0):
            glorot_(chunk, self.input_size + H, H, generator)
        with torch.no_grad():
            self.bias.zero_()
            self.bias[H:2 * H] = 1.0

    def step(self, x: torch.Tensor, h: torch.Tensor, c: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        gates = self.weight @ torch.cat([x, h]) + self.bias
        i, f, o, g = gates.split(self.hidden_size)
        c = torch.sigmoid(f) * c + torch.sigmoid(i) * torch.tanh(g)
        h = torch.sigmoid(o) * torch.tanh(c)
        return h, c

    def forward(self, xs: torch.Tensor) -> torch.Tensor:
        """Roda a recorrência sobre [n x d]; retorna [n x H]."""
        h = xs.new_zeros(self.hidden_size)
        c = xs.new_zeros(self.hidden_size)
        out = []
        for x in xs:
            h, c = self.step(x, h, c)
            out.append(h)
        return torch.stack(out)


class BiLSTMEncoder(nn.Module):
    """h_i = [estado forward em i; estado backward em i]."""

    def __init__(
        self,
        input_size: int,
        hidden_size: int,
        generator: Optional[torch.Generator] = None,
        dtype: torch.dtype = torch.float32,
    ):
        super().__init__()
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.forward_cell = LSTMCell(input_size, hidden_size, generator, dtype)
        self.backward_cell = LSTMCell(input_size, hidden_size, generator, dtype)

    @property
    def output_size(self) -> int:
        return 2 * self.hidden_size

    def forward(self, embeddings: torch.Tensor) -> torch.Tensor:
        if embeddings.dim() != 2 or embeddings.shape[1] != self.input_size:
            raise ValueError(
                f"encoder expects [n x {self.input_size}] input, got {list(embeddings.shape)}"
            )
        if embeddings.shape[0] == 0:
            raise ValueError("encoder input must have at least one token")
        fwd = self.forward_cell(embeddings)
        bwd = self.backward_cell(embeddings.flip(0)).flip(0)
        return check_finite(torch.cat([fwd, bwd], dim=1), "encoder output")


def encoder_forward(params: BiLSTMEncoder, embeddings: torch.Tensor) -> torch.Tensor:
    """[n x d] -> [n x 2H]."""
    return params(embeddings)
