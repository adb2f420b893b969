"""
Cabeças de classificação sobre a saída do BiLSTM

- IntentBaseHead: atenção com contexto único, s = Σ α_i h_i
- TwoSideIntentHead: atenção positiva/negativa por intent, logit = pos - neg
- SlotBaseHead: softmax por token
- SlotTwoSideHead: atenção compartilhada por token (positiva/negativa)
"""
import math
from typing import Optional

import torch
from torch import nn

from ..nn.functional import softmax, check_finite


def init_param(
    shape: tuple[int, ...],
    generator: Optional[torch.Generator],
    dtype: torch.dtype,
) -> nn.Parameter:
    """Glorot-uniform para matrizes (vetores tratados como [1 x d])."""
    fan_out, fan_in = (shape[0], shape[1]) if len(shape) == 2 else (1, shape[0])
    bound = math.sqrt(6.0 / (fan_in + fan_out))
    t = torch.empty(*shape, dtype=dtype)
    t.uniform_(-bound, bound, generator=generator)
    return nn.Parameter(t)


def zeros_param(size: int, dtype: torch.dtype) -> nn.Parameter:
    return nn.Parameter(torch.zeros(size, dtype=dtype))


def _check_enc(enc_out: torch.Tensor, width: int) -> None:
    if enc_out.dim() != 2 or enc_out.shape[1] != width or enc_out.shape[0] == 0:
        raise ValueError(f"expected encoder output [n x {width}], got {list(enc_out.shape)}")


class IntentBaseHead(nn.Module):
    """α_i = softmax_i(h_iᵀ W c); s = Σ α_i h_i; logits = W_o [s; extra] + b_o."""

    def __init__(self, width: int, n_labels: int, extra: int = 0,
                 generator: Optional[torch.Generator] = None, dtype: torch.dtype = torch.float32):
        super().__init__()
        self.width = width
        self.extra = extra
        self.W = init_param((width, width), generator, dtype)
        self.c = init_param((width,), generator, dtype)
        self.W_out = init_param((n_labels, width + extra), generator, dtype)
        self.b_out = zeros_param(n_labels, dtype)

    def forward(self, enc_out: torch.Tensor, extra: Optional[torch.Tensor] = None):
        _check_enc(enc_out, self.width)
        alpha = softmax(enc_out @ (self.W @ self.c), dim=0)
        s = alpha @ enc_out
        if self.extra:
            if extra is None or extra.shape != (self.extra,):
                raise ValueError(f"intent head expects an extra feature vector of size {self.extra}")
            s = torch.cat([s, extra])
        logits = self.W_out @ s + self.b_out
        return check_finite(logits, "intent logits"), alpha


class TwoSideIntentHead(nn.Module):
    """
    Atenção two-side para intents.

    Para cada intent k e polaridade: α_ki = softmax_i(h_iᵀ W_a c_k),
    s_k = Σ α_ki h_i, logit_k = w_k · [s_k; extra] + b_k. O logit final é
    logit_pk - logit_nk. W_a é compartilhado entre intents e polaridades.
    """

    def __init__(self, width: int, n_labels: int, extra: int = 0,
                 generator: Optional[torch.Generator] = None, dtype: torch.dtype = torch.float32):
        super().__init__()
        self.width = width
        self.extra = extra
        self.W_a = init_param((width, width), generator, dtype)
        self.c_pos = init_param((n_labels, width), generator, dtype)
        self.c_neg = init_param((n_labels, width), generator, dtype)
        self.w_pos = init_param((n_labels, width + extra), generator, dtype)
        self.w_neg = init_param((n_labels, width + extra), generator, dtype)
        self.b_pos = zeros_param(n_labels, dtype)
        self.b_neg = zeros_param(n_labels, dtype)

    def _side(self, enc_out, c, w, b, extra):
        alpha = softmax((enc_out @ self.W_a @ c.T).T, dim=1)   # [K x n]
        s = alpha @ enc_out                                     # [K x D]
        if self.extra:
            s = torch.cat([s, extra.expand(s.shape[0], -1)], dim=1)
        return (w * s).sum(dim=1) + b, alpha

    def forward(self, enc_out: torch.Tensor, extra: Optional[torch.Tensor] = None):
        _check_enc(enc_out, self.width)
        if self.extra and (extra is None or extra.shape != (self.extra,)):
            raise ValueError(f"intent head expects an extra feature vector of size {self.extra}")
        logit_p, alpha_p = self._side(enc_out, self.c_pos, self.w_pos, self.b_pos, extra)
        logit_n, alpha_n = self._side(enc_out, self.c_neg, self.w_neg, self.b_neg, extra)
        return check_finite(logit_p - logit_n, "intent logits"), alpha_p, alpha_n


class SlotBaseHead(nn.Module):
    """logits_i = W h_i + b."""

    def __init__(self, width: int, n_labels: int,
                 generator: Optional[torch.Generator] = None, dtype: torch.dtype = torch.float32):
        super().__init__()
        self.width = width
        self.W = init_param((n_labels, width), generator, dtype)
        self.b = zeros_param(n_labels, dtype)

    def forward(self, enc_out: torch.Tensor):
        _check_enc(enc_out, self.width)
        return check_finite(enc_out @ self.W.T + self.b, "slot logits")


class SlotTwoSideHead(nn.Module):
    """
    Atenção compartilhada por todos os labels de slot.

    α_pij = softmax_j(h_jᵀ W_sp h_i); s_pi = Σ_j α_pij h_j (idem com W_sn);
    logits_i = (W_p [s_pi; h_i] + b_p) - (W_n [s_ni; h_i] + b_n).
    """

    def __init__(self, width: int, n_labels: int,
                 generator: Optional[torch.Generator] = None, dtype: torch.dtype = torch.float32):
        super().__init__()
        self.width = width
        self.W_sp = init_param((width, width), generator, dtype)
        self.W_sn = init_param((width, width), generator, dtype)
        self.W_p = init_param((n_labels, 2 * width), generator, dtype)
        self.W_n = init_param((n_labels, 2 * width), generator, dtype)
        self.b_p = zeros_param(n_labels, dtype)
        self.b_n = zeros_param(n_labels, dtype)

    @staticmethod
    def attention(enc_out: torch.Tensor, W: torch.Tensor) -> torch.Tensor:
        """[n x n]; linha i = distribuição sobre j."""
        return softmax(enc_out @ W.T @ enc_out.T, dim=1)

    def forward(self, enc_out: torch.Tensor):
        _check_enc(enc_out, self.width)
        alpha_p = self.attention(enc_out, self.W_sp)
        alpha_n = self.attention(enc_out, self.W_sn)
        s_p = torch.cat([alpha_p @ enc_out, enc_out], dim=1)
        s_n = torch.cat([alpha_n @ enc_out, enc_out], dim=1)
        logits = (s_p @ self.W_p.T + self.b_p) - (s_n @ self.W_n.T + self.b_n)
        return check_finite(logits, "slot logits"), alpha_p, alpha_n


# --- API funcional ---

def intent_forward_base(enc_out: torch.Tensor, params: IntentBaseHead):
    """(probs, α) do modelo base de intent."""
    logits, alpha = params(enc_out)
    return softmax(logits), alpha


def intent_forward_feat(enc_out: torch.Tensor, params: IntentBaseHead, tag_vector: torch.Tensor):
    """probs com o vetor agregado de REtags anexado à entrada do classificador."""
    logits, _ = params(enc_out, tag_vector)
    return softmax(logits)


def intent_forward_two_side(enc_out: torch.Tensor, params: TwoSideIntentHead,
                            extra: Optional[torch.Tensor] = None):
    """(logits, α_pos [K x n], α_neg [K x n])."""
    return params(enc_out, extra)


def slot_forward_base(enc_out: torch.Tensor, params: SlotBaseHead) -> torch.Tensor:
    """probs por token [n x L]."""
    return softmax(params(enc_out), dim=1)


def slot_forward_two_side(enc_out: torch.Tensor, params: SlotTwoSideHead) -> torch.Tensor:
    """probs por token [n x L] com atenção two-side compartilhada."""
    logits, _, _ = params(enc_out)
    return softmax(logits, dim=1)
