"""
Verificação de gradiente por diferenças finitas centrais.
"""
import logging
from typing import Callable, Optional, Sequence

import numpy as np
import torch

logger = logging.getLogger(__name__)

REL_FLOOR = 1e-5


def grad_check(
    closure: Callable[[], torch.Tensor],
    params: Sequence[torch.Tensor],
    eps: float = 1e-5,
    max_coords: Optional[int] = None,
    seed: int = 0,
) -> float:
    """
    Compara o gradiente analítico com diferenças centrais.

    O erro relativo de cada coordenada é |a - n| / max(|a| + |n|, REL_FLOOR).
    Use parâmetros float64 e um closure determinístico (sem dropout).

    Args:
        closure: Função sem argumentos que retorna a loss escalar
        params: Parâmetros a verificar
        eps: Passo das diferenças finitas
        max_coords: Coordenadas amostradas por parâmetro (None = todas)
        seed: Seed da amostragem

    Returns:
        Maior erro relativo encontrado
    """
    params = [p for p in params if p.requires_grad]
    loss = closure()
    if loss.dim() != 0:
        raise ValueError("grad_check requires a scalar loss")
    analytic = torch.autograd.grad(loss, params, allow_unused=True)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for p, grad in zip(params, analytic):
        flat = p.data.view(-1)
        grad_flat = grad.reshape(-1) if grad is not None else torch.zeros_like(flat)
        coords = np.arange(flat.numel())
        if max_coords is not None and flat.numel() > max_coords:
            coords = rng.choice(flat.numel(), size=max_coords, replace=False)
        for idx in coords:
            idx = int(idx)
            orig = flat[idx].item()
            with torch.no_grad():
                flat[idx] = orig + eps
                plus = closure().item()
                flat[idx] = orig - eps
                minus = closure().item()
                flat[idx] = orig
            numeric = (plus - minus) / (2 * eps)
            a = grad_flat[idx].item()
            rel = abs(a - numeric) / max(abs(a) + abs(numeric), REL_FLOOR)
            worst = max(worst, rel)

    logger.debug(f"grad_check: max relative error {worst:.3e} over {len(params)} parameters")
    return worst
