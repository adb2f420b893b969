"""
Checkpoints de parâmetros em JSON

    {"version": 1, "meta": {...}, "params": {nome: {"shape": [...], "values": [...]}}}
"""
import json
import logging
from pathlib import Path
from typing import Optional

import torch
from torch import nn

logger = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    """Versão, nome ou shape incompatível no checkpoint."""


def state_to_json(module: nn.Module) -> dict:
    return {
        name: {"shape": list(p.shape), "values": p.detach().reshape(-1).tolist()}
        for name, p in module.named_parameters()
    }


def save_checkpoint(module: nn.Module, path: str | Path, meta: Optional[dict] = None) -> Path:
    """Salva todos os parâmetros (inclusive congelados) em ordem row-major."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "version": CHECKPOINT_VERSION,
        "meta": meta or {},
        "params": state_to_json(module),
    }
    path.write_text(json.dumps(payload), encoding="utf-8")
    logger.info(f"Checkpoint saved: {path}")
    return path


def read_checkpoint(path: str | Path) -> dict:
    """Lê e valida a estrutura do arquivo."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"checkpoint not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CheckpointError(f"{path}: invalid JSON: {e.msg}") from e
    if "version" not in payload:
        raise CheckpointError(f"{path}: missing version field")
    if payload["version"] != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: unsupported checkpoint version {payload['version']} "
            f"(expected {CHECKPOINT_VERSION})"
        )
    if not isinstance(payload.get("params"), dict):
        raise CheckpointError(f"{path}: missing params")
    return payload


def load_into(module: nn.Module, payload: dict) -> None:
    """Copia os valores do checkpoint para os parâmetros do módulo."""
    params = dict(module.named_parameters())
    stored = payload["params"]
    missing = set(params) - set(stored)
    extra = set(stored) - set(params)
    if missing or extra:
        raise CheckpointError(
            f"parameter mismatch: missing={sorted(missing)} unexpected={sorted(extra)}"
        )
    with torch.no_grad():
        for name, p in params.items():
            entry = stored[name]
            if list(p.shape) != list(entry["shape"]):
                raise CheckpointError(
                    f"shape mismatch for {name}: {list(p.shape)} vs {entry['shape']}"
                )
            values = torch.tensor(entry["values"], dtype=p.dtype)
            if values.numel() != p.numel():
                raise CheckpointError(f"{name}: {values.numel()} values for shape {entry['shape']}")
            p.copy_(values.view_as(p))


def load_checkpoint(module: nn.Module, path: str | Path) -> dict:
    """Carrega um checkpoint no módulo; retorna o meta salvo."""
    payload = read_checkpoint(path)
    load_into(module, payload)
    return payload.get("meta", {})
