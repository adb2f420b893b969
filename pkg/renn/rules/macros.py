"""
Macros de lista de palavras

Um macro como __CITY representa uma lista de palavras literais e é
expandido para uma alternação não-capturante antes da compilação,
preservando a numeração dos grupos do pattern original.
"""
import json
import logging
import re
from pathlib import Path

logger = logging.getLogger(__name__)

MACRO_NAME = re.compile(r"^__[A-Z_]+$")
# Referência dentro de um pattern: __ seguido de maiúsculas/underscore.
MACRO_REF = re.compile(r"__[A-Z][A-Z_]*")


class MacroError(ValueError):
    """Macro malformado ou não definido."""


MacroTable = dict[str, tuple[str, ...]]


def validate_macros(raw: dict) -> MacroTable:
    """
    Valida e normaliza uma tabela de macros.

    Args:
        raw: Mapeamento nome -> lista de palavras

    Returns:
        MacroTable com tuplas imutáveis
    """
    table: MacroTable = {}
    for name, words in raw.items():
        if not isinstance(name, str) or not MACRO_NAME.match(name):
            raise MacroError(f"invalid macro name {name!r}: must match __[A-Z_]+")
        if not isinstance(words, list) or not words:
            raise MacroError(f"macro {name} must map to a non-empty list of words")
        if not all(isinstance(w, str) and w for w in words):
            raise MacroError(f"macro {name} contains an empty or non-string word")
        table[name] = tuple(words)
    return table


def load_macros(path: str | Path) -> MacroTable:
    """Carrega o arquivo de macros (objeto JSON nome -> palavras)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"macro file not found: {path}")
    text = path.read_text(encoding="utf-8").strip()
    if not text:
        return {}
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise MacroError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise MacroError(f"{path}: expected a JSON object of macro lists")
    table = validate_macros(raw)
    logger.debug(f"Loaded {len(table)} macros from {path}")
    return table


def macro_alternation(words: tuple[str, ...]) -> str:
    """Alternação não-capturante; palavras longas primeiro para o match mais longo."""
    ordered = sorted(words, key=len, reverse=True)
    return "(?:" + "|".join(re.escape(w) for w in ordered) + ")"


def referenced_macros(pattern: str) -> list[str]:
    """Nomes de macro referenciados em um pattern, na ordem de aparição."""
    return MACRO_REF.findall(pattern)


def expand_macros(pattern: str, macros: MacroTable) -> str:
    """
    Substitui cada __NAME pela alternação das suas palavras.

    Args:
        pattern: Pattern com referências a macros
        macros: Tabela de macros

    Returns:
        Pattern expandido (idêntico se não houver macros)
    """
    def replace(match: re.Match) -> str:
        name = match.group(0)
        if name not in macros:
            raise MacroError(f"undefined macro {name}")
        return macro_alternation(macros[name])

    return MACRO_REF.sub(replace, pattern)
