"""
Vocabulário de tokens (token -> id, <unk> = 0).
"""
from dataclasses import dataclass, field
from typing import Iterable

UNK = "<unk>"


@dataclass
class Vocabulary:
    """Mapeamento token -> id; tokens desconhecidos vão para <unk>."""
    tokens: list[str] = field(default_factory=lambda: [UNK])
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.tokens or self.tokens[0] != UNK:
            self.tokens = [UNK] + [t for t in self.tokens if t != UNK]
        self._index = {tok: i for i, tok in enumerate(self.tokens)}

    @classmethod
    def build(cls, sentences: Iterable) -> "Vocabulary":
        """Constrói a partir de sentenças, na ordem de primeira aparição."""
        seen: dict[str, None] = {}
        for s in sentences:
            for tok in s.tokens:
                seen.setdefault(tok, None)
        return cls(tokens=[UNK] + list(seen))

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def id(self, token: str) -> int:
        return self._index.get(token, 0)

    def encode(self, tokens: Iterable[str]) -> list[int]:
        return [self.id(t) for t in tokens]

    def to_list(self) -> list[str]:
        return list(self.tokens)
