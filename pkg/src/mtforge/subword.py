"""Deterministic subword tokenizer: greedy longest-match with character
fallback.

The tokenizer operates directly on the raw string, so whitespace is part of
the token stream (a single space is a vocabulary piece). That makes
``detokenize(tokenize(text)) == text`` hold for every input, including
unusual spacing: any character not covered by a vocabulary piece becomes its
own single-character token.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping

from .wordlist import COMMON_WORDS

_SUBWORD_PIECES = [
    " ", ".", ",", "!", "?", "'", "-",
    "ing", "ed", "er", "est", "tion", "ment", "ness", "ly", "able",
    "th", "ch", "sh", "qu", "re", "un", "pre", "ation",
]

DEFAULT_VOCAB = tuple(dict.fromkeys(COMMON_WORDS + _SUBWORD_PIECES))


class SubwordTokenizer:
    """Greedy longest-match tokenizer over a fixed piece vocabulary."""

    def __init__(self, vocab: Iterable[str] | Mapping[str, float] = DEFAULT_VOCAB):
        if isinstance(vocab, Mapping):
            pieces = {p: float(s) for p, s in vocab.items() if p}
        else:
            pieces = {p: 0.0 for p in vocab if p}
        self.vocab = pieces
        self._max_len = max((len(p) for p in pieces), default=1)

    def tokenize(self, text: str) -> list[str]:
        tokens: list[str] = []
        i = 0
        n = len(text)
        while i < n:
            piece = None
            for length in range(min(self._max_len, n - i), 0, -1):
                candidate = text[i:i + length]
                if candidate in self.vocab:
                    piece = candidate
                    break
            if piece is None:
                piece = text[i]
            tokens.append(piece)
            i += len(piece)
        return tokens

    def detokenize(self, tokens: Iterable[str]) -> str:
        return "".join(tokens)

    def count(self, text: str) -> int:
        return len(self.tokenize(text))

    @classmethod
    def from_file(cls, path: str | Path) -> "SubwordTokenizer":
        """Load a vocabulary file: one piece per line, optional tab-separated
        score (ignored by greedy matching but preserved)."""
        pieces: dict[str, float] = {}
        with Path(path).open(encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                piece, _, score = line.partition("\t")
                pieces[piece] = float(score) if score else 0.0
        return cls(pieces)


@lru_cache(maxsize=1)
def default_tokenizer() -> SubwordTokenizer:
    return SubwordTokenizer(DEFAULT_VOCAB)
