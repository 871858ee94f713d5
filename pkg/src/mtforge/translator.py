"""Pluggable translation interface plus deterministic cipher-language
reference translators.

A cipher language is a seeded bijection over a fixed English word
vocabulary; translating en->X substitutes each whitespace token through the
bijection, X->en inverts it, and X->Y composes the two through English.
Because ciphers are exact and invertible they give the rest of the toolkit
(augmentation, routing, evaluation) outputs that can be checked
token-for-token.
"""

from __future__ import annotations

import abc
import hashlib
import random
import shlex
import subprocess
from dataclasses import dataclass
from typing import Collection, Iterable, Mapping, Sequence

from .corpus import Direction, check_lang_code
from .errors import DuplicateLanguageError, MTForgeError, UnsupportedDirectionError
from .wordlist import COMMON_WORDS

OOV_OPEN = "⟨"    # mathematical left angle bracket
OOV_CLOSE = "⟩"
NOISE_TOKEN = "<noise>"

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"


@dataclass(frozen=True)
class DecodingConfig:
    """Decoding settings carried through the translator interface.

    Cipher translators are deterministic and ignore these; adapters for real
    models are expected to honor them.
    """

    beam_size: int = 4
    length_penalty: float = 1.0

    def __post_init__(self):
        if self.beam_size < 1:
            raise ValueError("beam_size must be >= 1")


@dataclass(frozen=True)
class Direct:
    """Decode straight through the requested direction."""


@dataclass(frozen=True)
class PivotVia:
    """Decode through a bridge language (two hops)."""

    lang: str


Strategy = Direct | PivotVia


class Translator(abc.ABC):
    """Batch sentence translator for a fixed set of directions."""

    @property
    @abc.abstractmethod
    def supported_directions(self) -> frozenset[Direction]: ...

    @abc.abstractmethod
    def translate(
        self,
        sentences: Sequence[str],
        direction: Direction,
        config: DecodingConfig | None = None,
    ) -> list[str]:
        """Translate sentences, preserving order and count."""

    def _check_direction(self, direction: Direction) -> None:
        if direction not in self.supported_directions:
            raise UnsupportedDirectionError(f"direction {direction} not supported")


@dataclass(frozen=True)
class CipherLanguage:
    """A seeded token bijection standing in for one language.

    ``token_map`` maps vocabulary words to pseudo-words. Out-of-vocabulary
    tokens are wrapped in angle-bracket markers so decoding can restore them
    exactly, keeping every round trip lossless.
    """

    lang: str
    seed: int
    token_map: Mapping[str, str]

    def __post_init__(self):
        check_lang_code(self.lang)
        inverse = {v: k for k, v in self.token_map.items()}
        if len(inverse) != len(self.token_map):
            raise ValueError("token_map must be a bijection")
        object.__setattr__(self, "_inverse", inverse)

    @classmethod
    def from_seed(cls, lang: str, seed: int,
                  vocabulary: Sequence[str] = tuple(COMMON_WORDS)) -> "CipherLanguage":
        rng = random.Random(seed)
        taken = set(vocabulary)
        mapping: dict[str, str] = {}
        for word in vocabulary:
            while True:
                n = rng.randint(2, 4)
                pseudo = "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS)
                                 for _ in range(n))
                if pseudo not in taken:
                    break
            taken.add(pseudo)
            mapping[word] = pseudo
        return cls(lang, seed, mapping)

    def encode_token(self, token: str) -> str:
        mapped = self.token_map.get(token)
        if mapped is not None:
            return mapped
        return f"{OOV_OPEN}{token}{OOV_CLOSE}"

    def decode_token(self, token: str) -> str:
        original = self._inverse.get(token)
        if original is not None:
            return original
        if len(token) >= 2 and token.startswith(OOV_OPEN) and token.endswith(OOV_CLOSE):
            return token[1:-1]
        return token

    def encode(self, sentence: str) -> str:
        return " ".join(self.encode_token(t) for t in sentence.split())

    def decode(self, sentence: str) -> str:
        return " ".join(self.decode_token(t) for t in sentence.split())


class CipherTranslator(Translator):
    """Exact translator over {en} plus a set of cipher languages.

    English is the interlingua: en->X encodes, X->en decodes, and X->Y is
    the composition decode-then-encode. All ordered pairs are supported.
    """

    def __init__(self, languages: Iterable[CipherLanguage]):
        self._ciphers: dict[str, CipherLanguage] = {}
        for cipher in languages:
            if cipher.lang == "en" or cipher.lang in self._ciphers:
                raise DuplicateLanguageError(f"duplicate language {cipher.lang!r}")
            self._ciphers[cipher.lang] = cipher
        codes = ["en"] + sorted(self._ciphers)
        self._supported = frozenset(
            Direction(a, b) for a in codes for b in codes if a != b)

    @property
    def supported_directions(self) -> frozenset[Direction]:
        return self._supported

    @property
    def languages(self) -> dict[str, CipherLanguage]:
        return dict(self._ciphers)

    def translate(self, sentences, direction, config=None):
        self._check_direction(direction)
        out = []
        for sentence in sentences:
            if direction.src != "en":
                sentence = self._ciphers[direction.src].decode(sentence)
            if direction.tgt != "en":
                sentence = self._ciphers[direction.tgt].encode(sentence)
            out.append(sentence)
        return out


def make_cipher_translator(languages: Iterable[CipherLanguage]) -> CipherTranslator:
    return CipherTranslator(languages)


def derive_language_seed(master_seed: int, lang: str) -> int:
    """Stable per-language seed derived from a master seed."""
    digest = hashlib.blake2b(f"{master_seed}:{lang}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _noise_draw(seed: int, sentence_idx: int, token_idx: int) -> float:
    """Uniform [0, 1) draw keyed by position, stable across platforms."""
    digest = hashlib.blake2b(
        f"{seed}:{sentence_idx}:{token_idx}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") / 2**64


class NoisyTranslator(Translator):
    """Wraps a translator, corrupting output tokens at a fixed rate.

    Corruption replaces a token with a marker rather than deleting it, so
    lengths (and the BLEU brevity penalty) are unaffected. Each (sentence
    index, token index) position corrupts independently, keyed only by the
    seed and position, never by call order.
    """

    def __init__(self, inner: Translator, noise_rate: float, seed: int,
                 directions: Collection[Direction] | None = None):
        if not 0 <= noise_rate <= 1:
            raise ValueError("noise_rate must be in [0, 1]")
        self._inner = inner
        self._rate = noise_rate
        self._seed = seed
        self._directions = None if directions is None else frozenset(directions)

    @property
    def supported_directions(self) -> frozenset[Direction]:
        return self._inner.supported_directions

    def translate(self, sentences, direction, config=None):
        out = self._inner.translate(sentences, direction, config)
        if self._rate == 0 or (self._directions is not None
                               and direction not in self._directions):
            return out
        noisy = []
        for i, sentence in enumerate(out):
            tokens = sentence.split()
            for j in range(len(tokens)):
                if _noise_draw(self._seed, i, j) < self._rate:
                    tokens[j] = NOISE_TOKEN
            noisy.append(" ".join(tokens))
        return noisy


def with_noise(translator: Translator, noise_rate: float, seed: int,
               directions: Collection[Direction] | None = None) -> NoisyTranslator:
    """Wrap a translator with positional token corruption.

    ``directions`` restricts the noise to a subset of directions (all when
    None), which is how an imperfect direct system with clean pivot hops is
    modeled.
    """
    return NoisyTranslator(translator, noise_rate, seed, directions)


def pivot_translate(
    translator: Translator,
    sentences: Sequence[str],
    src: str,
    tgt: str,
    pivot: str,
    config: DecodingConfig | None = None,
    with_intermediate: bool = False,
):
    """Translate src->pivot->tgt in two hops.

    Returns the final sentences, or ``(final, intermediate)`` when
    ``with_intermediate`` is set so the bridge text can be audited.
    """
    if pivot in (src, tgt):
        raise UnsupportedDirectionError(
            f"pivot {pivot!r} must differ from both endpoints {src!r}, {tgt!r}")
    mid = translator.translate(sentences, Direction(src, pivot), config)
    out = translator.translate(mid, Direction(pivot, tgt), config)
    return (out, mid) if with_intermediate else out


class LineProtocolTranslator(Translator):
    """Adapter for external translators speaking a line protocol.

    Runs a subprocess per call: one sentence per line on stdin, one
    translation per line on stdout. ``{src}`` and ``{tgt}`` placeholders in
    the command are substituted with the direction's language codes.
    """

    def __init__(self, command: str | Sequence[str], directions: Iterable[Direction]):
        self._command = shlex.split(command) if isinstance(command, str) else list(command)
        self._supported = frozenset(directions)

    @property
    def supported_directions(self) -> frozenset[Direction]:
        return self._supported

    def translate(self, sentences, direction, config=None):
        self._check_direction(direction)
        if not sentences:
            return []
        argv = [a.format(src=direction.src, tgt=direction.tgt) for a in self._command]
        proc = subprocess.run(
            argv, input="\n".join(sentences) + "\n",
            capture_output=True, text=True)
        if proc.returncode != 0:
            raise MTForgeError(
                f"translator command failed ({proc.returncode}): {proc.stderr.strip()}")
        lines = proc.stdout.splitlines()
        if len(lines) != len(sentences):
            raise MTForgeError(
                f"translator returned {len(lines)} lines for {len(sentences)} sentences")
        return lines
