"""Corpus BLEU on subword tokens, and per-direction score matrices.

BLEU-4 with modified (clipped) n-gram precision, corpus-level brevity
penalty, and add-one smoothing applied to zero counts of order >= 2. With
``tokenizer=None`` segments are split on whitespace (pre-tokenized input);
otherwise the subword tokenizer defines the token stream.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Direction
from .errors import EmptyCorpusError, LengthMismatchError
from .subword import SubwordTokenizer, default_tokenizer
from .translator import (
    DecodingConfig,
    Direct,
    PivotVia,
    Strategy,
    Translator,
    pivot_translate,
)

MAX_ORDER = 4


@dataclass(frozen=True)
class BleuScore:
    score: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hyp_len: int
    ref_len: int


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(
    hyps: Sequence[str],
    refs: Sequence[str],
    tokenizer: SubwordTokenizer | None = None,
) -> BleuScore:
    if len(hyps) != len(refs):
        raise LengthMismatchError(
            f"{len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise EmptyCorpusError("need at least one segment")

    split = tokenizer.tokenize if tokenizer is not None else str.split
    matches = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    hyp_len = ref_len = 0
    for hyp, ref in zip(hyps, refs):
        hyp_tokens = split(hyp)
        ref_tokens = split(ref)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, MAX_ORDER + 1):
            hyp_counts = _ngrams(hyp_tokens, n)
            if not hyp_counts:
                continue
            ref_counts = _ngrams(ref_tokens, n)
            totals[n - 1] += sum(hyp_counts.values())
            matches[n - 1] += sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())

    precisions = []
    for n in range(1, MAX_ORDER + 1):
        m, t = matches[n - 1], totals[n - 1]
        if m > 0:
            precisions.append(m / t)
        elif n >= 2:
            precisions.append((m + 1) / (t + 1))
        else:
            precisions.append(0.0)

    if hyp_len == 0 or precisions[0] == 0.0:
        bp = 0.0 if hyp_len < ref_len else 1.0
        return BleuScore(0.0, tuple(precisions), bp, hyp_len, ref_len)

    bp = math.exp(1 - ref_len / hyp_len) if hyp_len < ref_len else 1.0
    log_mean = sum(math.log(p) for p in precisions) / MAX_ORDER
    score = 100.0 * bp * math.exp(log_mean)
    return BleuScore(score, tuple(precisions), bp, hyp_len, ref_len)


@dataclass
class ScoreMatrix:
    """Per-direction BLEU plus the standard direction-class averages.

    The classes are defined relative to English: X->En (into English),
    En->Y (out of English), X->Y (neither side English), and the overall
    mean. An empty class averages to None.
    """

    scores: dict[Direction, BleuScore]
    english: str = "en"

    def _mean(self, directions) -> float | None:
        values = [self.scores[d].score for d in directions]
        return sum(values) / len(values) if values else None

    @property
    def avg_x_to_en(self) -> float | None:
        return self._mean([d for d in self.scores if d.tgt == self.english])

    @property
    def avg_en_to_y(self) -> float | None:
        return self._mean([d for d in self.scores if d.src == self.english])

    @property
    def avg_x_to_y(self) -> float | None:
        return self._mean([d for d in self.scores
                           if self.english not in (d.src, d.tgt)])

    @property
    def avg_all(self) -> float | None:
        return self._mean(list(self.scores))

    def save(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
            fh.write("# src\ttgt\tscore\tp1\tp2\tp3\tp4\tbp\thyp_len\tref_len\n")
            for d in sorted(self.scores):
                s = self.scores[d]
                ps = "\t".join(f"{p:.6f}" for p in s.precisions)
                fh.write(f"{d.src}\t{d.tgt}\t{s.score:.6f}\t{ps}"
                         f"\t{s.brevity_penalty:.6f}\t{s.hyp_len}\t{s.ref_len}\n")

    @classmethod
    def load(cls, path: str | Path, english: str = "en") -> "ScoreMatrix":
        scores: dict[Direction, BleuScore] = {}
        with Path(path).open(encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                src, tgt, score, p1, p2, p3, p4, bp, hl, rl = line.split("\t")
                scores[Direction(src, tgt)] = BleuScore(
                    float(score), (float(p1), float(p2), float(p3), float(p4)),
                    float(bp), int(hl), int(rl))
        return cls(scores, english)


DevSet = Mapping[Direction, tuple[Sequence[str], Sequence[str]]]


def evaluate_directions(
    translator: Translator,
    devset: DevSet,
    config: DecodingConfig | None = None,
    strategy: Strategy = Direct(),
    tokenizer: SubwordTokenizer | None = None,
    english: str = "en",
) -> ScoreMatrix:
    """Score every devset direction under one decoding strategy.

    With a pivot strategy, directions into or out of the pivot language are
    decoded directly (a pivot through itself is undefined). ``tokenizer``
    defaults to the toolkit's subword tokenizer.
    """
    tok = tokenizer if tokenizer is not None else default_tokenizer()
    scores: dict[Direction, BleuScore] = {}
    for direction in sorted(devset):
        sources, references = devset[direction]
        if isinstance(strategy, PivotVia) and strategy.lang not in (direction.src,
                                                                    direction.tgt):
            hyps = pivot_translate(translator, sources, direction.src,
                                   direction.tgt, strategy.lang, config)
        else:
            hyps = translator.translate(sources, direction, config)
        scores[direction] = corpus_bleu(hyps, references, tok)
    return ScoreMatrix(scores, english)
