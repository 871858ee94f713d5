"""Hybrid direct/pivot routing from validation scores.

A direction keeps direct decoding when its validation BLEU is at least the
pivot score (ties go direct: one decoding pass instead of two). Directions
into or out of the pivot language are always direct. Tables are built on a
validation split and applied unchanged to test data.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .corpus import Direction
from .errors import DirectionSetMismatchError, UnknownDirectionError
from .evaluation import ScoreMatrix
from .translator import (
    DecodingConfig,
    Direct,
    PivotVia,
    Strategy,
    Translator,
    pivot_translate,
)


@dataclass(frozen=True)
class RouteEntry:
    strategy: Strategy
    bleu_direct: float
    bleu_pivot: float


@dataclass
class RoutingTable:
    entries: dict[Direction, RouteEntry]
    pivot_lang: str

    def save(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
            fh.write("# src\ttgt\tstrategy\tpivot_lang\tbleu_direct\tbleu_pivot\n")
            for d in sorted(self.entries):
                e = self.entries[d]
                kind = "pivot" if isinstance(e.strategy, PivotVia) else "direct"
                fh.write(f"{d.src}\t{d.tgt}\t{kind}\t{self.pivot_lang}"
                         f"\t{e.bleu_direct:.6f}\t{e.bleu_pivot:.6f}\n")

    @classmethod
    def load(cls, path: str | Path) -> "RoutingTable":
        entries: dict[Direction, RouteEntry] = {}
        pivot_lang = "en"
        with Path(path).open(encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                src, tgt, kind, pivot_lang, direct_text, pivot_text = line.split("\t")
                strategy: Strategy = PivotVia(pivot_lang) if kind == "pivot" else Direct()
                entries[Direction(src, tgt)] = RouteEntry(
                    strategy, float(direct_text), float(pivot_text))
        return cls(entries, pivot_lang)


def build_routing_table(
    direct: ScoreMatrix,
    pivot: ScoreMatrix,
    pivot_lang: str = "en",
) -> RoutingTable:
    """Pick the better strategy per direction from two validation matrices."""
    if set(direct.scores) != set(pivot.scores):
        raise DirectionSetMismatchError(
            "direct and pivot matrices cover different direction sets")
    entries: dict[Direction, RouteEntry] = {}
    for direction in sorted(direct.scores):
        d = direct.scores[direction].score
        p = pivot.scores[direction].score
        if pivot_lang in (direction.src, direction.tgt) or d >= p:
            strategy: Strategy = Direct()
        else:
            strategy = PivotVia(pivot_lang)
        entries[direction] = RouteEntry(strategy, d, p)
    return RoutingTable(entries, pivot_lang)


def route_translate(
    translator: Translator,
    table: RoutingTable,
    sentences,
    direction: Direction,
    config: DecodingConfig | None = None,
) -> list[str]:
    """Translate through whichever strategy the table chose for a direction."""
    entry = table.entries.get(direction)
    if entry is None:
        raise UnknownDirectionError(f"no routing entry for {direction}")
    if isinstance(entry.strategy, PivotVia):
        return pivot_translate(translator, sentences, direction.src,
                               direction.tgt, entry.strategy.lang, config)
    return translator.translate(sentences, direction, config)
