"""Corpus cleaning: the filter ladder, language tagging, token truncation,
and a seeded external-memory shuffle.

Filter checks run in a fixed order so rejection reasons are deterministic:
Empty -> BadLangId -> TooLong -> ContainsUnk -> WrongScript -> RatioExceeded.
Word limits apply to whitespace-separated words; the ratio and truncation
limits apply to subword tokens. The ratio is checked before truncation.
"""

from __future__ import annotations

import enum
import random
import tempfile
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .corpus import (
    CorpusManifest,
    SentencePair,
    ShardEntry,
    read_pairs,
    write_manifest,
)
from .errors import AlreadyTaggedError
from .subword import SubwordTokenizer

# ISO 15924-ish names -> Unicode character-name prefixes.
_SCRIPT_PREFIXES = {
    "cyrl": "CYRILLIC", "cyrillic": "CYRILLIC",
    "latn": "LATIN", "latin": "LATIN",
    "grek": "GREEK", "greek": "GREEK",
    "arab": "ARABIC", "arabic": "ARABIC",
    "deva": "DEVANAGARI", "devanagari": "DEVANAGARI",
    "taml": "TAMIL", "tamil": "TAMIL",
    "hang": "HANGUL", "hangul": "HANGUL",
}


@dataclass
class FilterConfig:
    max_words: int = 1024
    max_tokens: int = 512
    length_ratio_limit: float = 3.0
    unk_token: str = "[UNK]"
    script_rules: Mapping[str, str] = field(default_factory=dict)
    langid_required: bool = False

    def __post_init__(self):
        if self.max_words < 1 or self.max_tokens < 1:
            raise ValueError("max_words and max_tokens must be >= 1")
        if self.length_ratio_limit <= 1:
            raise ValueError("length_ratio_limit must be > 1")


class RejectReason(enum.Enum):
    EMPTY = "Empty"
    BAD_LANGID = "BadLangId"
    TOO_LONG = "TooLong"
    CONTAINS_UNK = "ContainsUnk"
    WRONG_SCRIPT = "WrongScript"
    RATIO_EXCEEDED = "RatioExceeded"


@dataclass(frozen=True)
class FilterVerdict:
    kept: bool
    reason: RejectReason | None = None
    transformed: SentencePair | None = None

    def __post_init__(self):
        if self.kept != (self.reason is None) or self.kept != (self.transformed is not None):
            raise ValueError("kept verdicts carry a pair, rejected ones a reason")


def _script_prefix(name: str) -> str:
    return _SCRIPT_PREFIXES.get(name.strip().lower(), name.strip().upper())


def _majority_outside_script(text: str, script: str) -> bool:
    """True when more than half of the alphabetic characters are outside the
    required script. The majority rule tolerates quoted names and loanwords."""
    prefix = _script_prefix(script)
    letters = inside = 0
    for ch in text:
        if not ch.isalpha():
            continue
        letters += 1
        if unicodedata.name(ch, "").startswith(prefix):
            inside += 1
    return letters > 0 and inside * 2 < letters


def apply_filters(
    pair: SentencePair,
    cfg: FilterConfig,
    tokenizer: SubwordTokenizer,
    langid: tuple[str, str] | None = None,
) -> FilterVerdict:
    """Run the filter ladder on one pair.

    ``langid`` is an externally supplied (source, target) language verdict;
    the toolkit itself does no language identification. Kept pairs come back
    truncated to ``cfg.max_tokens`` per side but otherwise unchanged.
    """
    if not pair.source.strip() or not pair.target.strip():
        return FilterVerdict(False, RejectReason.EMPTY)

    if langid is None:
        if cfg.langid_required:
            return FilterVerdict(False, RejectReason.BAD_LANGID)
    elif langid != (pair.direction.src, pair.direction.tgt):
        return FilterVerdict(False, RejectReason.BAD_LANGID)

    src_words = pair.source.split()
    tgt_words = pair.target.split()
    if len(src_words) > cfg.max_words or len(tgt_words) > cfg.max_words:
        return FilterVerdict(False, RejectReason.TOO_LONG)

    if cfg.unk_token in src_words or cfg.unk_token in tgt_words:
        return FilterVerdict(False, RejectReason.CONTAINS_UNK)

    for text, lang in ((pair.source, pair.direction.src), (pair.target, pair.direction.tgt)):
        script = cfg.script_rules.get(lang)
        if script and _majority_outside_script(text, script):
            return FilterVerdict(False, RejectReason.WRONG_SCRIPT)

    n_src = tokenizer.count(pair.source)
    n_tgt = tokenizer.count(pair.target)
    if max(n_src, n_tgt) / min(n_src, n_tgt) > cfg.length_ratio_limit:
        return FilterVerdict(False, RejectReason.RATIO_EXCEEDED)

    kept = replace(
        pair,
        source=truncate_tokens(pair.source, tokenizer, cfg.max_tokens),
        target=truncate_tokens(pair.target, tokenizer, cfg.max_tokens),
    )
    return FilterVerdict(True, transformed=kept)


def language_tag(direction) -> str:
    """The tag prefixed to a source sentence: the *target* language, which is
    what actually encodes the translation direction for a shared encoder."""
    return f"__{direction.tgt}__"


def prefix_language_tag(pair: SentencePair) -> SentencePair:
    """Prefix the source with the target-language tag. Tagging twice raises."""
    head = pair.source.split(" ", 1)[0]
    if len(head) > 4 and head.startswith("__") and head.endswith("__"):
        raise AlreadyTaggedError(f"source already tagged: {head}")
    return replace(pair, source=f"{language_tag(pair.direction)} {pair.source}")


def _starts_with_combining(token: str) -> bool:
    return bool(token) and unicodedata.combining(token[0]) > 0


def truncate_tokens(text: str, tokenizer: SubwordTokenizer, max_tokens: int) -> str:
    """Keep at most ``max_tokens`` subword tokens and detokenize.

    Text already within the limit is returned unchanged (byte-identical).
    The cut backs off past combining marks so no grapheme is split.
    """
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    tokens = tokenizer.tokenize(text)
    if len(tokens) <= max_tokens:
        return text
    cut = max_tokens
    while 0 < cut < len(tokens) and _starts_with_combining(tokens[cut]):
        cut -= 1
    return tokenizer.detokenize(tokens[:cut])


def shuffle_dataset(
    manifest: CorpusManifest,
    seed: int,
    out_path: str | Path,
    lines_per_chunk: int = 100_000,
) -> int:
    """Shuffle every line of every shard into one output file.

    External-memory: lines are scattered into temporary chunk files by a
    seeded RNG, then each chunk is shuffled in memory and concatenated, so
    peak RAM is bounded by the chunk size rather than the corpus size.
    Same seed, same inputs -> byte-identical output. Returns the line count.
    """
    rng = random.Random(seed)
    out_path = Path(out_path)

    total = 0
    for entry in manifest.shards:
        with entry.path.open("rb") as fh:
            for _ in fh:
                total += 1
    n_chunks = max(1, -(-total // lines_per_chunk))

    with tempfile.TemporaryDirectory(prefix="mtforge-shuffle-") as tmp:
        chunk_paths = [Path(tmp) / f"chunk{i:05d}" for i in range(n_chunks)]
        handles = [p.open("w", encoding="utf-8", newline="\n") for p in chunk_paths]
        try:
            for entry in manifest.shards:
                with entry.path.open(encoding="utf-8") as fh:
                    for line in fh:
                        handles[rng.randrange(n_chunks)].write(line.rstrip("\n") + "\n")
        finally:
            for h in handles:
                h.close()
        written = 0
        with out_path.open("w", encoding="utf-8", newline="\n") as out:
            for p in chunk_paths:
                with p.open(encoding="utf-8") as fh:
                    lines = fh.readlines()
                rng.shuffle(lines)
                out.writelines(lines)
                written += len(lines)
    return written


def filter_corpus(
    manifest: CorpusManifest,
    cfg: FilterConfig,
    tokenizer: SubwordTokenizer,
    out_dir: str | Path,
    rejects_dir: str | Path | None = None,
    langid_dir: str | Path | None = None,
) -> tuple[CorpusManifest, dict[str, int]]:
    """Filter every shard of a manifest into ``out_dir``.

    Writes one filtered shard per input shard (same basename), an
    ``out_dir/manifest.tsv`` describing the kept shards, and, when
    ``rejects_dir`` is given, per-shard reject files with a reason column.
    Language-id verdicts are read from ``langid_dir/<shard-name>.langid``
    sidecar files (``src<TAB>tgt`` per corpus line) when present.

    Returns the filtered manifest and a counter of kept/rejected lines.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if rejects_dir is not None:
        rejects_dir = Path(rejects_dir)
        rejects_dir.mkdir(parents=True, exist_ok=True)

    counts: dict[str, int] = {"kept": 0}
    for reason in RejectReason:
        counts[f"rejected_{reason.value}"] = 0

    entries: list[ShardEntry] = []
    seen_names: set[str] = set()
    for idx, entry in enumerate(manifest.shards):
        name = Path(entry.raw_path).name
        if name in seen_names:
            name = f"{idx:03d}_{name}"
        seen_names.add(name)

        verdicts = _shard_langid(langid_dir, entry) if langid_dir else None
        kept = 0
        out_file = out_dir / name
        rej_fh = (rejects_dir / name).open("w", encoding="utf-8", newline="\n") \
            if rejects_dir is not None else None
        try:
            with out_file.open("w", encoding="utf-8", newline="\n") as out_fh:
                for pair in read_pairs(manifest, entry.shard_id):
                    langid = None
                    if verdicts is not None and pair.line_no <= len(verdicts):
                        langid = verdicts[pair.line_no - 1]
                    verdict = apply_filters(pair, cfg, tokenizer, langid)
                    if verdict.kept:
                        out_fh.write(f"{verdict.transformed.source}\t{verdict.transformed.target}\n")
                        kept += 1
                        counts["kept"] += 1
                    else:
                        counts[f"rejected_{verdict.reason.value}"] += 1
                        if rej_fh is not None:
                            rej_fh.write(f"{pair.source}\t{pair.target}\t{verdict.reason.value}\n")
        finally:
            if rej_fh is not None:
                rej_fh.close()
        entries.append(ShardEntry(name, out_file, entry.direction, entry.origin, kept))

    filtered = CorpusManifest(entries, out_dir)
    write_manifest(filtered, out_dir / "manifest.tsv")
    return filtered, counts


def _shard_langid(langid_dir, entry) -> list[tuple[str, str]] | None:
    sidecar = Path(langid_dir) / (Path(entry.raw_path).name + ".langid")
    if not sidecar.exists():
        return None
    verdicts = []
    with sidecar.open(encoding="utf-8") as fh:
        for line in fh:
            src, _, tgt = line.rstrip("\n").partition("\t")
            verdicts.append((src, tgt))
    return verdicts
