"""Data augmentation planners and the plan runner.

Three schemes, all producing tab-separated shards labeled with their origin
pool:

  * back-translation: monolingual English is translated to X; the English
    side is kept verbatim, giving X->en pairs (synthetic source, authentic
    target) and en->X pairs from the same pass.
  * dual-pseudo: the same English lines are translated to X and to Y; the
    (X, Y) columns are aligned through the shared English row.
  * triangulation: one side of an existing (X1, Y1) bitext is translated
    into a third language, yielding (X1, Y2) or (X2, Y1).

Planning is pure; ``run_plan`` does the translation and I/O. Each en->X
pass over a given input is computed once and reused across tasks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import CorpusManifest, Direction, OriginPool, ShardEntry, write_shard
from .errors import (
    EmptyMonolingualError,
    EnglishInPairError,
    NothingToDoError,
    UnsupportedDirectionError,
)
from .translator import DecodingConfig, Translator


class TaskKind(enum.Enum):
    BACK_TRANSLATION = "bt"
    DUAL_PSEUDO = "dual"
    TRIANGULATION = "tri"


@dataclass(frozen=True)
class MonoCorpusRef:
    """A monolingual corpus: one sentence per line."""

    path: Path
    lang: str


@dataclass(frozen=True)
class BitextCorpusRef:
    """A parallel corpus: ``source<TAB>target`` per line."""

    path: Path
    direction: Direction


@dataclass(frozen=True)
class TaskOutput:
    direction: Direction
    origin: OriginPool


@dataclass(frozen=True)
class AugmentationTask:
    kind: TaskKind
    input_path: Path
    input_lang: str | None          # set for mono inputs
    input_direction: Direction | None   # set for bitext inputs
    needed: tuple[Direction, ...]
    outputs: tuple[TaskOutput, ...]


@dataclass
class AugmentationPlan:
    tasks: list[AugmentationTask]

    @property
    def needed_directions(self) -> set[Direction]:
        return {d for task in self.tasks for d in task.needed}

    def extend(self, other: "AugmentationPlan") -> "AugmentationPlan":
        return AugmentationPlan(self.tasks + other.tasks)


def _require_nonempty(ref: MonoCorpusRef) -> None:
    if not ref.path.exists() or ref.path.stat().st_size == 0:
        raise EmptyMonolingualError(f"monolingual corpus {ref.path} is missing or empty")


def plan_backtranslation(mono: MonoCorpusRef, langs: Sequence[str]) -> AugmentationPlan:
    """One task per target language X: translate the monolingual side to X
    and emit both the X->en and en->X orientations from the single pass."""
    if mono.lang in langs:
        raise ValueError(f"target languages must exclude the monolingual side {mono.lang!r}")
    tasks = []
    if langs:
        _require_nonempty(mono)
    for lang in langs:
        tasks.append(AugmentationTask(
            kind=TaskKind.BACK_TRANSLATION,
            input_path=mono.path,
            input_lang=mono.lang,
            input_direction=None,
            needed=(Direction(mono.lang, lang),),
            outputs=(
                TaskOutput(Direction(lang, mono.lang), OriginPool.BACK_TRANSLATION),
                TaskOutput(Direction(mono.lang, lang), OriginPool.BACK_TRANSLATION),
            ),
        ))
    return AugmentationPlan(tasks)


def plan_dual_pseudo(mono: MonoCorpusRef, pairs: Sequence[Direction]) -> AugmentationPlan:
    """One task per (X, Y) direction; both sides are translations of the
    same monolingual line, so row i of the output aligns through row i of
    the input."""
    for d in pairs:
        if mono.lang in (d.src, d.tgt):
            raise EnglishInPairError(
                f"dual-pseudo pair {d} must not contain the pivot language {mono.lang!r}")
    tasks = []
    if pairs:
        _require_nonempty(mono)
    for d in pairs:
        tasks.append(AugmentationTask(
            kind=TaskKind.DUAL_PSEUDO,
            input_path=mono.path,
            input_lang=mono.lang,
            input_direction=None,
            needed=(Direction(mono.lang, d.src), Direction(mono.lang, d.tgt)),
            outputs=(TaskOutput(d, OriginPool.DUAL_PSEUDO),),
        ))
    return AugmentationPlan(tasks)


def all_ordered_pairs(langs: Sequence[str]) -> list[Direction]:
    """All K*(K-1) ordered directions over a language set."""
    return [Direction(a, b) for a in langs for b in langs if a != b]


def plan_triangulation(
    bitext: BitextCorpusRef,
    new_src: str | None = None,
    new_tgt: str | None = None,
) -> AugmentationPlan:
    """Extend an (X1, Y1) bitext with a third language on either side."""
    if new_src is None and new_tgt is None:
        raise NothingToDoError("triangulation needs new_src and/or new_tgt")
    x1, y1 = bitext.direction.src, bitext.direction.tgt
    tasks = []
    if new_tgt is not None:
        if new_tgt in (x1, y1):
            raise ValueError(f"new target {new_tgt!r} collides with the bitext sides")
        tasks.append(AugmentationTask(
            kind=TaskKind.TRIANGULATION,
            input_path=bitext.path,
            input_lang=None,
            input_direction=bitext.direction,
            needed=(Direction(y1, new_tgt),),
            outputs=(TaskOutput(Direction(x1, new_tgt), OriginPool.DUAL_PSEUDO),),
        ))
    if new_src is not None:
        if new_src in (x1, y1):
            raise ValueError(f"new source {new_src!r} collides with the bitext sides")
        tasks.append(AugmentationTask(
            kind=TaskKind.TRIANGULATION,
            input_path=bitext.path,
            input_lang=None,
            input_direction=bitext.direction,
            needed=(Direction(x1, new_src),),
            outputs=(TaskOutput(Direction(new_src, y1), OriginPool.DUAL_PSEUDO),),
        ))
    return AugmentationPlan(tasks)


def run_plan(
    plan: AugmentationPlan,
    translator: Translator,
    config: DecodingConfig | None,
    out_dir: str | Path,
) -> CorpusManifest:
    """Execute a plan, writing one shard per task output.

    Fails fast (before writing anything) if the translator is missing any
    needed direction. Every en->X translation pass over a given input file
    is computed once and shared between tasks.
    """
    missing = sorted(plan.needed_directions - translator.supported_directions)
    if missing:
        raise UnsupportedDirectionError(
            "translator does not support: " + ", ".join(str(d) for d in missing))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    line_cache: dict[Path, list[str]] = {}
    translation_cache: dict[tuple[Path, Direction], list[str]] = {}

    def input_lines(path: Path) -> list[str]:
        if path not in line_cache:
            with path.open(encoding="utf-8") as fh:
                line_cache[path] = [line.rstrip("\n") for line in fh]
        return line_cache[path]

    def translated(path: Path, lines: list[str], direction: Direction) -> list[str]:
        key = (path, direction)
        if key not in translation_cache:
            translation_cache[key] = translator.translate(lines, direction, config)
        return translation_cache[key]

    entries: list[ShardEntry] = []
    used_names: set[str] = set()

    def emit(kind: TaskKind, direction: Direction, origin: OriginPool,
             rows: Iterable[tuple[str, str]]) -> None:
        name = f"{kind.value}.{direction}.tsv"
        if name in used_names:
            i = 2
            while f"{kind.value}.{direction}.{i}.tsv" in used_names:
                i += 1
            name = f"{kind.value}.{direction}.{i}.tsv"
        used_names.add(name)
        count = write_shard(out_dir / name, rows)
        entries.append(ShardEntry(name, out_dir / name, direction, origin, count))

    for task in plan.tasks:
        lines = input_lines(task.input_path)
        if task.kind == TaskKind.BACK_TRANSLATION:
            lang = task.needed[0].tgt
            synthetic = translated(task.input_path, lines, task.needed[0])
            for output in task.outputs:
                if output.direction.src == lang:
                    emit(task.kind, output.direction, output.origin,
                         zip(synthetic, lines))
                else:
                    emit(task.kind, output.direction, output.origin,
                         zip(lines, synthetic))
        elif task.kind == TaskKind.DUAL_PSEUDO:
            out = task.outputs[0]
            to_src, to_tgt = task.needed
            xs = translated(task.input_path, lines, to_src)
            ys = translated(task.input_path, lines, to_tgt)
            emit(task.kind, out.direction, out.origin, zip(xs, ys))
        else:  # TRIANGULATION
            sources, targets = [], []
            for line in lines:
                s, _, t = line.partition("\t")
                sources.append(s)
                targets.append(t)
            out = task.outputs[0]
            hop = task.needed[0]
            if hop.src == task.input_direction.tgt:
                new = translator.translate(targets, hop, config)
                emit(task.kind, out.direction, out.origin, zip(sources, new))
            else:
                new = translator.translate(sources, hop, config)
                emit(task.kind, out.direction, out.origin, zip(new, targets))

    return CorpusManifest(entries, out_dir)


# --- plan file serialization (TSV, one task per line) -----------------------

def save_plan(plan: AugmentationPlan, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("# kind\tinput_path\tinput_meta\tneeded\toutputs\n")
        for task in plan.tasks:
            meta = (f"lang={task.input_lang}" if task.input_lang
                    else f"dir={task.input_direction}")
            needed = ",".join(str(d) for d in task.needed)
            outputs = ",".join(f"{o.direction}:{o.origin.value}" for o in task.outputs)
            fh.write(f"{task.kind.value}\t{task.input_path}\t{meta}\t{needed}\t{outputs}\n")


def load_plan(path: str | Path) -> AugmentationPlan:
    tasks = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            kind_text, input_path, meta, needed_text, outputs_text = line.split("\t")
            kind = TaskKind(kind_text)
            input_lang = meta[5:] if meta.startswith("lang=") else None
            input_direction = Direction.parse(meta[4:]) if meta.startswith("dir=") else None
            needed = tuple(Direction.parse(d) for d in needed_text.split(","))
            outputs = []
            for chunk in outputs_text.split(","):
                d, _, origin = chunk.partition(":")
                outputs.append(TaskOutput(Direction.parse(d), OriginPool.parse(origin)))
            tasks.append(AugmentationTask(kind, Path(input_path), input_lang,
                                          input_direction, needed, tuple(outputs)))
    return AugmentationPlan(tasks)
