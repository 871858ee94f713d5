"""Command-line entry point.

Exit codes: 0 success, 1 validation/usage errors, 2 I/O errors. Every
randomized subcommand takes ``--seed``; when omitted, a fresh seed is drawn
and printed so the run can be reproduced.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import augmentation, cleaning, curriculum, demo
from .corpus import Direction, corpus_stats, load_manifest, write_manifest
from .errors import MTForgeError
from .evaluation import ScoreMatrix, corpus_bleu
from .routing import RoutingTable, build_routing_table, route_translate
from .sampling import MixtureWeights, language_distribution, make_scheduler
from .subword import SubwordTokenizer, default_tokenizer
from .translator import (
    CipherLanguage,
    LineProtocolTranslator,
    derive_language_seed,
    make_cipher_translator,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route through our own
    # error handling so usage problems map to exit code 1.
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: {message}")


def _read_lines(path: str | Path) -> list[str]:
    with Path(path).open(encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _write_lines(path: str | Path, lines) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = random.SystemRandom().randrange(2**63)
    print(f"seed\t{seed}")
    return seed


def _tokenizer(args) -> SubwordTokenizer:
    if getattr(args, "vocab", None):
        return SubwordTokenizer.from_file(args.vocab)
    return default_tokenizer()


def _make_translator(spec: str, langs, directions):
    """Build a translator from a ``cipher:SEED`` or ``exec:CMD`` spec."""
    if spec.startswith("cipher:"):
        seed = int(spec[len("cipher:"):])
        ciphers = [CipherLanguage.from_seed(lang, derive_language_seed(seed, lang))
                   for lang in sorted(set(langs) - {"en"})]
        return make_cipher_translator(ciphers)
    if spec.startswith("exec:"):
        return LineProtocolTranslator(spec[len("exec:"):], directions)
    raise MTForgeError(f"unknown translator spec {spec!r} (use cipher:SEED or exec:CMD)")


# --- subcommand handlers -----------------------------------------------------

def _cmd_stats(args) -> int:
    manifest = load_manifest(args.manifest, verify=args.verify)
    stats = corpus_stats(manifest)
    lines = [f"language\t{lang}\t{n}" for lang, n in stats.per_language.items()]
    lines += [f"direction\t{d.src}\t{d.tgt}\t{n}" for d, n in stats.per_direction.items()]
    if args.out:
        _write_lines(args.out, lines)
    else:
        print("\n".join(lines))
    return 0


def _cmd_filter(args) -> int:
    manifest = load_manifest(args.manifest)
    script_rules = {}
    for rule in args.script or []:
        lang, _, script = rule.partition("=")
        if not script:
            raise MTForgeError(f"--script expects lang=Script, got {rule!r}")
        script_rules[lang] = script
    cfg = cleaning.FilterConfig(
        max_words=args.max_words,
        max_tokens=args.max_tokens,
        length_ratio_limit=args.ratio,
        unk_token=args.unk_token,
        script_rules=script_rules,
        langid_required=args.langid_required,
    )
    _, counts = cleaning.filter_corpus(
        manifest, cfg, _tokenizer(args), args.out,
        rejects_dir=args.rejects, langid_dir=args.langid)
    for key in sorted(counts):
        print(f"{key}\t{counts[key]}")
    return 0


def _cmd_shuffle(args) -> int:
    manifest = load_manifest(args.manifest)
    seed = _resolve_seed(args)
    n = cleaning.shuffle_dataset(manifest, seed, args.out)
    print(f"lines\t{n}")
    return 0


def _cmd_sample(args) -> int:
    manifest = load_manifest(args.manifest)
    seed = _resolve_seed(args)
    stats = corpus_stats(manifest)
    dist = language_distribution(stats, args.temperature)
    weights = MixtureWeights.parse(args.mixture)
    scheduler = make_scheduler(manifest, stats, dist, weights, args.batch_size, seed)
    with Path(args.report).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("# batch\tlanguage\torigin\tcount\n")
        for b in range(args.batches):
            batch = scheduler.next_batch()
            for (lang, origin), n in sorted(batch.composition.items(),
                                            key=lambda kv: (kv[0][0], kv[0][1].value)):
                fh.write(f"{b}\t{lang}\t{origin.value}\t{n}\n")
    print(f"batches\t{args.batches}")
    return 0


def _cmd_bleu(args) -> int:
    hyps = _read_lines(args.hyp)
    refs = _read_lines(args.ref)
    tokenizer = SubwordTokenizer.from_file(args.vocab) if args.vocab else None
    result = corpus_bleu(hyps, refs, tokenizer)
    precisions = "\t".join(f"{p:.4f}" for p in result.precisions)
    print(f"{result.score:.2f}\t{precisions}\t{result.brevity_penalty:.4f}")
    return 0


def _cmd_augment_plan(args) -> int:
    if args.kind == "bt":
        if not args.mono or not args.langs:
            raise MTForgeError("--kind bt needs --mono and --langs")
        plan = augmentation.plan_backtranslation(
            augmentation.MonoCorpusRef(Path(args.mono), args.mono_lang),
            args.langs.split(","))
    elif args.kind == "dual":
        if not args.mono:
            raise MTForgeError("--kind dual needs --mono")
        if args.pairs:
            pairs = [Direction.parse(p) for p in args.pairs.split(",")]
        elif args.langs:
            pairs = augmentation.all_ordered_pairs(args.langs.split(","))
        else:
            raise MTForgeError("--kind dual needs --pairs or --langs")
        plan = augmentation.plan_dual_pseudo(
            augmentation.MonoCorpusRef(Path(args.mono), args.mono_lang), pairs)
    else:  # tri
        if not args.bitext or not args.direction:
            raise MTForgeError("--kind tri needs --bitext and --direction")
        plan = augmentation.plan_triangulation(
            augmentation.BitextCorpusRef(Path(args.bitext),
                                         Direction.parse(args.direction)),
            new_src=args.new_src, new_tgt=args.new_tgt)
    augmentation.save_plan(plan, args.out)
    print(f"tasks\t{len(plan.tasks)}")
    return 0


def _cmd_augment_run(args) -> int:
    plan = augmentation.load_plan(args.plan)
    langs = {d.src for d in plan.needed_directions} | \
            {d.tgt for d in plan.needed_directions}
    translator = _make_translator(args.translator, langs, plan.needed_directions)
    manifest = augmentation.run_plan(plan, translator, None, args.out)
    write_manifest(manifest, Path(args.out) / "manifest.tsv")
    print(f"shards\t{len(manifest.shards)}")
    return 0


def _cmd_route_build(args) -> int:
    direct = ScoreMatrix.load(args.direct)
    pivot = ScoreMatrix.load(args.pivot)
    table = build_routing_table(direct, pivot, args.pivot_lang)
    table.save(args.out)
    pivoted = sum(1 for e in table.entries.values()
                  if e.strategy.__class__.__name__ == "PivotVia")
    print(f"entries\t{len(table.entries)}")
    print(f"pivot_routed\t{pivoted}")
    return 0


def _cmd_route_translate(args) -> int:
    table = RoutingTable.load(args.table)
    direction = Direction.parse(args.direction)
    langs = {direction.src, direction.tgt, table.pivot_lang}
    for d in table.entries:
        langs.update((d.src, d.tgt))
    directions = set(table.entries) | {direction}
    if table.pivot_lang not in (direction.src, direction.tgt):
        directions.add(Direction(direction.src, table.pivot_lang))
        directions.add(Direction(table.pivot_lang, direction.tgt))
    translator = _make_translator(args.translator, langs, directions)
    sentences = _read_lines(args.input)
    _write_lines(args.out, route_translate(translator, table, sentences, direction))
    print(f"sentences\t{len(sentences)}")
    return 0


def _cmd_curriculum_check(args) -> int:
    stages = curriculum.load_schedule(args.schedule)
    print(f"ok\t{len(stages)}")
    return 0


def _cmd_demo(args) -> int:
    seed = _resolve_seed(args)
    summary = demo.pipeline_demo(args.out, seed, direct_noise=args.direct_noise)
    print(f"summary\t{summary.name}")
    return 0


# --- parser ------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="mtforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("stats", help="per-language and per-direction corpus counts")
    p.add_argument("--manifest", required=True)
    p.add_argument("--verify", action="store_true",
                   help="recount shards against declared line counts")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("filter", help="run the cleaning filters over a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rejects")
    p.add_argument("--ratio", type=float, default=3.0)
    p.add_argument("--max-words", type=int, default=1024)
    p.add_argument("--max-tokens", type=int, default=512)
    p.add_argument("--unk-token", default="[UNK]")
    p.add_argument("--script", action="append", metavar="LANG=SCRIPT")
    p.add_argument("--langid", help="directory of per-shard langid sidecar files")
    p.add_argument("--langid-required", action="store_true")
    p.add_argument("--vocab")
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("shuffle", help="seeded shuffle of all shard lines")
    p.add_argument("--manifest", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_shuffle)

    p = sub.add_parser("sample", help="draw batches from the three-pool mixture")
    p.add_argument("--manifest", required=True)
    p.add_argument("--temperature", type=float, default=5.0)
    p.add_argument("--lambda", dest="mixture", default="0.6,0.2,0.2",
                   metavar="L1,L2,L3")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--batches", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--report", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("bleu", help="corpus BLEU between two files")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--vocab", help="subword vocabulary; whitespace tokens if omitted")
    p.set_defaults(func=_cmd_bleu)

    p = sub.add_parser("augment", help="plan and run data augmentation")
    aug = p.add_subparsers(dest="augment_command", parser_class=_Parser)
    pp = aug.add_parser("plan")
    pp.add_argument("--kind", choices=["bt", "dual", "tri"], required=True)
    pp.add_argument("--mono")
    pp.add_argument("--mono-lang", default="en")
    pp.add_argument("--langs")
    pp.add_argument("--pairs")
    pp.add_argument("--bitext")
    pp.add_argument("--direction")
    pp.add_argument("--new-src")
    pp.add_argument("--new-tgt")
    pp.add_argument("--out", required=True)
    pp.set_defaults(func=_cmd_augment_plan)
    pr = aug.add_parser("run")
    pr.add_argument("--plan", required=True)
    pr.add_argument("--translator", required=True, metavar="cipher:SEED|exec:CMD")
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=_cmd_augment_run)

    p = sub.add_parser("route", help="build routing tables and translate through them")
    route = p.add_subparsers(dest="route_command", parser_class=_Parser)
    rb = route.add_parser("build")
    rb.add_argument("--direct", required=True)
    rb.add_argument("--pivot", required=True)
    rb.add_argument("--pivot-lang", default="en")
    rb.add_argument("--out", required=True)
    rb.set_defaults(func=_cmd_route_build)
    rt = route.add_parser("translate")
    rt.add_argument("--table", required=True)
    rt.add_argument("--translator", required=True, metavar="cipher:SEED|exec:CMD")
    rt.add_argument("--direction", required=True)
    rt.add_argument("--input", required=True)
    rt.add_argument("--out", required=True)
    rt.set_defaults(func=_cmd_route_translate)

    p = sub.add_parser("curriculum", help="validate progressive-learning schedules")
    cur = p.add_subparsers(dest="curriculum_command", parser_class=_Parser)
    cc = cur.add_parser("check")
    cc.add_argument("--schedule", required=True)
    cc.set_defaults(func=_cmd_curriculum_check)

    p = sub.add_parser("demo", help="end-to-end pipeline on synthetic cipher data")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--direct-noise", type=float, default=0.0)
    p.set_defaults(func=_cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (MTForgeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        name = getattr(exc, "filename", None)
        detail = f"{exc.strerror}: {name}" if name else str(exc)
        print(f"io error: {detail}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
