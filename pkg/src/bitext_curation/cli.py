"""Command-line entry point.

Exit status: 0 on success, 1 on data or I/O errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import PipelineConfig, load_config
from .corpus import Corpus, align_by_id, read_alt_file
from .div import SplitSpec, split
from .epds import ScoredPair, apply_top_k, audit_records, score_corpus, select_above
from .errors import CurationError, EmptyText
from .features import base_score, extract_features
from .lm_scoring import RemoteScorer
from .metrics import evaluate
from .pipeline import by_language, bundled_corpus_path, load_pairs, run_pipeline, write_split
from .records import (
    MANIFEST_KEY,
    atomic_write_text,
    iter_jsonl,
    manifest,
    read_json,
    read_jsonl,
    write_json,
    write_jsonl,
)
from .report import build_report, format_report
from .sar import SarConfig, score_records
from .training import PromptTemplate, make_sft_record

log = logging.getLogger("bitext_curation")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _records(path) -> list[tuple[str, str]]:
    if str(path).endswith(".jsonl"):
        return [(r["id"], r["text"]) for r in iter_jsonl(path)]
    return read_alt_file(path)


def _config(args, **overrides) -> PipelineConfig:
    cfg = load_config(getattr(args, "config", None))
    clean = {k: v for k, v in overrides.items() if v is not None}
    scorer = {}
    if getattr(args, "scorer_url", None):
        scorer["endpoint"] = args.scorer_url
    for name in ("sigma", "tau"):
        if getattr(args, name, None) is not None:
            scorer[name] = getattr(args, name)
    if scorer:
        cfg = replace(cfg, scorer=replace(cfg.scorer, **scorer))
    if getattr(args, "seed", None) is not None:
        clean["seed"] = args.seed
    return replace(cfg, **clean) if clean else cfg


def _header(cfg: PipelineConfig) -> dict:
    return manifest(cfg.hash(), cfg.seed)


def _parse_k_map(text: str) -> dict[str, int]:
    out = {}
    for item in text.split(","):
        lang, _, k = item.partition("=")
        if not k:
            raise UsageError(f"bad --k-per-lang entry {item!r}, expected lang=K")
        out[lang.strip()] = int(k.replace("_", ""))
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_ingest(args) -> None:
    recs = read_alt_file(args.input, nfc=args.nfc)
    n = write_jsonl(args.out, ({"id": i, "text": t} for i, t in recs), manifest())
    log.info("ingested %d records", n)


def cmd_align(args) -> None:
    domains = dict(read_alt_file(args.domains)) if args.domains else None
    corpus = align_by_id(_records(args.src), _records(args.zh), args.lang, domains)
    write_jsonl(args.out, (p.to_dict() for p in corpus), manifest())
    log.info("aligned %d pairs, dropped %d one-sided ids", len(corpus), corpus.dropped)


def cmd_features(args) -> None:
    cfg = _config(args)
    rows, skipped = [], 0
    for p in load_pairs(args.input):
        try:
            fv = extract_features(p.source_text, p.target_text)
        except EmptyText:
            skipped += 1
            continue
        rows.append({"id": p.id, **fv.to_dict(), "s_base": base_score(fv, cfg.base)})
    write_jsonl(args.out, rows, _header(cfg))
    if skipped:
        log.warning("skipped %d pairs with an empty side", skipped)


def cmd_score(args) -> None:
    cfg = _config(args)
    scorer = RemoteScorer.from_config(cfg.scorer) if cfg.scorer.resolved_endpoint() else None
    tpl = PromptTemplate.from_file(args.template) if args.template else None
    scored, drops = [], []
    for corpus in by_language(load_pairs(args.input)).values():
        s, d = score_corpus(corpus, cfg.epds, scorer, tpl)
        scored += s
        drops += d
    write_jsonl(args.out, (sp.to_dict() for sp in scored), _header(cfg))
    if args.audit:
        # drops only; ranks come from `select --audit`
        write_jsonl(args.audit, drops, _header(cfg))


def cmd_select(args) -> None:
    cfg = _config(args)
    scored = [ScoredPair.from_dict(d) for d in read_jsonl(args.input)]
    selected, audit = [], []
    if args.threshold is not None:
        selected = select_above(scored, args.threshold)
        audit = audit_records(scored, len(selected))
    else:
        if args.k_per_lang:
            kmap = _parse_k_map(args.k_per_lang)
            groups: dict[str, list[ScoredPair]] = {}
            for sp in scored:
                groups.setdefault(sp.pair.source_lang.value, []).append(sp)
            for lang in sorted(groups):
                if lang not in kmap:
                    raise UsageError(f"no K given for language {lang}")
                res = apply_top_k(groups[lang], kmap[lang], strict=args.strict, source_lang=lang)
                selected += res.selected
                audit += res.audit
        else:
            res = apply_top_k(scored, args.k, strict=args.strict)
            selected, audit = res.selected, res.audit
    n = write_jsonl(args.out, (sp.pair.to_dict() for sp in selected), _header(cfg))
    if args.audit:
        write_jsonl(args.audit, audit, _header(cfg))
    log.info("selected %d of %d scored pairs", n, len(scored))


def cmd_split(args) -> None:
    cfg = _config(args)
    pairs = load_pairs(args.input)
    if not pairs:
        raise CurationError(f"{args.input} holds no pairs")
    spec = SplitSpec(args.train, args.dev, args.test, seed=cfg.seed)
    result = split(Corpus(tuple(pairs), pairs[0].source_lang), spec)
    write_split(result, args.outdir, _header(cfg))


def cmd_sar(args) -> None:
    sar = SarConfig(
        pattern=args.pattern,
        mode=args.mode,
        tolerance=args.tolerance if args.tolerance is not None else SarConfig.tolerance,
    )
    rows = score_records(read_jsonl(args.input), sar)
    write_jsonl(args.out, rows, manifest())


def cmd_ltp(args) -> None:
    tpl = PromptTemplate.from_file(args.template) if args.template else PromptTemplate()
    rows = (make_sft_record(p, tpl).to_dict() for p in load_pairs(args.input))
    write_jsonl(args.out, rows, manifest())


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\r\n") for line in fh]


def cmd_eval(args) -> None:
    rep = evaluate(
        _read_lines(args.hyp),
        _read_lines(args.ref),
        smoothing=args.smoothing,
        granularity=args.granularity,
        level=args.level,
    ).to_dict()
    if args.lang:
        rep["lang"] = args.lang
    if args.metric != "all":
        rep = {k: rep[k] for k in ("lang", args.metric, "level", "segments") if k in rep}
    if args.out:
        rep[MANIFEST_KEY] = manifest()
    text = json.dumps(rep, ensure_ascii=False, sort_keys=True, indent=2) + "\n"
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)


def cmd_report(args) -> None:
    audit = []
    for path in args.audit or []:
        audit += read_jsonl(path)
    metrics = [read_json(p) for p in args.metrics or []]
    rep = build_report(audit, metrics)
    if args.out:
        write_json(args.out, {**rep, MANIFEST_KEY: manifest()})
    text = format_report(rep)
    if args.text:
        atomic_write_text(args.text, text)
    sys.stdout.write(text)


def cmd_pipeline(args) -> None:
    overrides = {}
    if args.k is not None:
        overrides["k"] = args.k
    cfg = _config(args, **overrides)
    if args.train is not None:
        cfg = replace(cfg, split=SplitSpec(args.train, args.dev, args.test, cfg.seed))
    source = args.input or bundled_corpus_path()
    summary = run_pipeline(load_pairs(source), cfg, args.outdir)
    sys.stdout.write((Path(args.outdir) / "report.txt").read_text(encoding="utf-8"))
    log.info("config hash %s", summary["config_hash"])


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bitext-curate", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        return sp

    def config_flags(sp):
        sp.add_argument("--config", help="JSON pipeline config")
        sp.add_argument("--seed", type=int)

    sp = add("ingest", cmd_ingest, "parse an id<TAB>text file into JSONL records")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--nfc", action="store_true", help="NFC-normalize texts")

    sp = add("align", cmd_align, "join source and Chinese records by shared id")
    sp.add_argument("--src", required=True)
    sp.add_argument("--zh", required=True)
    sp.add_argument("--lang", required=True)
    sp.add_argument("--domains", help="id<TAB>domain file")
    sp.add_argument("--out", required=True)

    sp = add("features", cmd_features, "dump surface features and base scores")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    config_flags(sp)

    sp = add("score", cmd_score, "validity filter plus base/perplexity/IFD scoring")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--audit", help="write drop reasons here")
    sp.add_argument("--scorer-url")
    sp.add_argument("--sigma", type=float)
    sp.add_argument("--tau", type=float)
    sp.add_argument("--template", help="prompt template file")
    config_flags(sp)

    sp = add("select", cmd_select, "keep the top-K (or above-threshold) scored pairs")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--k", type=int)
    grp.add_argument("--k-per-lang", help="e.g. fil=1851,id=1779")
    grp.add_argument("--threshold", type=float)
    sp.add_argument("--audit")
    sp.add_argument("--strict", action="store_true", help="fail when fewer than K pairs are valid")
    config_flags(sp)

    sp = add("split", cmd_split, "exact-size domain-proportional train/dev/test split")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--train", type=int, required=True)
    sp.add_argument("--dev", type=int, required=True)
    sp.add_argument("--test", type=int, required=True)
    config_flags(sp)

    sp = add("sar", cmd_sar, "extract QE scores and compute alignment rewards")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--mode", choices=("cue", "permissive"), default="cue")
    sp.add_argument("--pattern", help="custom score regex; group 1 is the score")
    sp.add_argument("--tolerance", type=int)

    sp = add("ltp", cmd_ltp, "build language-token-prefixed SFT records")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--template")

    sp = add("eval", cmd_eval, "BLEU-4 / chrF / ROUGE-L / BLEU-chrF for line-aligned files")
    sp.add_argument("--hyp", required=True)
    sp.add_argument("--ref", required=True)
    sp.add_argument("--metric", choices=("all", "bleu4", "chrf", "rouge_l", "bleu_chrf"), default="all")
    sp.add_argument("--smoothing", choices=("add-one", "none"), default="add-one")
    sp.add_argument("--granularity", choices=("word", "char"), default="word")
    sp.add_argument("--level", choices=("corpus", "sentence"), default="corpus")
    sp.add_argument("--lang")
    sp.add_argument("--out")

    sp = add("report", cmd_report, "retention and metric tables from run artifacts")
    sp.add_argument("--audit", nargs="*")
    sp.add_argument("--metrics", nargs="*")
    sp.add_argument("--out")
    sp.add_argument("--text")

    sp = add("pipeline", cmd_pipeline, "score, select, split, export SFT, report")
    sp.add_argument("--in", dest="input", help="corpus JSONL (default: bundled synthetic corpus)")
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--train", type=int)
    sp.add_argument("--dev", type=int)
    sp.add_argument("--test", type=int)
    sp.add_argument("--scorer-url")
    config_flags(sp)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 2
        if args.command == "pipeline" and args.train is not None and (args.dev is None or args.test is None):
            raise UsageError("--train, --dev and --test must be given together")
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (CurationError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
