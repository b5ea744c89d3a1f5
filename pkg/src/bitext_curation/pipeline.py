"""End-to-end curation run: score, select, split, export SFT records, report."""

from __future__ import annotations

from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .config import PipelineConfig
from .corpus import Corpus, LanguageTag, SentencePair
from .div import SPLIT_NAMES, SplitResult, SplitSpec, split
from .epds import EpdsResult, apply_top_k, score_corpus
from .lm_scoring import Scorer
from .records import MANIFEST_KEY, atomic_write_text, content_hash, manifest, read_jsonl, write_json, write_jsonl
from .report import build_report, format_report
from .training import PromptTemplate, make_sft_record

BUNDLED_CORPUS = "data/synthetic_1000.jsonl"


def bundled_corpus_path():
    return resources.files("bitext_curation").joinpath(BUNDLED_CORPUS)


def load_pairs(path) -> list[SentencePair]:
    return [SentencePair.from_dict(d) for d in read_jsonl(path)]


def by_language(pairs: Iterable[SentencePair]) -> dict[str, Corpus]:
    groups: dict[LanguageTag, list[SentencePair]] = {}
    for p in pairs:
        groups.setdefault(p.source_lang, []).append(p)
    return {lang.value: Corpus(tuple(ps), lang) for lang, ps in sorted(groups.items(), key=lambda kv: kv[0].value)}


def select_corpus(corpus: Corpus, cfg: PipelineConfig, scorer: Scorer | None = None,
                  template: PromptTemplate | None = None) -> EpdsResult:
    scored, drops = score_corpus(corpus, cfg.epds, scorer, template)
    return apply_top_k(scored, cfg.k_for(corpus.source_lang.value), drops, cfg.strict, corpus.source_lang.value)


def write_split(result: SplitResult, outdir, header: dict) -> dict:
    """Write train/dev/test JSONL plus quota report; returns the split manifest."""
    outdir = Path(outdir)
    hashes = {}
    for name in SPLIT_NAMES:
        recs = [p.to_dict() for p in result[name]]
        write_jsonl(outdir / f"{name}.jsonl", recs, header)
        hashes[name] = content_hash(recs)
    write_json(outdir / "quota_report.json", result.quota_report)
    meta = {**header, "sizes": {n: len(result[n]) for n in SPLIT_NAMES}, "content_hash": hashes}
    write_json(outdir / "manifest.json", meta)
    return meta


def run_pipeline(
    pairs: Sequence[SentencePair],
    cfg: PipelineConfig,
    outdir,
    scorer: Scorer | None = None,
    template: PromptTemplate | None = None,
) -> dict:
    outdir = Path(outdir)
    header = manifest(cfg.hash(), cfg.seed)
    scored_recs, audit, clean, sft = [], [], [], []
    summary: dict = {"languages": {}}
    for lang, corpus in by_language(pairs).items():
        res = select_corpus(corpus, cfg, scorer, template)
        scored_recs += [sp.to_dict() for sp in res.scored]
        audit += res.audit
        chosen = [sp.pair for sp in res.selected]
        clean += [p.to_dict() for p in chosen]

        spec = replace(cfg.split, seed=cfg.seed)
        splits = split(Corpus(tuple(chosen), lang), spec)
        write_split(splits, outdir / "splits" / lang, header)
        sft += [make_sft_record(p, template).to_dict() for p in splits.train]
        summary["languages"][lang] = {
            "input": len(corpus),
            "valid": len(res.scored),
            "selected": len(chosen),
            "shortfall": res.shortfall,
            "dropped": res.drop_counts(),
        }

    write_jsonl(outdir / "scored.jsonl", scored_recs, header)
    write_jsonl(outdir / "audit.jsonl", audit, header)
    write_jsonl(outdir / "clean.jsonl", clean, header)
    write_jsonl(outdir / "sft_train.jsonl", sft, header)
    report = build_report(audit)
    write_json(outdir / "report.json", {**report, MANIFEST_KEY: header})
    atomic_write_text(outdir / "report.txt", format_report(report))
    summary["config_hash"] = cfg.hash()
    write_json(outdir / "summary.json", {**summary, MANIFEST_KEY: header})
    return summary
