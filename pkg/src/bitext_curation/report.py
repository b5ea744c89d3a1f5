"""Retention and metric summary tables built from run artifacts."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import MissingArtifact
from .metrics import bleu_chrf


def retention_table(audit: Iterable[dict]) -> list[dict]:
    per_lang: dict[str, list[int]] = {}
    for rec in audit:
        lang = rec.get("source_lang", "?")
        row = per_lang.setdefault(lang, [0, 0])
        row[0] += 1
        row[1] += bool(rec.get("selected"))
    rows = []
    for lang in sorted(per_lang):
        n_in, n_out = per_lang[lang]
        rows.append(_retention_row(lang, n_in, n_out))
    if rows:
        rows.append(_retention_row("total", sum(r["input"] for r in rows), sum(r["retained"] for r in rows)))
    return rows


def _retention_row(lang: str, n_in: int, n_out: int) -> dict:
    reduction = 100.0 * (1 - n_out / n_in) if n_in else 0.0
    return {
        "lang": lang,
        "input": n_in,
        "retained": n_out,
        "retained_pct": 100.0 - reduction if n_in else 0.0,
        "reduction_pct": reduction,
    }


def metric_table(reports: Iterable[dict]) -> list[dict]:
    rows = []
    for rep in reports:
        b, c = float(rep["bleu4"]), float(rep["chrf"])
        rows.append({
            "lang": rep.get("lang", ""),
            "bleu4": b,
            "chrf": c,
            "rouge_l": float(rep.get("rouge_l", 0.0)),
            "bleu_chrf": bleu_chrf(b, c),
        })
    return rows


def build_report(audit: Sequence[dict], metric_reports: Sequence[dict] = ()) -> dict:
    if not audit and not metric_reports:
        raise MissingArtifact("no audit records or metric reports to summarize")
    return {"retention": retention_table(audit), "metrics": metric_table(metric_reports)}


def format_report(report: dict) -> str:
    lines = []
    if report.get("retention"):
        lines.append(f"{'lang':<8}{'input':>10}{'retained':>10}{'kept':>9}{'reduction':>11}")
        for r in report["retention"]:
            lines.append(
                f"{r['lang']:<8}{r['input']:>10,}{r['retained']:>10,}"
                f"{r['retained_pct']:>8.1f}%{r['reduction_pct']:>10.1f}%"
            )
    if report.get("metrics"):
        if lines:
            lines.append("")
        lines.append(f"{'lang':<8}{'BLEU-4':>9}{'chrF':>9}{'ROUGE-L':>9}{'BLEU-chrF':>11}")
        for r in report["metrics"]:
            lines.append(
                f"{r['lang']:<8}{r['bleu4']:>9.2f}{r['chrf']:>9.2f}{r['rouge_l']:>9.2f}{r['bleu_chrf']:>11.2f}"
            )
    return "\n".join(lines) + "\n"
