"""MT evaluation metrics on a 0-100 scale: BLEU-4, chrF, ROUGE-L and their combinations.

Targets are Chinese, so the default tokenization breaks every CJK character
into its own token and splits everything else on whitespace. Corpus-level
BLEU and chrF pool n-gram statistics over all segments; corpus ROUGE-L is the
mean of the segment scores, since LCS statistics do not pool.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateInput, EmptyInput, LengthMismatch, OutOfRange
from .text import char_tokens, tokenize

GRANULARITIES: dict[str, Callable[[str], list[str]]] = {
    "word": tokenize,
    "char": char_tokens,
}


def tokenize_target(text: str, granularity: str = "word") -> list[str]:
    return GRANULARITIES[granularity](text)


def _ngrams(tokens: Sequence, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


# ---------------------------------------------------------------------------
# BLEU


def bleu_stats(hyp: Sequence[str], ref: Sequence[str], max_n: int = 4) -> list[int]:
    """[hyp_len, ref_len, match_1, total_1, ..., match_N, total_N]"""
    stats = [len(hyp), len(ref)]
    for n in range(1, max_n + 1):
        h = _ngrams(hyp, n)
        r = _ngrams(ref, n)
        stats.append(sum(min(c, r[g]) for g, c in h.items()))
        stats.append(max(len(hyp) - n + 1, 0))
    return stats


def bleu_from_stats(stats: Sequence[int], smoothing: str = "add-one", max_n: int = 4) -> float:
    """BLEU from (pooled) statistics.

    Orders the hypothesis is too short to contain are left out of the
    geometric mean. With ``add-one`` smoothing a zero precision at n >= 2
    becomes 1 / (total + 1); with ``none`` any zero precision gives 0.
    """
    if smoothing not in ("add-one", "none"):
        raise ValueError(f"unknown smoothing {smoothing!r}")
    hyp_len, ref_len = stats[0], stats[1]
    if hyp_len == 0 or ref_len == 0:
        raise EmptyInput("BLEU needs non-empty hypothesis and reference")
    log_sum = 0.0
    orders = 0
    for n in range(1, max_n + 1):
        match, total = stats[2 * n], stats[2 * n + 1]
        if total == 0:
            continue
        if match == 0:
            if smoothing == "none" or n == 1:
                return 0.0
            match, total = 1, total + 1
        log_sum += math.log(match / total)
        orders += 1
    bp = 1.0 if hyp_len > ref_len else math.exp(1 - ref_len / hyp_len)
    return 100.0 * bp * math.exp(log_sum / orders)


def bleu4(hyp: Sequence[str], ref: Sequence[str], smoothing: str = "add-one") -> float:
    if not hyp or not ref:
        raise EmptyInput("BLEU needs non-empty hypothesis and reference")
    return bleu_from_stats(bleu_stats(hyp, ref), smoothing)


def corpus_bleu4(hyps: Sequence[Sequence[str]], refs: Sequence[Sequence[str]], smoothing: str = "add-one") -> float:
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    pooled = np.zeros(10, dtype=np.int64)
    for h, r in zip(hyps, refs):
        pooled += bleu_stats(h, r)
    return bleu_from_stats(pooled.tolist(), smoothing)


# ---------------------------------------------------------------------------
# chrF


def chrf_stats(hyp: str, ref: str, order: int = 6) -> list[int]:
    """[hyp_count_n, ref_count_n, match_n] for n = 1..order, whitespace removed.

    An order the reference is too short to contain contributes all zeros, so
    such segments do not dilute the pooled precision.
    """
    h_chars = [c for c in hyp if not c.isspace()]
    r_chars = [c for c in ref if not c.isspace()]
    stats = []
    for n in range(1, order + 1):
        h = _ngrams(h_chars, n)
        r = _ngrams(r_chars, n)
        n_h, n_r = sum(h.values()), sum(r.values())
        if n_r == 0:
            stats += [0, 0, 0]
        else:
            stats += [n_h, n_r, sum(min(c, r[g]) for g, c in h.items())]
    return stats


def chrf_from_stats(stats: Sequence[int], beta: float = 2.0) -> float:
    """F-beta of character n-gram precision and recall, each averaged over orders.

    Orders absent from either side are left out of the averages.
    """
    b2 = beta * beta
    avg_p = avg_r = 0.0
    orders = 0
    for i in range(0, len(stats), 3):
        n_hyp, n_ref, match = stats[i:i + 3]
        if n_hyp == 0 or n_ref == 0:
            continue
        avg_p += match / n_hyp
        avg_r += match / n_ref
        orders += 1
    if orders == 0:
        return 0.0
    avg_p /= orders
    avg_r /= orders
    if avg_p + avg_r == 0:
        return 0.0
    return 100.0 * (1 + b2) * avg_p * avg_r / (b2 * avg_p + avg_r)


def chrf(hyp: str, ref: str, n: int = 6, beta: float = 2.0) -> float:
    if not hyp.strip() or not ref.strip():
        raise EmptyInput("chrF needs non-empty hypothesis and reference")
    return chrf_from_stats(chrf_stats(hyp, ref, n), beta)


def corpus_chrf(hyps: Sequence[str], refs: Sequence[str], n: int = 6, beta: float = 2.0) -> float:
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    pooled = np.zeros(3 * n, dtype=np.int64)
    for h, r in zip(hyps, refs):
        pooled += chrf_stats(h, r, n)
    return chrf_from_stats(pooled.tolist(), beta)


# ---------------------------------------------------------------------------
# ROUGE-L


def lcs_length(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(hyp: Sequence[str], ref: Sequence[str], beta: float = 1.0) -> float:
    if not hyp or not ref:
        raise EmptyInput("ROUGE-L needs non-empty hypothesis and reference")
    lcs = lcs_length(hyp, ref)
    if lcs == 0:
        return 0.0
    p, r = lcs / len(hyp), lcs / len(ref)
    b2 = beta * beta
    return 100.0 * (1 + b2) * p * r / (r + b2 * p)


# ---------------------------------------------------------------------------
# combinations


def _check_range(*values: float) -> None:
    for v in values:
        if not 0.0 <= v <= 100.0:
            raise OutOfRange(f"metric value {v!r} outside [0, 100]")


def bleu_chrf(bleu: float, chrf_score: float) -> float:
    _check_range(bleu, chrf_score)
    return (bleu + chrf_score) / 2


COMBINATIONS = ("equal", "geometric", "w46", "w64")


def combine(bleu: float, chrf_score: float, method: str = "equal") -> float:
    _check_range(bleu, chrf_score)
    if method == "equal":
        return bleu_chrf(bleu, chrf_score)
    if method == "geometric":
        return math.sqrt(bleu * chrf_score)
    if method == "w46":
        return 0.4 * bleu + 0.6 * chrf_score
    if method == "w64":
        return 0.6 * bleu + 0.4 * chrf_score
    raise ValueError(f"unknown combination {method!r}")


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks, tied values sharing the mean of their positions."""
    x = np.asarray(values, dtype=np.float64)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x))
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise LengthMismatch(f"{len(xs)} vs {len(ys)} values")
    if len(xs) < 2:
        raise DegenerateInput("Spearman correlation needs at least two points")
    rx = average_ranks(xs)
    ry = average_ranks(ys)
    rx -= rx.mean()
    ry -= ry.mean()
    denom = math.sqrt(float(rx @ rx) * float(ry @ ry))
    if denom == 0:
        raise DegenerateInput("one of the inputs has no rank variance")
    return max(-1.0, min(1.0, float(rx @ ry) / denom))


# ---------------------------------------------------------------------------
# reports


@dataclass
class MetricReport:
    bleu4: float
    chrf: float
    rouge_l: float
    bleu_chrf: float
    level: str = "corpus"
    segments: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate(
    hyps: Sequence[str],
    refs: Sequence[str],
    *,
    smoothing: str = "add-one",
    granularity: str = "word",
    level: str = "corpus",
    chrf_beta: float = 2.0,
    rouge_beta: float = 1.0,
) -> MetricReport:
    """Score line-aligned hypotheses against references.

    ``level="sentence"`` averages per-segment scores instead of pooling.
    """
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise EmptyInput("nothing to evaluate")
    htok = [tokenize_target(h, granularity) for h in hyps]
    rtok = [tokenize_target(r, granularity) for r in refs]
    for h, r in zip(htok, rtok):
        if not h or not r:
            raise EmptyInput("empty hypothesis or reference line")
    rl = float(np.mean([rouge_l(h, r, rouge_beta) for h, r in zip(htok, rtok)]))
    if level == "corpus":
        b = corpus_bleu4(htok, rtok, smoothing)
        c = corpus_chrf(hyps, refs, beta=chrf_beta)
    elif level == "sentence":
        b = float(np.mean([bleu4(h, r, smoothing) for h, r in zip(htok, rtok)]))
        c = float(np.mean([chrf(h, r, beta=chrf_beta) for h, r in zip(hyps, refs)]))
    else:
        raise ValueError(f"unknown level {level!r}")
    return MetricReport(b, c, rl, bleu_chrf(b, c), level, len(hyps))
