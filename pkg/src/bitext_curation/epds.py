"""Elite pair selection: validity filter, composite scoring and exact top-K retention."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import Corpus, SentencePair, ValidityConfig, drop_reason
from .errors import EmptyText, InsufficientValidPairs, InvalidWeights, OutOfRange
from .features import BaseScoreConfig, base_score, extract_features
from .lm_scoring import (
    Scorer,
    ScorerConfig,
    conditioning_text,
    make_scorer,
    s_ifd,
    s_ppl,
    score_pairs,
)
from .training import PromptTemplate, render_prompt

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComposeWeights:
    alpha: float = 0.3
    beta: float = 0.3
    gamma: float = 0.4

    def __post_init__(self):
        w = (self.alpha, self.beta, self.gamma)
        if any(v < 0 or not math.isfinite(v) for v in w):
            raise InvalidWeights("composition weights must be finite and non-negative")
        if abs(sum(w) - 1.0) > 1e-9:
            raise InvalidWeights(f"composition weights sum to {sum(w)!r}, expected 1")

    @classmethod
    def unweighted(cls) -> ComposeWeights:
        """Plain sum of the three scores, rescaled to [0, 1]; ranks identically to the sum."""
        return cls(1 / 3, 1 / 3, 1 / 3)


def final_score(s_base: float, s_ppl: float, s_ifd: float, w: ComposeWeights = ComposeWeights()) -> float:
    for v in (s_base, s_ppl, s_ifd):
        if not 0.0 <= v <= 1.0:
            raise OutOfRange(f"component score {v!r} outside [0, 1]")
    return w.alpha * s_base + w.beta * s_ppl + w.gamma * s_ifd


@dataclass(frozen=True)
class ScoredPair:
    pair: SentencePair
    s_base: float
    s_ppl: float
    s_ifd: float
    s_final: float

    @classmethod
    def build(cls, pair: SentencePair, s_base: float, s_ppl: float, s_ifd: float,
              w: ComposeWeights = ComposeWeights()) -> ScoredPair:
        return cls(pair, s_base, s_ppl, s_ifd, final_score(s_base, s_ppl, s_ifd, w))

    @property
    def id(self) -> str:
        return self.pair.id

    def scores(self) -> dict:
        return {"s_base": self.s_base, "s_ppl": self.s_ppl, "s_ifd": self.s_ifd, "s_final": self.s_final}

    def to_dict(self) -> dict:
        return {**self.pair.to_dict(), **self.scores()}

    @classmethod
    def from_dict(cls, d: dict) -> ScoredPair:
        return cls(SentencePair.from_dict(d), float(d["s_base"]), float(d["s_ppl"]),
                   float(d["s_ifd"]), float(d["s_final"]))


def _rank_key(sp: ScoredPair):
    return (-sp.s_final, sp.pair.id)


def rank(scored: Sequence[ScoredPair]) -> list[ScoredPair]:
    """Descending by s_final, ties ascending by id."""
    return sorted(scored, key=_rank_key)


def select_top_k(scored: Sequence[ScoredPair], k: int) -> list[ScoredPair]:
    if k < 0:
        raise ValueError("K must be non-negative")
    return rank(scored)[:k]


def select_above(scored: Sequence[ScoredPair], threshold: float) -> list[ScoredPair]:
    """Threshold view of distillation: every pair whose s_final exceeds ``threshold``, ranked."""
    return [sp for sp in rank(scored) if sp.s_final > threshold]


@dataclass
class EpdsResult:
    selected: list[ScoredPair]
    scored: list[ScoredPair]
    audit: list[dict]
    shortfall: bool = False
    source_lang: str = ""

    @property
    def corpus(self) -> Corpus:
        return Corpus(tuple(sp.pair for sp in self.selected), self.source_lang)

    def drop_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rec in self.audit:
            reason = rec.get("dropped_reason")
            if reason:
                counts[reason] = counts.get(reason, 0) + 1
        return counts


@dataclass(frozen=True)
class EpdsConfig:
    validity: ValidityConfig = field(default_factory=ValidityConfig)
    base: BaseScoreConfig = field(default_factory=BaseScoreConfig)
    scorer: ScorerConfig = field(default_factory=ScorerConfig)
    weights: ComposeWeights = field(default_factory=ComposeWeights)


def score_corpus(
    corpus: Corpus,
    cfg: EpdsConfig = EpdsConfig(),
    scorer: Scorer | None = None,
    template: PromptTemplate | None = None,
) -> tuple[list[ScoredPair], list[dict]]:
    """Filter and score every pair. Returns (scored valid pairs, drop records)."""
    drops: list[dict] = []
    valid: list[tuple[SentencePair, float]] = []
    for pair in corpus:
        reason = drop_reason(pair, cfg.validity)
        if reason is None:
            try:
                sb = base_score(extract_features(pair.source_text, pair.target_text), cfg.base)
            except EmptyText:
                reason = "empty_text"
        if reason is not None:
            drops.append({"id": pair.id, "source_lang": pair.source_lang.value, "dropped_reason": reason})
            continue
        valid.append((pair, sb))
    if not valid:
        return [], drops

    instruction = render_prompt(template or PromptTemplate(), corpus.source_lang)
    if scorer is None:
        scorer = make_scorer(
            cfg.scorer,
            [conditioning_text(instruction, p.source_text) + p.target_text for p, _ in valid],
        )
    lm = score_pairs(scorer, [(instruction, p.source_text, p.target_text) for p, _ in valid])
    scored = [
        ScoredPair.build(
            p, sb,
            s_ppl(s.ppl_cond, cfg.scorer.sigma),
            s_ifd(s.ppl_uncond, s.ppl_cond, cfg.scorer.tau),
            cfg.weights,
        )
        for (p, sb), s in zip(valid, lm)
    ]
    return scored, drops


def audit_records(scored: Sequence[ScoredPair], k: int, drops: Sequence[dict] = ()) -> list[dict]:
    """One record per input pair: a drop reason, or its rank and scores."""
    records = list(drops)
    for i, sp in enumerate(rank(scored), start=1):
        records.append({
            "id": sp.id,
            "source_lang": sp.pair.source_lang.value,
            "rank": i,
            "selected": i <= k,
            **sp.scores(),
        })
    return records


def apply_top_k(scored: Sequence[ScoredPair], k: int, drops: Sequence[dict] = (),
                strict: bool = False, source_lang: str = "") -> EpdsResult:
    shortfall = len(scored) < k
    if shortfall:
        msg = f"only {len(scored)} valid pairs for K={k}"
        if strict:
            raise InsufficientValidPairs(msg)
        log.warning("%s; returning all survivors", msg)
    selected = select_top_k(scored, k)
    return EpdsResult(selected, list(scored), audit_records(scored, k, drops), shortfall, source_lang)


def run_epds(
    corpus: Corpus,
    k: int,
    cfg: EpdsConfig = EpdsConfig(),
    scorer: Scorer | None = None,
    *,
    template: PromptTemplate | None = None,
    strict: bool = False,
) -> EpdsResult:
    scored, drops = score_corpus(corpus, cfg, scorer, template)
    return apply_top_k(scored, k, drops, strict, corpus.source_lang.value)
