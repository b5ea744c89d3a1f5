"""Perplexity-based pair scores and the scorers that feed them.

Two scorers share one contract, ``logprobs(requests) -> [(logprob_sum, token_count)]``:

* ``CharNgramScorer`` wraps a character n-gram model trained in-process. It is
  deterministic and needs no network, so tests and offline runs use it.
* ``RemoteScorer`` posts JSON to a log-probability service.

Everything downstream only sees ``LmScore`` values, so a pipeline produces the
same output whichever scorer returned a given set of log-probabilities.
"""

from __future__ import annotations

import json
import logging
import math
import os
import urllib.error
import urllib.request
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Protocol, Sequence

from .errors import ConfigError, EmptyCorpus, EmptyText, NonFinite, ScorerUnavailable

log = logging.getLogger(__name__)

SCORER_URL_ENV = "MERIT_SCORER_URL"

BOS = "\x02"
UNK = "\x00"
CONTEXT_SEP = "\n"


@dataclass(frozen=True)
class ScorerConfig:
    sigma: float = 0.01
    tau: float = 2.0
    endpoint: str | None = None
    timeout: float = 30.0
    max_in_flight: int = 4
    batch_size: int = 64
    ngram_order: int = 4
    ngram_k: float = 0.1

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigError("sigma must be positive")
        if not self.tau > 1:
            raise ConfigError("tau must exceed 1")
        if self.max_in_flight < 1 or self.batch_size < 1:
            raise ConfigError("max_in_flight and batch_size must be positive")
        if self.timeout <= 0:
            raise ConfigError("timeout must be positive")

    def resolved_endpoint(self) -> str | None:
        return self.endpoint or os.environ.get(SCORER_URL_ENV) or None


@dataclass(frozen=True)
class LmScore:
    ppl_cond: float
    ppl_uncond: float

    def __post_init__(self):
        for v in (self.ppl_cond, self.ppl_uncond):
            if not (math.isfinite(v) and v > 0):
                raise NonFinite(f"perplexity {v!r} is not a positive finite number")


class ScoreRequest(NamedTuple):
    instruction: str
    source: str | None
    target: str

    def to_json(self) -> dict:
        return {"instruction": self.instruction, "source": self.source, "target": self.target}


class Scorer(Protocol):
    def logprobs(self, requests: Sequence[ScoreRequest]) -> list[tuple[float, int]]: ...


def conditioning_text(instruction: str, source: str | None) -> str:
    if source is None:
        return instruction
    return f"{instruction}{source}{CONTEXT_SEP}"


# ---------------------------------------------------------------------------
# character n-gram fallback


class CharNgramModel:
    """Add-k smoothed character n-gram model.

    Characters never seen in training collapse onto a single unknown symbol,
    which is part of the alphabet, so every conditional distribution sums to
    one over ``vocab_size`` outcomes.
    """

    def __init__(self, order: int, k: float, counts, context_totals, alphabet):
        self.order = order
        self.k = k
        self._counts = counts
        self._totals = context_totals
        self.alphabet = frozenset(alphabet)
        self.vocab_size = len(self.alphabet) + 1

    def _map(self, ch: str) -> str:
        return ch if ch in self.alphabet or ch == BOS else UNK

    def prob(self, context: str, ch: str) -> float:
        h = "".join(self._map(c) for c in context[-(self.order - 1):]) if self.order > 1 else ""
        if self.order > 1:
            h = h.rjust(self.order - 1, BOS)
        c = self._map(ch)
        num = self._counts.get(h, {}).get(c, 0) + self.k
        return num / (self._totals.get(h, 0) + self.k * self.vocab_size)

    def distribution(self, context: str) -> dict[str, float]:
        out = {ch: self.prob(context, ch) for ch in self.alphabet}
        out[UNK] = self.prob(context, UNK)
        return out

    def logprob(self, target: str, context: str = "") -> tuple[float, int]:
        """Summed natural-log probability of ``target`` after ``context``."""
        n = self.order
        stream = [BOS] * (n - 1) + [self._map(c) for c in context]
        total = 0.0
        for ch in target:
            c = self._map(ch)
            h = "".join(stream[len(stream) - (n - 1):]) if n > 1 else ""
            num = self._counts.get(h, {}).get(c, 0) + self.k
            total += math.log(num / (self._totals.get(h, 0) + self.k * self.vocab_size))
            stream.append(c)
        return total, len(target)


def train_char_ngram(corpus: Iterable[str], order: int = 4, k: float = 0.1) -> CharNgramModel:
    if order < 1:
        raise ConfigError("n-gram order must be at least 1")
    if not k > 0:
        raise ConfigError("smoothing constant must be positive")
    corpus = list(corpus)
    if not corpus or not any(corpus):
        raise EmptyCorpus("cannot train a character model on an empty corpus")
    counts: dict[str, Counter] = defaultdict(Counter)
    alphabet: set[str] = set()
    for text in corpus:
        text = text.replace(BOS, "").replace(UNK, "")
        alphabet.update(text)
        padded = BOS * (order - 1) + text
        for i in range(order - 1, len(padded)):
            counts[padded[i - order + 1:i]][padded[i]] += 1
    totals = {h: sum(c.values()) for h, c in counts.items()}
    frozen = {h: dict(c) for h, c in counts.items()}
    return CharNgramModel(order, k, frozen, totals, alphabet)


class CharNgramScorer:
    def __init__(self, model: CharNgramModel):
        self.model = model

    def logprobs(self, requests: Sequence[ScoreRequest]) -> list[tuple[float, int]]:
        return [
            self.model.logprob(r.target, conditioning_text(r.instruction, r.source))
            for r in requests
        ]


# ---------------------------------------------------------------------------
# remote service


class RemoteScorer:
    """Client for a log-probability service.

    The endpoint accepts a JSON array of ``{"instruction", "source", "target"}``
    objects and answers with an array of ``{"logprob_sum", "token_count"}`` in
    the same order. Batches are sent with at most ``max_in_flight`` requests
    outstanding.
    """

    def __init__(self, endpoint: str, timeout: float = 30.0, max_in_flight: int = 4, batch_size: int = 64):
        self.endpoint = endpoint
        self.timeout = timeout
        self.max_in_flight = max_in_flight
        self.batch_size = batch_size

    @classmethod
    def from_config(cls, cfg: ScorerConfig) -> RemoteScorer:
        endpoint = cfg.resolved_endpoint()
        if not endpoint:
            raise ConfigError(f"no scorer endpoint configured (set {SCORER_URL_ENV})")
        return cls(endpoint, cfg.timeout, cfg.max_in_flight, cfg.batch_size)

    def _post(self, batch: Sequence[ScoreRequest]) -> list[tuple[float, int]]:
        body = json.dumps([r.to_json() for r in batch], ensure_ascii=False).encode("utf-8")
        req = urllib.request.Request(
            self.endpoint, data=body, headers={"Content-Type": "application/json"}, method="POST"
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, TimeoutError) as exc:
            raise ScorerUnavailable(f"scorer at {self.endpoint} failed: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ScorerUnavailable(f"scorer returned invalid JSON: {exc}") from exc
        if not isinstance(payload, list) or len(payload) != len(batch):
            raise ScorerUnavailable("scorer response does not match the request batch")
        try:
            return [(float(item["logprob_sum"]), int(item["token_count"])) for item in payload]
        except (KeyError, TypeError, ValueError) as exc:
            raise ScorerUnavailable(f"malformed scorer response: {exc}") from exc

    def logprobs(self, requests: Sequence[ScoreRequest]) -> list[tuple[float, int]]:
        batches = [requests[i:i + self.batch_size] for i in range(0, len(requests), self.batch_size)]
        if not batches:
            return []
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            results = list(pool.map(self._post, batches))
        return [item for chunk in results for item in chunk]


# ---------------------------------------------------------------------------
# scores


def perplexity(logprob_sum: float, token_count: int) -> float:
    if token_count <= 0:
        raise NonFinite("perplexity needs at least one target token")
    if not math.isfinite(logprob_sum):
        raise NonFinite(f"log-probability sum {logprob_sum!r} is not finite")
    exponent = -logprob_sum / token_count
    if exponent > 700:
        raise NonFinite("perplexity overflows double precision")
    return math.exp(exponent)


def pair_requests(instruction: str, x: str, y: str) -> tuple[ScoreRequest, ScoreRequest]:
    """(conditional, unconditional) requests; the unconditional one drops the instruction too."""
    if not y:
        raise EmptyText("target text must be non-empty")
    return ScoreRequest(instruction, x, y), ScoreRequest("", None, y)


def score_pairs(scorer: Scorer, items: Sequence[tuple[str, str, str]]) -> list[LmScore]:
    """Score ``(instruction, source, target)`` triples in one batched call, order preserved."""
    reqs: list[ScoreRequest] = []
    for instruction, x, y in items:
        reqs.extend(pair_requests(instruction, x, y))
    out = scorer.logprobs(reqs)
    if len(out) != len(reqs):
        raise ScorerUnavailable("scorer returned the wrong number of results")
    scores = []
    for i in range(0, len(out), 2):
        scores.append(LmScore(perplexity(*out[i]), perplexity(*out[i + 1])))
    return scores


def score_pair(scorer: Scorer, instruction: str, x: str, y: str) -> LmScore:
    return score_pairs(scorer, [(instruction, x, y)])[0]


def s_ppl(ppl_cond: float, sigma: float = 0.01) -> float:
    """1 / (1 + sigma * PPL): near 1 for fluent targets, decays with perplexity."""
    return 1.0 / (1.0 + sigma * ppl_cond)


def s_ifd(ppl_uncond: float, ppl_cond: float, tau: float = 2.0) -> float:
    """Unconditional-to-conditional perplexity ratio, capped at tau and scaled to (0, 1]."""
    return min(ppl_uncond / ppl_cond, tau) / tau


def make_scorer(cfg: ScorerConfig, training_texts: Iterable[str] | None = None) -> Scorer:
    """Remote scorer when an endpoint is configured, otherwise a fallback trained on ``training_texts``."""
    if cfg.resolved_endpoint():
        return RemoteScorer.from_config(cfg)
    if training_texts is None:
        raise ConfigError("fallback scorer needs training texts")
    return CharNgramScorer(train_char_ngram(training_texts, cfg.ngram_order, cfg.ngram_k))
