"""Language-token-prefixed SFT inputs and reference training objectives.

The objectives are small numpy references: label-smoothed token cross-entropy
with its analytic logit gradient, and sequence negative log-likelihood. They
exist to check a training stack against, not to train with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Sequence

import numpy as np

from .corpus import LanguageTag, SentencePair, SOURCE_LANGUAGES
from .errors import (
    ConfigError,
    EmptySource,
    IndexOutOfRange,
    InvalidDistribution,
    InvalidEpsilon,
    PositiveLogProb,
    TargetLanguageAsSource,
    UnregisteredLanguage,
)
from .text import tokenize

PLACEHOLDER = "{lang}"


def lang_token(lang: LanguageTag | str) -> str:
    return f"⟨{LanguageTag.parse(lang).value}⟩"


LANGUAGE_TOKENS = frozenset(lang_token(t) for t in SOURCE_LANGUAGES)


def golden_template_text() -> str:
    return resources.files("bitext_curation").joinpath("data/prompt_template.txt").read_text(encoding="utf-8")


@dataclass(frozen=True)
class PromptTemplate:
    template: str = field(default_factory=golden_template_text)
    # display name per language; ISO codes when absent
    names: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        n = self.template.count(PLACEHOLDER)
        if n != 1:
            raise ConfigError(f"prompt template must contain {PLACEHOLDER} exactly once, found {n}")

    @classmethod
    def from_file(cls, path, names: Mapping[str, str] | None = None) -> PromptTemplate:
        with open(path, encoding="utf-8", newline="") as fh:
            return cls(fh.read(), dict(names or {}))

    def render(self, lang: LanguageTag | str) -> str:
        return render_prompt(self, lang)

    def token_length(self, lang: LanguageTag | str) -> int:
        return len(tokenize(self.render(lang)))


def render_prompt(tpl: PromptTemplate, lang: LanguageTag | str) -> str:
    lang = LanguageTag.parse(lang)
    if lang is LanguageTag.ZH:
        raise TargetLanguageAsSource("Chinese is the translation target, not a source")
    return tpl.template.replace(PLACEHOLDER, tpl.names.get(lang.value, lang.value))


def build_ltp_input(
    prompt_tokens: Sequence[str],
    lang: LanguageTag | str,
    source_tokens: Sequence[str],
    vocab: frozenset[str] | set[str] = LANGUAGE_TOKENS,
) -> list[str]:
    """``[p_1..p_r, <lang>, x_1..x_n]``."""
    if not source_tokens:
        raise EmptySource("source sequence is empty")
    token = lang_token(lang)
    if token not in vocab:
        raise UnregisteredLanguage(f"language token {token} is not in the vocabulary")
    return [*prompt_tokens, token, *source_tokens]


@dataclass(frozen=True)
class SftRecord:
    input_tokens: tuple[str, ...]
    target_tokens: tuple[str, ...]
    lang: LanguageTag
    input_text: str = ""
    target_text: str = ""

    def to_dict(self) -> dict:
        return {
            "lang": self.lang.value,
            "input_tokens": list(self.input_tokens),
            "input_text": self.input_text,
            "target_text": self.target_text,
        }


def make_sft_record(pair: SentencePair, tpl: PromptTemplate | None = None) -> SftRecord:
    tpl = tpl or PromptTemplate()
    prompt = render_prompt(tpl, pair.source_lang)
    inputs = build_ltp_input(tokenize(prompt), pair.source_lang, tokenize(pair.source_text))
    return SftRecord(
        input_tokens=tuple(inputs),
        target_tokens=tuple(tokenize(pair.target_text)),
        lang=pair.source_lang,
        input_text=f"{prompt}{lang_token(pair.source_lang)} {pair.source_text}",
        target_text=pair.target_text,
    )


# ---------------------------------------------------------------------------
# objectives


@dataclass(frozen=True)
class SmoothedDistribution:
    q: np.ndarray
    epsilon: float
    target: int


def smoothed_target(y_star: int, vocab_size: int, eps: float, *, exclude_target: bool = False) -> SmoothedDistribution:
    """Label-smoothed target: ``(1 - eps) * onehot + eps / |V|``.

    With ``exclude_target`` the smoothing mass is spread over the other
    ``|V| - 1`` entries instead, so the target keeps exactly ``1 - eps``.
    """
    if not 0 <= eps < 1:
        raise InvalidEpsilon(f"epsilon must lie in [0, 1), got {eps!r}")
    if vocab_size < 1 or not 0 <= y_star < vocab_size:
        raise IndexOutOfRange(f"target index {y_star} outside vocabulary of size {vocab_size}")
    if exclude_target:
        if vocab_size < 2:
            raise IndexOutOfRange("exclude_target smoothing needs at least two classes")
        q = np.full(vocab_size, eps / (vocab_size - 1))
        q[y_star] = 1.0 - eps
    else:
        q = np.full(vocab_size, eps / vocab_size)
        q[y_star] += 1.0 - eps
    return SmoothedDistribution(q, eps, y_star)


def sft_loss(pred, y_star: int, eps: float, *, exclude_target: bool = False) -> float:
    """Cross-entropy of ``pred`` against the smoothed target."""
    p = np.asarray(pred, dtype=np.float64)
    if p.ndim != 1 or not np.all(np.isfinite(p)) or np.any(p <= 0):
        raise InvalidDistribution("prediction must be a finite, strictly positive vector")
    if abs(p.sum() - 1.0) > 1e-6:
        raise InvalidDistribution(f"prediction sums to {p.sum()!r}")
    q = smoothed_target(y_star, p.size, eps, exclude_target=exclude_target).q
    return float(-np.dot(q, np.log(p)))


def softmax(logits) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def sft_loss_from_logits(logits, y_star: int, eps: float, *, exclude_target: bool = False) -> float:
    z = np.asarray(logits, dtype=np.float64)
    shifted = z - z.max()
    log_p = shifted - math.log(np.exp(shifted).sum())
    q = smoothed_target(y_star, z.size, eps, exclude_target=exclude_target).q
    return float(-np.dot(q, log_p))


def sft_loss_grad(logits, y_star: int, eps: float, *, exclude_target: bool = False) -> np.ndarray:
    """d loss / d logits = softmax(logits) - q'."""
    z = np.asarray(logits, dtype=np.float64)
    q = smoothed_target(y_star, z.size, eps, exclude_target=exclude_target).q
    return softmax(z) - q


def mle_loss(token_logprobs: Sequence[float]) -> float:
    """Sequence negative log-likelihood, summed with ``math.fsum``."""
    values = [float(v) for v in token_logprobs]
    for v in values:
        if v > 0:
            raise PositiveLogProb(f"log-probability {v!r} is positive")
    return -math.fsum(values)
