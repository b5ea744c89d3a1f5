"""Surface features of a sentence pair and the weighted base score built on them.

All five features are symmetric in (x, y). Ratios are oriented so that 1 is
best; divergences so that 0 is best. ``base_score`` maps divergences through
``1 - d`` so every term points the same way before weighting.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

from .errors import EmptyText, InvalidWeights
from .text import is_digit, is_punct, tokenize

FEATURE_NAMES = ("r_len", "r_tok", "d_punct", "d_digit", "d_uniq")


@dataclass(frozen=True)
class FeatureVector:
    r_len: float
    r_tok: float
    d_punct: float
    d_digit: float
    d_uniq: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.r_len, self.r_tok, self.d_punct, self.d_digit, self.d_uniq)

    def to_dict(self) -> dict:
        return asdict(self)


def _identity(v: float) -> float:
    return v


def _complement(v: float) -> float:
    return 1.0 - v


DEFAULT_ORIENTATION: dict[str, Callable[[float], float]] = {
    "r_len": _identity,
    "r_tok": _identity,
    "d_punct": _complement,
    "d_digit": _complement,
    "d_uniq": _complement,
}


@dataclass(frozen=True)
class BaseScoreConfig:
    weights: tuple[float, ...] = (0.2, 0.2, 0.2, 0.2, 0.2)

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) != 5:
            raise InvalidWeights("exactly five feature weights are required")
        if any(v < 0 or not math.isfinite(v) for v in w):
            raise InvalidWeights("feature weights must be finite and non-negative")
        if abs(sum(w) - 1.0) > 1e-9:
            raise InvalidWeights(f"feature weights sum to {sum(w)!r}, expected 1")


def _min_ratio(a: int, b: int) -> float:
    if a == 0 or b == 0:
        raise EmptyText("ratio undefined for an empty side")
    return min(a / b, b / a)


def length_ratio(x: str, y: str) -> float:
    """min(|y|/|x|, |x|/|y|) over Unicode code points."""
    return _min_ratio(len(x), len(y))


def token_ratio(x: str, y: str) -> float:
    return _min_ratio(len(tokenize(x)), len(tokenize(y)))


def _class_share(text: str, pred) -> float:
    if not text:
        return 0.0
    return sum(1 for ch in text if pred(ch)) / len(text)


def punct_divergence(x: str, y: str) -> float:
    d = abs(_class_share(x, is_punct) - _class_share(y, is_punct))
    return min(max(d, 0.0), 1.0)


def digit_divergence(x: str, y: str) -> float:
    d = abs(_class_share(x, is_digit) - _class_share(y, is_digit))
    return min(max(d, 0.0), 1.0)


def _ttr(text: str) -> float:
    toks = tokenize(text)
    if not toks:
        raise EmptyText("type-token ratio needs at least one token")
    return len(set(toks)) / len(toks)


def lexical_diversity_diff(x: str, y: str) -> float:
    return abs(_ttr(x) - _ttr(y))


def extract_features(x: str, y: str) -> FeatureVector:
    return FeatureVector(
        r_len=length_ratio(x, y),
        r_tok=token_ratio(x, y),
        d_punct=punct_divergence(x, y),
        d_digit=digit_divergence(x, y),
        d_uniq=lexical_diversity_diff(x, y),
    )


def base_score(
    fv: FeatureVector,
    cfg: BaseScoreConfig = BaseScoreConfig(),
    orientation: dict[str, Callable[[float], float]] | None = None,
) -> float:
    orientation = orientation or DEFAULT_ORIENTATION
    total = 0.0
    for w, name, value in zip(cfg.weights, FEATURE_NAMES, fv.as_tuple()):
        total += w * orientation[name](value)
    # guard float drift just outside the unit interval
    return min(max(total, 0.0), 1.0)
