"""Score extraction from QE evaluation logs, the stepwise alignment reward, and
group-relative reward normalization."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, GroupTooSmall, InvalidExpertScore, InvalidPattern

NO_SCORE = -1

# an integer that is not part of a decimal or a longer digit run
_INT = r"(?<![\d.])(-?\d+)(?!\.\d)(?!\d)"
CUE_PATTERN = r"(?i)\bscore\b\s*[:：=\-]?\s*" + _INT.replace("(?<![\\d.])", "")
PERMISSIVE_PATTERN = _INT


@dataclass(frozen=True)
class SarConfig:
    pattern: str | None = None
    mode: str = "cue"
    score_min: int = 0
    score_max: int = 100
    tolerance: int = 10
    reward_exact: float = 2.0
    reward_partial: float = 1.0

    def __post_init__(self):
        if self.mode not in ("cue", "permissive"):
            raise ConfigError(f"unknown extraction mode {self.mode!r}")
        if self.score_min > self.score_max:
            raise ConfigError("score_min exceeds score_max")
        if self.tolerance < 0:
            raise ConfigError("tolerance must be non-negative")

    @property
    def regex(self) -> str:
        if self.pattern is not None:
            return self.pattern
        return CUE_PATTERN if self.mode == "cue" else PERMISSIVE_PATTERN

    def compiled(self) -> re.Pattern:
        return _compile(self.regex)


_CACHE: dict[str, re.Pattern] = {}


def _compile(pattern: str) -> re.Pattern:
    rx = _CACHE.get(pattern)
    if rx is None:
        try:
            rx = re.compile(pattern)
        except re.error as exc:
            raise InvalidPattern(f"cannot compile {pattern!r}: {exc}") from exc
        _CACHE[pattern] = rx
    return rx


def extract_scores(log: str, cfg: SarConfig = SarConfig()) -> set[int]:
    """All in-range integers the pattern captures (first group, or the whole match)."""
    rx = cfg.compiled()
    found = set()
    for m in rx.finditer(log):
        raw = m.group(1) if rx.groups else m.group(0)
        try:
            value = int(raw)
        except (TypeError, ValueError):
            continue
        if cfg.score_min <= value <= cfg.score_max:
            found.add(value)
    return found


def conservative_extract(log: str, cfg: SarConfig = SarConfig()) -> int:
    """Smallest extracted score, or -1 when the log holds none."""
    found = extract_scores(log, cfg)
    return min(found) if found else NO_SCORE


def sar_reward(s: int, a: int, cfg: SarConfig = SarConfig()) -> float:
    if not cfg.score_min <= a <= cfg.score_max:
        raise InvalidExpertScore(f"expert score {a} outside [{cfg.score_min}, {cfg.score_max}]")
    if s < 0:
        return 0.0
    d = abs(s - a)
    if d == 0:
        return cfg.reward_exact
    if d <= cfg.tolerance:
        return cfg.reward_partial
    return 0.0


@dataclass(frozen=True)
class RewardRecord:
    extracted: int
    expert: int
    reward: float


def reward_for_log(log: str, expert: int, cfg: SarConfig = SarConfig()) -> RewardRecord:
    s = conservative_extract(log, cfg)
    return RewardRecord(s, expert, sar_reward(s, expert, cfg))


def group_normalize(rewards: Sequence[float], eps: float = 1e-8) -> np.ndarray:
    """(r - mean) / (population std + eps) within one group."""
    r = np.asarray(rewards, dtype=np.float64)
    if r.size < 2:
        raise GroupTooSmall("group normalization needs at least two rewards")
    centered = r - r.mean()
    return centered / (np.sqrt(np.mean(centered**2)) + eps)


def score_records(records: Sequence[dict], cfg: SarConfig = SarConfig()) -> list[dict]:
    """Rewards for ``{id, eval_log, expert_score[, group_id]}`` records.

    Records sharing a ``group_id`` also receive a group-normalized advantage;
    singleton groups get none.
    """
    out = []
    for rec in records:
        r = reward_for_log(rec["eval_log"], int(rec["expert_score"]), cfg)
        row = {"id": rec["id"], "extracted": r.extracted, "reward": r.reward}
        if rec.get("group_id") is not None:
            row["group_id"] = rec["group_id"]
        out.append(row)

    groups: dict = {}
    for i, row in enumerate(out):
        if "group_id" in row:
            groups.setdefault(row["group_id"], []).append(i)
    for idx in groups.values():
        if len(idx) < 2:
            continue
        adv = group_normalize([out[i]["reward"] for i in idx])
        for i, a in zip(idx, adv):
            out[i]["advantage"] = float(a)
    return out
