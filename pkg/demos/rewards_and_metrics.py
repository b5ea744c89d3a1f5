"""
Rewarding a quality judge, scoring translations
===============================================

The stepwise reward compares a judge's extracted score with an expert
score. The metrics module then scores some hypotheses and combines BLEU
with chrF.
"""

import numpy as np

from bitext_curation.metrics import bleu_chrf, combine, evaluate, spearman
from bitext_curation.sar import SarConfig, conservative_extract, group_normalize, sar_reward

logs = [
    "Fluent and faithful. Score: 85",
    "Minor slips. Score: 78",
    "Score: 90 ... on reflection the ending is wrong, revised score: 40",
    "Looks fine to me.",
]
expert = 84

# the lowest cue-marked score wins, no cue at all means -1
extracted = [conservative_extract(log) for log in logs]
rewards = [sar_reward(s, expert) for s in extracted]
print(list(zip(extracted, rewards)))

###############################################################################
# Group-relative advantages: rewards centred and scaled within the group.

print(np.round(group_normalize(rewards), 3))

# a permissive pattern also picks up bare integers, and the minimum still wins
print(conservative_extract("3 issues found, overall 70", SarConfig(mode="permissive")))

###############################################################################
# Metrics
# -------

hyps = ["今天 天气 很 好", "我 喜欢 读书", "他 去 学校 了"]
refs = ["今天 天气 很 好", "我 爱 读书", "他 已经 去 学校 了"]
report = evaluate(hyps, refs)
print(report)

# Chinese is split into characters either way; char granularity matters for Latin text
print(evaluate(["the cat sat"], ["the cat sits"], granularity="char").bleu4)

for method in ("equal", "geometric", "w46", "w64"):
    print(method, round(combine(report.bleu4, report.chrf, method), 2))
print(bleu_chrf(49.26, 42.68))

# how well a metric ranks systems relative to human judgement
print(spearman([31.2, 28.4, 35.0, 22.1], [3.9, 3.5, 4.1, 2.8]))
