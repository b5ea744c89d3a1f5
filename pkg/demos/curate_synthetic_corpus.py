"""
Curating a noisy parallel corpus
================================

A walk from raw pairs to a domain-balanced train/dev/test split, using the
bundled synthetic generator and the offline character n-gram scorer.
"""

from collections import Counter

from bitext_curation.corpus import validity_filter
from bitext_curation.div import SplitSpec, split
from bitext_curation.epds import run_epds
from bitext_curation.features import base_score, extract_features
from bitext_curation.synthetic import make_corpus

# 600 Lao-Chinese pairs, about a third of them corrupted
corpus = make_corpus(600, "lo", seed=1)
print(len(corpus), "pairs")

###############################################################################
# Surface features
# ----------------
# A clean pair and a truncated one side by side.

for pair in corpus.pairs[:6]:
    if not validity_filter(pair):
        print(f"{pair.id}: fails the validity filter")
        continue
    fv = extract_features(pair.source_text, pair.target_text)
    print(f"{pair.id}: r_len={fv.r_len:.2f} r_tok={fv.r_tok:.2f} s_base={base_score(fv):.3f}")

###############################################################################
# Scoring and top-K
# -----------------
# With no scorer endpoint configured, a 4-gram character model is trained on
# the valid pairs and used for both perplexities.

result = run_epds(corpus, k=300)
print("dropped:", result.drop_counts())
best = result.selected[0]
worst = min(result.scored, key=lambda sp: sp.s_final)
print("best  ", round(best.s_final, 3), best.pair.target_text[:20])
print("cutoff", round(result.selected[-1].s_final, 3))
print("worst ", round(worst.s_final, 3), worst.pair.target_text[:20])

###############################################################################
# Exact-size split
# ----------------
# Domain shares of the selection carry over to every split.

chosen = result.corpus
parts = split(chosen, SplitSpec(200, 50, 50, seed=7))
print("all  ", dict(sorted(Counter(p.domain for p in chosen).items())))
for name in ("train", "dev", "test"):
    print(f"{name:5}", dict(sorted(Counter(p.domain for p in parts[name]).items())))
