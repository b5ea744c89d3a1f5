"""
Language-prefixed inputs and the smoothed loss
==============================================

How an SFT input is laid out, and a numerical check of the label-smoothed
loss gradient.
"""

import numpy as np

from bitext_curation.corpus import SentencePair
from bitext_curation.training import (
    make_sft_record,
    sft_loss,
    sft_loss_from_logits,
    sft_loss_grad,
    smoothed_target,
)

pair = SentencePair("SNT.1.1", "vi", "xin chào thế giới", "你好世界")
rec = make_sft_record(pair)
print(rec.input_text)
print(rec.input_tokens)

###############################################################################
# Smoothed targets put 1 - eps + eps/V on the gold index.

print(smoothed_target(0, 4, 0.1).q)
print(sft_loss([0.8, 0.2], 0, 0.2), -0.9 * np.log(0.8) - 0.1 * np.log(0.2))

###############################################################################
# Finite differences against the analytic gradient softmax(z) - q'.

rng = np.random.default_rng(0)
z = rng.normal(size=8)
h = 1e-5
fd = np.array([
    (sft_loss_from_logits(z + h * e, 3, 0.1) - sft_loss_from_logits(z - h * e, 3, 0.1)) / (2 * h)
    for e in np.eye(8)
])
print("max error", np.abs(fd - sft_loss_grad(z, 3, 0.1)).max())
