import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitext_curation.errors import DegenerateInput, EmptyInput, LengthMismatch, OutOfRange
from bitext_curation.metrics import (
    bleu4,
    bleu_chrf,
    chrf,
    combine,
    corpus_bleu4,
    corpus_chrf,
    evaluate,
    lcs_length,
    rouge_l,
    spearman,
    tokenize_target,
)

words = st.lists(st.sampled_from(list("abcdefg")), min_size=1, max_size=20)


class TestBleu:
    def test_identity(self):
        assert bleu4(list("abcdef"), list("abcdef")) == pytest.approx(100.0)

    def test_brevity_penalty(self):
        assert bleu4(list("abcd"), list("abcde")) == pytest.approx(100 * math.exp(-0.25), abs=1e-9)
        assert bleu4(list("abcd"), list("abcde")) == pytest.approx(77.88, abs=0.01)

    def test_no_4gram_overlap_raw(self):
        assert bleu4(["a", "b", "c", "d"], ["d", "c", "b", "a"], smoothing="none") == 0.0

    def test_add_one_positive(self):
        assert 0 < bleu4(["a", "b", "c", "d"], ["d", "c", "b", "a"]) < 100

    def test_hand_value(self):
        # precisions 5/5, 3/4, 2/3, 1/2 ("on mat" is not in the reference), BP = exp(1 - 6/5)
        hyp = "the cat sat on mat".split()
        ref = "the cat sat on the mat".split()
        bp = math.exp(1 - 6 / 5)
        p = [5 / 5, 3 / 4, 2 / 3, 1 / 2]
        expected = 100 * bp * math.exp(sum(map(math.log, p)) / 4)
        assert bleu4(hyp, ref) == pytest.approx(expected, rel=1e-12)

    def test_corpus_equals_sentence_for_one(self):
        h, r = "a b c d e".split(), "a b x d e".split()
        assert corpus_bleu4([h], [r]) == pytest.approx(bleu4(h, r))

    def test_sacrebleu_parity(self):
        sacrebleu = pytest.importorskip("sacrebleu")
        rng = random.Random(0)
        hyps, refs = [], []
        for _ in range(50):
            ref = [rng.choice("abcdef") for _ in range(rng.randint(5, 15))]
            hyp = [t if rng.random() < 0.8 else rng.choice("xyz") for t in ref][: rng.randint(4, len(ref) + 1)]
            hyps.append(" ".join(hyp))
            refs.append(" ".join(ref))
        ours = corpus_bleu4([h.split() for h in hyps], [r.split() for r in refs], smoothing="none")
        theirs = sacrebleu.corpus_bleu(hyps, [refs], tokenize="none", smooth_method="none").score
        assert ours > 0
        assert ours == pytest.approx(theirs, abs=1e-9)


class TestChrf:
    def test_hand_value(self):
        # orders 1..4 overlap 3/4, 2/3, 1/2, 0/1 on both sides; orders 5-6 absent
        expected = 100 * (0.75 + 2 / 3 + 0.5 + 0) / 4
        assert chrf("abcd", "abce") == pytest.approx(expected, abs=1e-9)
        assert chrf("abcd", "abce") == pytest.approx(47.9167, abs=1e-4)

    def test_identity_disjoint(self):
        assert chrf("你好世界", "你好世界") == pytest.approx(100.0)
        assert chrf("abc", "xyz") == 0.0

    def test_whitespace_ignored(self):
        assert chrf("a b c", "abc") == pytest.approx(100.0)

    def test_sacrebleu_parity(self):
        sacrebleu = pytest.importorskip("sacrebleu")
        rng = random.Random(1)
        hyps = ["".join(rng.choice("甲乙丙丁戊 ") for _ in range(rng.randint(3, 30))).strip() or "甲" for _ in range(40)]
        refs = ["".join(rng.choice("甲乙丙丁戊 ") for _ in range(rng.randint(3, 30))).strip() or "乙" for _ in range(40)]
        for h, r in zip(hyps, refs):
            assert chrf(h, r) == pytest.approx(sacrebleu.sentence_chrf(h, [r]).score, abs=1e-9)
        assert corpus_chrf(hyps, refs) == pytest.approx(sacrebleu.corpus_chrf(hyps, [refs]).score, abs=1e-9)


class TestRouge:
    def test_lcs(self):
        assert lcs_length("axb", "abc") == 2
        assert lcs_length("", "abc") == 0

    def test_hand_value(self):
        assert rouge_l(["a", "x", "b"], ["a", "b", "c"]) == pytest.approx(200 / 3)

    def test_no_overlap(self):
        assert rouge_l(["a"], ["b"]) == 0.0


@settings(max_examples=100, deadline=None)
@given(words)
def test_identities(toks):
    assert bleu4(toks, toks) == pytest.approx(100.0)
    assert rouge_l(toks, toks) == pytest.approx(100.0)
    assert chrf("".join(toks), "".join(toks)) == pytest.approx(100.0)


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_bounds(h, r):
    for v in (bleu4(h, r), bleu4(h, r, "none"), rouge_l(h, r), chrf(" ".join(h), " ".join(r))):
        assert 0 <= v <= 100 + 1e-9


class TestCombine:
    def test_table_value(self):
        assert bleu_chrf(49.26, 42.68) == pytest.approx(45.97, abs=0.005)

    def test_trivial(self):
        assert bleu_chrf(0, 0) == 0
        assert bleu_chrf(33.3, 33.3) == pytest.approx(33.3)
        assert combine(4, 9, "geometric") == pytest.approx(6.0)
        assert combine(50, 40, "w46") == pytest.approx(44.0)
        assert combine(50, 40, "w64") == pytest.approx(46.0)

    def test_range(self):
        with pytest.raises(OutOfRange):
            bleu_chrf(101, 3)
        with pytest.raises(ValueError):
            combine(1, 2, "harmonic")


class TestSpearman:
    def test_orderings(self):
        assert spearman([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
        assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)

    def test_against_scipy(self):
        stats = pytest.importorskip("scipy.stats")
        rng = np.random.default_rng(0)
        for _ in range(50):
            x = rng.integers(0, 5, 20)
            y = rng.integers(0, 5, 20)
            if len(set(x)) > 1 and len(set(y)) > 1:
                assert spearman(x, y) == pytest.approx(stats.spearmanr(x, y)[0], abs=1e-12)

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            spearman([1, 2], [1])
        with pytest.raises(DegenerateInput):
            spearman([1], [1])
        with pytest.raises(DegenerateInput):
            spearman([1, 1, 1], [1, 2, 3])


class TestEvaluate:
    def test_report(self):
        rep = evaluate(["你好 世界", "今天 天气"], ["你好 世界", "今天 天气 好"])
        assert rep.segments == 2
        assert rep.bleu_chrf == pytest.approx((rep.bleu4 + rep.chrf) / 2)

    def test_char_granularity(self):
        assert tokenize_target("你好 ab", "char") == ["你", "好", "a", "b"]
        rep = evaluate(["你好"], ["你好"], granularity="char")
        assert rep.bleu4 == pytest.approx(100.0)

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            evaluate(["a"], ["a", "b"])
        with pytest.raises(EmptyInput):
            evaluate([], [])
        with pytest.raises(EmptyInput):
            evaluate([""], ["a"])
