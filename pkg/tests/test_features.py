import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitext_curation.errors import EmptyText, InvalidWeights
from bitext_curation.features import (
    BaseScoreConfig,
    FeatureVector,
    base_score,
    digit_divergence,
    extract_features,
    length_ratio,
    lexical_diversity_diff,
    punct_divergence,
    token_ratio,
)
from bitext_curation.text import tokenize

texts = st.text(alphabet="ab c1,。你好ກ9 .", min_size=1, max_size=30).filter(lambda s: s.strip())


class TestRatios:
    def test_length_ratio(self):
        assert length_ratio("a" * 10, "b" * 20) == 0.5
        assert length_ratio("abc", "xyz") == 1.0
        with pytest.raises(EmptyText):
            length_ratio("", "abc")

    def test_counts_code_points_not_bytes(self):
        # Lao letters are 3 bytes in UTF-8
        assert length_ratio("ກຂຄ", "abc") == 1.0

    def test_token_ratio(self):
        assert token_ratio("a b c d", "w x y z") == 1.0
        assert token_ratio("a b", "s t u v w x y z") == 0.25

    def test_token_ratio_cjk(self):
        # 你 / 好 / 。 are three tokens
        assert tokenize("你好。") == ["你", "好", "。"]
        assert token_ratio("one two three", "你好。") == 1.0

    def test_token_ratio_empty(self):
        with pytest.raises(EmptyText):
            token_ratio("   ", "a")


class TestDivergences:
    def test_punct(self):
        assert punct_divergence("a,b.", "a,b.") == 0.0
        assert punct_divergence(",.!?", "abcd") == 1.0
        assert punct_divergence("a,b.", "ab") == pytest.approx(2 / 4 - 0 / 2)

    def test_cjk_punct_counts(self):
        assert punct_divergence("。，", "ab") == 1.0

    def test_digit(self):
        assert digit_divergence("abc", "xyz") == 0.0
        assert digit_divergence("2024", "abcd") == 1.0
        assert digit_divergence("a1", "abcd1") == pytest.approx(1 / 2 - 1 / 5)

    def test_empty_side_is_zero_share(self):
        assert digit_divergence("", "12") == 1.0

    def test_ttr(self):
        assert lexical_diversity_diff("a a a a", "a b c d") == pytest.approx(0.75)
        assert lexical_diversity_diff("x y y", "y x y") == 0.0
        assert lexical_diversity_diff("solo", "один") == 0.0


class TestBaseScore:
    def test_perfect(self):
        assert base_score(FeatureVector(1, 1, 0, 0, 0)) == 1.0

    def test_worst(self):
        assert base_score(FeatureVector(0, 0, 1, 1, 1)) == 0.0

    def test_hand_value(self):
        fv = FeatureVector(0.8, 0.9, 0.1, 0.0, 0.2)
        assert base_score(fv) == pytest.approx(0.2 * (0.8 + 0.9 + 0.9 + 1.0 + 0.8), abs=1e-12)

    @pytest.mark.parametrize("w", [(0.5, 0.5, 0.5, 0, 0), (1, 0, 0, 0), (-0.2, 0.4, 0.4, 0.2, 0.2)])
    def test_invalid_weights(self, w):
        with pytest.raises(InvalidWeights):
            BaseScoreConfig(w)


@settings(max_examples=200, deadline=None)
@given(texts, texts)
def test_features_symmetric(x, y):
    assert extract_features(x, y) == extract_features(y, x)


@settings(max_examples=200, deadline=None)
@given(texts, texts)
def test_features_in_range(x, y):
    fv = extract_features(x, y)
    assert 0 < fv.r_len <= 1 and 0 < fv.r_tok <= 1
    for d in (fv.d_punct, fv.d_digit, fv.d_uniq):
        assert 0 <= d <= 1
    assert 0 <= base_score(fv) <= 1


unit = st.floats(0, 1)


@settings(max_examples=300, deadline=None)
@given(st.tuples(unit, unit, unit, unit, unit), st.integers(0, 4), unit,
       st.lists(st.floats(0, 1), min_size=5, max_size=5).filter(lambda w: sum(w) > 0.1))
def test_base_score_monotone(values, idx, bump, raw_w):
    w = tuple(v / sum(raw_w) for v in raw_w)
    w = w[:4] + (1 - sum(w[:4]),)
    if w[4] < 0:
        return
    cfg = BaseScoreConfig(w)
    lo = list(values)
    hi = list(values)
    hi[idx] = max(lo[idx], bump)
    s_lo = base_score(FeatureVector(*lo), cfg)
    s_hi = base_score(FeatureVector(*hi), cfg)
    if idx < 2:
        assert s_hi >= s_lo - 1e-12
    else:
        assert s_hi <= s_lo + 1e-12
