import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitext_curation.errors import ConfigError, GroupTooSmall, InvalidExpertScore, InvalidPattern
from bitext_curation.sar import (
    NO_SCORE,
    SarConfig,
    conservative_extract,
    extract_scores,
    group_normalize,
    reward_for_log,
    sar_reward,
    score_records,
)

PERMISSIVE = SarConfig(mode="permissive")


class TestExtract:
    def test_single(self):
        assert extract_scores("Score: 85") == {85}

    def test_none(self):
        assert extract_scores("quality good, no number") == set()

    def test_revised(self):
        assert extract_scores("Score: 85 ... revised Score: 70") == {70, 85}

    def test_case_and_separators(self):
        assert extract_scores("SCORE=40; score - 50; score：60") == {40, 50, 60}

    def test_cue_ignores_bare_numbers(self):
        assert extract_scores("The text has 3 errors. Score: 90") == {90}
        assert extract_scores("The text has 3 errors. Score: 90", PERMISSIVE) == {3, 90}

    def test_out_of_range_excluded(self):
        assert extract_scores("Score: 150") == set()
        assert extract_scores("Score: -5") == set()
        assert extract_scores("150 and 20", PERMISSIVE) == {20}

    def test_decimals_skipped(self):
        assert extract_scores("Score: 85.5") == set()
        assert extract_scores("ratio 0.75 then 42", PERMISSIVE) == {42}

    def test_custom_pattern(self):
        cfg = SarConfig(pattern=r"\[(\d+)\]")
        assert extract_scores("[12] and [99]", cfg) == {12, 99}

    def test_bad_pattern(self):
        with pytest.raises(InvalidPattern):
            extract_scores("x", SarConfig(pattern="(unclosed"))

    def test_bad_mode(self):
        with pytest.raises(ConfigError):
            SarConfig(mode="greedy")


class TestConservative:
    def test_min(self):
        assert conservative_extract("Score: 85 revised Score: 70") == 70

    def test_empty(self):
        assert conservative_extract("nothing") == NO_SCORE == -1

    def test_singleton(self):
        assert conservative_extract("score 100") == 100

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(0, 100), max_size=6), st.integers(0, 100))
    def test_lower_score_never_raises(self, scores, extra):
        log = " ".join(f"Score: {s}" for s in scores)
        before = conservative_extract(log)
        after = conservative_extract(log + f" Score: {extra}")
        assert after in extract_scores(log + f" Score: {extra}")
        if before != NO_SCORE and extra <= before:
            assert after <= before


class TestReward:
    @pytest.mark.parametrize("s,a,r", [(85, 85, 2.0), (80, 85, 1.0), (95, 85, 1.0), (96, 85, 0.0),
                                       (60, 85, 0.0), (-1, 85, 0.0), (0, 0, 2.0), (100, 90, 1.0)])
    def test_levels(self, s, a, r):
        assert sar_reward(s, a) == r

    def test_invalid_expert(self):
        with pytest.raises(InvalidExpertScore):
            sar_reward(50, 101)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 100), st.integers(0, 100))
    def test_symmetric(self, a, d):
        if 0 <= a - d and a + d <= 100:
            assert sar_reward(a + d, a) == sar_reward(a - d, a)

    def test_reward_for_log(self):
        r = reward_for_log("Score: 85 revised Score: 70", 75)
        assert (r.extracted, r.reward) == (70, 1.0)


class TestNormalize:
    def test_pair(self):
        np.testing.assert_allclose(group_normalize([2.0, 0.0]), [1.0, -1.0], atol=1e-6)

    def test_constant(self):
        assert np.all(group_normalize([1.0, 1.0, 1.0]) == 0)

    def test_too_small(self):
        with pytest.raises(GroupTooSmall):
            group_normalize([2.0])

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.sampled_from([0.0, 1.0, 2.0]), min_size=2, max_size=16), st.floats(-5, 5))
    def test_shift_invariant(self, rewards, c):
        a = group_normalize(rewards)
        assert abs(a.mean()) <= 1e-9 * len(rewards)
        np.testing.assert_allclose(group_normalize([r + c for r in rewards]), a, atol=1e-6)


def test_score_records():
    recs = [
        {"id": "a", "eval_log": "Score: 85", "expert_score": 85, "group_id": "g"},
        {"id": "b", "eval_log": "no score", "expert_score": 85, "group_id": "g"},
        {"id": "c", "eval_log": "Score: 50", "expert_score": 55},
        {"id": "d", "eval_log": "Score: 50", "expert_score": 55, "group_id": "solo"},
    ]
    out = score_records(recs)
    assert [r["reward"] for r in out] == [2.0, 0.0, 1.0, 1.0]
    assert out[0]["advantage"] == pytest.approx(1.0, abs=1e-6)
    assert out[1]["advantage"] == pytest.approx(-1.0, abs=1e-6)
    assert "advantage" not in out[2] and "group_id" not in out[2]
    assert "advantage" not in out[3]
