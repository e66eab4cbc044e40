"""Unit tests for grading, truncated generators, and ball enumeration."""

import math

import numpy as np
import pytest

import helpers
from kleindim.moebius import Geodesic, MoebiusMap, geodesic_to_vertical
from kleindim.subgroup import (BallLimit, enumerate_ball, sigma,
                               truncated_generators)


def _axis_translation(p, q, length):
    f = geodesic_to_vertical(Geodesic(p, q))
    return f.inverse() @ MoebiusMap.vertical_translation(length) @ f


def _schottky_pair():
    # disjoint axes, large translation length: ping-pong, hence free
    return _axis_translation(1.0, 3.0, 4.0), _axis_translation(-1.0, -3.0, 4.0)


def _keys(mats):
    return {tuple(np.rint(np.asarray(row).view(float) * 1e6).astype(int))
            for row in mats}


class TestSigma:
    def test_stable_letter(self):
        assert sigma((3,), 3) == 1

    def test_surface_letters_vanish(self):
        assert sigma((2, -1), 3) == 0

    def test_exponent_sum(self):
        assert sigma((3, 1, -3, -3), 3) == -1

    def test_additivity(self):
        u, v = (3, 1, -3), (3, 3, 2)
        assert sigma(u + v, 3) == sigma(u, 3) + sigma(v, 3)


class TestTruncatedGenerators:
    def test_counts_and_grading(self):
        rep = helpers.hnn_for(1, 3.0)
        tau = rep.stable_letter_index()
        for m in (0, 1, 2):
            tg = truncated_generators(rep, m)
            assert len(tg.matrices) == 2 * rep.surface.genus * (m + 1)
            assert all(sigma(w, tau) == 0 for w in tg.words)

    def test_level_zero_is_surface_generators(self):
        rep = helpers.hnn_for(1, 3.0)
        tg = truncated_generators(rep, 0)
        for got, gen in zip(tg.matrices, rep.surface.generators):
            assert got.dist(gen) <= 1e-12

    def test_level_relation(self):
        # the conjugated boundary at level k+1 lands in the level-k group
        rep = helpers.hnn_for(1, 3.0)
        tau = rep.stable_letter_index()
        w = rep.surface.boundary_word()
        for k in (0, 1):
            lhs = rep.evaluate((tau,) * (k + 1) + w + (-tau,) * (k + 1))
            rhs = rep.evaluate((tau,) * k + (1,) + (-tau,) * k)
            assert lhs.dist(rhs) <= 1e-9

    def test_negative_level_rejected(self):
        rep = helpers.hnn_for(1, 3.0)
        with pytest.raises(ValueError):
            truncated_generators(rep, -1)


class TestEnumerateBall:
    def test_cyclic_group_counts(self):
        g = MoebiusMap.vertical_translation(1.0)
        ball = enumerate_ball([g], BallLimit(max_word_len=3))
        assert len(ball) == 7  # identity and g^{+-1,+-2,+-3}

    def test_free_group_counts(self):
        a, b = _schottky_pair()
        ball2 = enumerate_ball([a, b], BallLimit(max_word_len=2))
        assert len(ball2) == 1 + 4 + 12
        ball3 = enumerate_ball([a, b], BallLimit(max_word_len=3))
        assert len(ball3) == 1 + 4 + 12 + 36

    def test_displacement_oracle(self):
        g = MoebiusMap.vertical_translation(1.0)
        ball = enumerate_ball([g], BallLimit(max_word_len=1))
        by_word = {e.word: e.displacement for e in ball}
        assert by_word[()] == 0.0
        assert by_word[(1,)] == pytest.approx(1.0, abs=1e-12)
        assert by_word[(-1,)] == pytest.approx(1.0, abs=1e-12)

    def test_completeness_certificate(self):
        a, b = _schottky_pair()
        ball = enumerate_ball([a, b], BallLimit(max_displacement=9.0))
        assert not ball.truncated
        assert ball.complete_radius == pytest.approx(9.0)
        assert float(np.max(ball.disps)) <= 9.0

    def test_count_cap_sets_truncated_flag(self):
        a, b = _schottky_pair()
        ball = enumerate_ball([a, b], BallLimit(max_word_len=6, max_count=30))
        assert ball.truncated
        assert len(ball) <= 30

    def test_deterministic_order(self):
        a, b = _schottky_pair()
        b1 = enumerate_ball([a, b], BallLimit(max_word_len=3))
        b2 = enumerate_ball([a, b], BallLimit(max_word_len=3))
        assert b1.words == b2.words
        assert np.array_equal(b1.mats, b2.mats)

    def test_sigma_propagation(self):
        g = MoebiusMap.vertical_translation(1.0)
        h = _axis_translation(1.0, 3.0, 4.0)
        ball = enumerate_ball([g, h], BallLimit(max_word_len=2),
                              sigma_values=[1, 0])
        for e in ball:
            assert e.sigma == sigma(e.word, 1)

    def test_truncation_monotone_in_level(self):
        rep = helpers.hnn_for(1, 3.0)
        k0 = _keys(enumerate_ball(truncated_generators(rep, 0).matrices,
                                  BallLimit(max_word_len=2)).mats)
        k1 = _keys(enumerate_ball(truncated_generators(rep, 1).matrices,
                                  BallLimit(max_word_len=2)).mats)
        assert k0 <= k1

    def test_no_near_identity_elements(self):
        rep = helpers.hnn_for(1, 3.0)
        ball = enumerate_ball(truncated_generators(rep, 1).matrices,
                              BallLimit(max_word_len=4))
        ident = MoebiusMap.identity()
        for e in ball:
            if e.word:
                assert e.moebius().dist(ident) > 1e-6

    def test_unbounded_request_rejected(self):
        g = MoebiusMap.vertical_translation(1.0)
        with pytest.raises(ValueError):
            enumerate_ball([g], BallLimit())
        with pytest.raises(ValueError):
            enumerate_ball([], BallLimit(max_word_len=2))

    def test_count_growth_log_linear(self):
        a, b = _schottky_pair()
        ball = enumerate_ball([a, b], BallLimit(max_word_len=6))
        lens = [len(e.word) for e in ball]
        counts = [lens.count(k) for k in range(7)]
        # reduced words in a rank-2 free group: 4 * 3^(k-1)
        slopes = [math.log(counts[k + 1] / counts[k]) for k in range(2, 6)]
        for s in slopes:
            assert s == pytest.approx(math.log(3.0), abs=1e-9)
