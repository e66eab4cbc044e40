"""Unit tests for the stable-letter extension."""

import cmath
import math
import random

import pytest

import helpers
from kleindim.errors import LengthMismatch, PlanesDisjoint
from kleindim.hnn import build_hnn, plane_angle, solve_stable_letter
from kleindim.moebius import MoebiusMap
from kleindim.surface import one_holed_torus_rep


class TestSolveStableLetter:
    def test_defining_conditions_torus(self):
        rep = helpers.hnn_for(1, 3.0)
        assert rep.relator_residual() <= 1e-9
        assert plane_angle(rep.T) == pytest.approx(math.pi / 2.0, abs=1e-9)

    def test_zero_rotation_preserves_plane(self):
        surface = helpers.surface_for(1, 3.0)
        t0 = solve_stable_letter(surface, rotation=0.0)
        conj = t0 @ surface.boundary_matrix() @ t0.inverse()
        assert conj.dist(surface.gamma_matrix()) <= 1e-9
        assert plane_angle(t0) == pytest.approx(0.0, abs=1e-9)

    def test_stable_letter_is_loxodromic(self):
        rep = helpers.hnn_for(1, 3.0)
        assert rep.T.is_loxodromic()

    def test_length_mismatch_rejected(self):
        surface = one_holed_torus_rep(1.0, 1.1)
        with pytest.raises(LengthMismatch):
            solve_stable_letter(surface)


class TestEvaluateWord:
    def test_empty_word(self):
        rep = helpers.hnn_for(1, 3.0)
        assert rep.evaluate(()).is_identity(1e-12)

    def test_relator_word_near_identity(self):
        rep = helpers.hnn_for(1, 3.0)
        assert rep.evaluate(rep.relator_word()).is_identity(1e-7)

    def test_homomorphism_on_random_words(self):
        rep = helpers.hnn_for(1, 3.0)
        rng = random.Random(0)
        letters = [1, -1, 2, -2, 3, -3]
        for _ in range(20):
            u = tuple(rng.choice(letters) for _ in range(3))
            v = tuple(rng.choice(letters) for _ in range(3))
            lhs = rep.evaluate(u + v)
            rhs = rep.evaluate(u) @ rep.evaluate(v)
            assert lhs.dist(rhs) <= 1e-8


class TestPlaneAngle:
    def test_real_map_preserves_plane(self):
        assert plane_angle(MoebiusMap(2.0, 1.0, 1.0, 1.0)) == pytest.approx(0.0)

    def test_quarter_rotation(self):
        t = MoebiusMap.diagonal(cmath.exp(1j * math.pi / 4.0))
        assert plane_angle(t) == pytest.approx(math.pi / 2.0, abs=1e-12)

    def test_general_rotation_angle(self):
        for angle in (0.3, 1.0, 1.4):
            t = MoebiusMap.vertical_rotation(angle)
            assert plane_angle(t) == pytest.approx(angle, abs=1e-9)

    def test_disjoint_planes_detected(self):
        t = MoebiusMap(1.0, 2j, 0.0, 1.0)  # z -> z + 2i
        with pytest.raises(PlanesDisjoint):
            plane_angle(t)


class TestConjugationInvariance:
    def test_diagnostics_stable_under_real_conjugation(self):
        # conjugating by a plane-preserving map transports the reference
        # plane to itself, so both diagnostics must be unchanged
        surface = helpers.surface_for(1, 3.0)
        rep = build_hnn(surface)
        q = MoebiusMap(1.0, 0.5, 0.5, 2.0)
        tq = rep.T.conjugate_by(q)
        a = surface.gamma_matrix().conjugate_by(q)
        w = surface.boundary_matrix().conjugate_by(q)
        residual = (tq @ w @ tq.inverse()).dist(a)
        assert residual <= 1e-8
        assert plane_angle(tq) == pytest.approx(math.pi / 2.0, abs=1e-8)
