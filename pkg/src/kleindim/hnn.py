"""HNN extension of a surface representation by a stable letter.

The stable letter conjugates the boundary holonomy W to the designated
curve (both have translation length 1) while rotating the invariant
plane of the surface group by a right angle, so the image plane meets it
orthogonally.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import LengthMismatch, PlanesDisjoint
from .moebius import INF, MoebiusMap
from .words import evaluate_word as _eval

LENGTH_TOL = 1e-8
ANGLE_TOL = 1e-9


class HnnRep:
    """Surface generators plus the stable letter as one representation.

    Letters 1..2g are the surface generators, letter 2g+1 the stable
    letter.
    """

    def __init__(self, surface, T):
        self.surface = surface
        self.T = T
        self.generators = list(surface.generators) + [T]

    def stable_letter_index(self):
        return 2 * self.surface.genus + 1

    def evaluate(self, word):
        return _eval(word, self.generators)

    def relator_word(self):
        tau = self.stable_letter_index()
        w_inv = tuple(-x for x in reversed(self.surface.boundary_word()))
        return (1,) + (tau,) + w_inv + (-tau,)

    def relator_residual(self):
        """Sign-canonical distance between rho(gamma_1) and T rho(W) T^-1.

        Measured on the defining conjugation rather than by expanding the
        relator word letter by letter; the letterwise product is far more
        sensitive to the rounding of the stored generators.
        """
        a = self.surface.gamma_matrix()
        w = self.surface.boundary_matrix()
        return (self.T @ w @ self.T.inverse()).dist(a)


def evaluate_word(rep, word):
    return rep.evaluate(word)


def solve_stable_letter(surface, rotation=math.pi / 2.0):
    """Stable letter T with T W T^-1 = gamma_1 and plane rotation pi/2.

    Canonical choice: attracting fixed points matched, no translation
    offset along the axis.
    """
    A = surface.gamma_matrix()
    W = surface.boundary_matrix()
    la = A.translation_length()
    lw = W.translation_length()
    if abs(la - lw) > LENGTH_TOL:
        raise LengthMismatch(f"curve lengths {la} and {lw} cannot be conjugate")
    qa = A.conjugator_to_standard()
    qw = W.conjugator_to_standard()
    rot = MoebiusMap.vertical_rotation(rotation)
    return qa.inverse() @ rot @ qw


def build_hnn(surface, rotation=math.pi / 2.0):
    return HnnRep(surface, solve_stable_letter(surface, rotation))


def _circumcircle(z1, z2, z3):
    """Center and radius of the circle through three complex points."""
    m = np.array(
        [
            [2.0 * z1.real, 2.0 * z1.imag, 1.0],
            [2.0 * z2.real, 2.0 * z2.imag, 1.0],
            [2.0 * z3.real, 2.0 * z3.imag, 1.0],
        ]
    )
    rhs = np.array([abs(z1) ** 2, abs(z2) ** 2, abs(z3) ** 2])
    cx, cy, s = np.linalg.solve(m, rhs)
    center = complex(cx, cy)
    radius = math.sqrt(max(s + cx * cx + cy * cy, 0.0))
    return center, radius


def plane_angle(T):
    """Dihedral angle between the vertical plane over the real line and
    its image under T, in [0, pi/2]."""
    images = [T.apply(p) for p in (0.0, 1.0, INF)]
    finite = [p.z for p in images if not p.infinite]
    if len(finite) == 3:
        # collinear images mean the circline is a euclidean line
        u, v, w = finite
        area = (v - u).real * (w - u).imag - (v - u).imag * (w - u).real
        if abs(area) <= 1e-12 * (abs(v - u) * abs(w - u) + 1e-300):
            finite = [u, v]
    if len(finite) == 2:
        # the image circline is a euclidean line through two points
        p, q = finite
        delta = q - p
        if abs(delta.imag) <= 1e-12 * abs(delta):
            if abs(p.imag) > ANGLE_TOL:
                raise PlanesDisjoint("image plane is parallel to the reference plane")
            return 0.0
        theta = abs(cmath.phase(delta)) % math.pi
        return min(theta, math.pi - theta)
    center, radius = _circumcircle(*finite)
    gap = abs(center.imag)
    if gap > radius + ANGLE_TOL:
        raise PlanesDisjoint(f"image hemisphere misses the reference plane by {gap - radius}")
    return math.acos(min(gap / radius, 1.0))
