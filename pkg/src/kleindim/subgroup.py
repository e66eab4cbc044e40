"""Graded words, truncated generating sets, and orbit-ball enumeration.

The extension group carries a grading counting stable-letter exponents;
its kernel restricted to the positive strata is generated, at truncation
level m, by the conjugates tau^k gamma_i tau^-k for 0 <= k <= m.  Orbit
balls of such generating sets feed the dimension estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .moebius import MoebiusMap
from .words import free_reduce

QUANT = 1e-8
_COLLISION_TOL = 1e-6


def sigma(word, stable_letter):
    """Exponent sum of the stable letter in a word."""
    n = 0
    for letter in word:
        if letter == stable_letter:
            n += 1
        elif letter == -stable_letter:
            n -= 1
    return n


@dataclass(frozen=True)
class TruncationGenerators:
    """Matrices for {tau^k gamma_i tau^-k : 0 <= k <= m}."""

    level: int
    matrices: list
    words: list  # words in the extension's letters, parallel to matrices

    def __post_init__(self):
        assert len(self.matrices) == len(self.words)


def truncated_generators(rep, m):
    """Level-m generating set of the positive-strata subgroup."""
    if m < 0:
        raise ValueError("level must be >= 0")
    tau = rep.stable_letter_index()
    mats, wds = [], []
    for k in range(m + 1):
        prefix = (tau,) * k
        suffix = (-tau,) * k
        for i in range(1, 2 * rep.surface.genus + 1):
            w = prefix + (i,) + suffix
            mats.append(rep.evaluate(w))
            wds.append(w)
    return TruncationGenerators(level=m, matrices=mats, words=wds)


@dataclass(frozen=True)
class BallLimit:
    max_word_len: int | None = None
    max_displacement: float | None = None
    max_count: int | None = None
    # extra displacement band kept for expansion beyond max_displacement
    slack: float | None = None


class OrbitElement:
    """One distinct group element found by the ball enumeration."""

    __slots__ = ("mat", "word", "displacement", "sigma")

    def __init__(self, mat, word, displacement, sigma_value):
        self.mat = mat
        self.word = word
        self.displacement = displacement
        self.sigma = sigma_value

    def moebius(self):
        a, b, c, d = self.mat
        return MoebiusMap(a, b, c, d, _normalized=True)

    def __repr__(self):
        return f"OrbitElement(word={self.word}, disp={self.displacement:.4f})"


@dataclass
class BallResult:
    """Deduplicated orbit ball with a completeness certificate."""

    mats: np.ndarray  # (n, 4) complex128, canonical representatives
    words: list
    disps: np.ndarray
    sigmas: np.ndarray
    complete_radius: float
    collisions: int = 0
    truncated: bool = False
    skipped: int = 0
    numeric_drops: int = 0

    def __len__(self):
        return len(self.words)

    def __getitem__(self, i):
        return OrbitElement(self.mats[i], self.words[i], float(self.disps[i]), int(self.sigmas[i]))

    def __iter__(self):
        for i in range(len(self.words)):
            yield self[i]


def _quantize(mats, offset):
    cols = np.empty((len(mats), 8), dtype=np.int64)
    cols[:, 0::2] = np.rint(mats.real / QUANT + offset)
    cols[:, 1::2] = np.rint(mats.imag / QUANT + offset)
    return cols


def _gen_array(gens):
    rows = []
    for g in gens:
        rows.append(list(g.entries()))
    for g in gens:
        rows.append(list(g.inverse().entries()))
    return np.array(rows, dtype=np.complex128)


def enumerate_ball(gens, limit, sigma_values=None):
    """BFS over reduced words in `gens` and their inverses.

    Exactly one element per distinct matrix (quantized dedup); the output
    order is (word length, lexicographic word).  `sigma_values[i]` is the
    grading of generator i (default 0).
    """
    if not gens:
        raise ValueError("need at least one generator")
    if limit.max_word_len is None and limit.max_displacement is None and limit.max_count is None:
        raise ValueError("unbounded enumeration")

    ngen = len(gens)
    garr = _gen_array(gens)
    gsig = list(sigma_values or [0] * ngen)
    # letter for column j of garr; inverse column of j is (j + ngen) % 2n
    letters = [i + 1 for i in range(ngen)] + [-(i + 1) for i in range(ngen)]
    sig_of_col = [gsig[i] for i in range(ngen)] + [-gsig[i] for i in range(ngen)]

    disp_cap = limit.max_displacement
    if disp_cap is not None:
        # margin beyond the cap kept for expansion; reduced words in a
        # discrete free group have near-monotone prefix displacement, so
        # a small band suffices and keeps the exponential cost down
        slack = limit.slack if limit.slack is not None else 1.0
        band = disp_cap + slack
    else:
        band = math.inf
    max_count = limit.max_count or (10**7)
    max_len = limit.max_word_len if limit.max_word_len is not None else 10**6

    ident = np.array([[1, 0, 0, 1]], dtype=np.complex128)
    seen = {}
    for key in (_quantize(ident, 0.0)[0].tobytes(), _quantize(ident, 0.5)[0].tobytes()):
        seen[key] = 0
    all_mats = [ident[0]]
    all_words = [()]
    all_disps = [0.0]
    all_sigmas = [0]
    in_ball = [True]
    n_in_ball = 1
    numeric_drops = 0
    collisions = 0
    truncated = False
    frontier = [0]  # indices into the element store
    last_cols = [None]
    depth = 0
    unexpanded_min = math.inf

    while frontier and depth < max_len:
        depth += 1
        f_idx = []
        for i in frontier:
            if all_disps[i] <= band:
                f_idx.append(i)
            else:
                unexpanded_min = min(unexpanded_min, all_disps[i])
        if not f_idx:
            break
        fmat = np.array([all_mats[i] for i in f_idx])
        prods = _core.expand(fmat, garr)
        disps = _core.displacements(prods)
        finite = np.isfinite(prods).all(axis=1)
        with np.errstate(invalid="ignore"):
            keys0 = _quantize(np.where(finite[:, None], prods, 0.0), 0.0)
            keys1 = _quantize(np.where(finite[:, None], prods, 0.0), 0.5)
        ncols = 2 * ngen
        new_frontier = []
        stop = False
        for row in range(len(prods)):
            col = row % ncols
            parent = f_idx[row // ncols]
            pcol = last_cols[parent]
            if pcol is not None and col == (pcol + ngen) % ncols:
                continue  # immediate backtrack: not a reduced word
            if not finite[row]:
                numeric_drops += 1
                continue
            k0 = keys0[row].tobytes()
            k1 = keys1[row].tobytes()
            hit = seen.get(k0)
            if hit is None:
                hit = seen.get(k1)
            if hit is not None:
                if np.max(np.abs(all_mats[hit] - prods[row])) > _COLLISION_TOL:
                    collisions += 1
                continue
            d = float(disps[row])
            if d > band:
                unexpanded_min = min(unexpanded_min, d)
                continue
            idx = len(all_mats)
            seen[k0] = idx
            seen[k1] = idx
            # copy: a view would pin the whole product block in memory
            all_mats.append(prods[row].copy())
            all_words.append(all_words[parent] + (letters[col],))
            all_disps.append(d)
            all_sigmas.append(all_sigmas[parent] + sig_of_col[col])
            keep_row = disp_cap is None or d <= disp_cap
            in_ball.append(keep_row)
            n_in_ball += keep_row
            last_cols.append(col)
            new_frontier.append(idx)
            if n_in_ball >= max_count or len(all_mats) >= 4 * max_count:
                truncated = True
                stop = True
                break
        frontier = new_frontier
        if stop:
            break

    if truncated or (depth >= max_len and frontier):
        for i in frontier:
            unexpanded_min = min(unexpanded_min, all_disps[i])
        complete_radius = min(unexpanded_min, disp_cap or math.inf)
        if not math.isfinite(complete_radius):
            complete_radius = 0.0
    else:
        complete_radius = disp_cap if disp_cap is not None else min(unexpanded_min, math.inf)
        if not math.isfinite(complete_radius):
            # frontier exhausted entirely: the whole group was enumerated
            complete_radius = math.inf

    keep = [i for i, ok in enumerate(in_ball) if ok]
    return BallResult(
        mats=np.array([all_mats[i] for i in keep]),
        words=[all_words[i] for i in keep],
        disps=np.array([all_disps[i] for i in keep]),
        sigmas=np.array([all_sigmas[i] for i in keep], dtype=np.int64),
        complete_radius=complete_radius,
        collisions=collisions,
        truncated=truncated,
        skipped=len(all_mats) - len(keep),
        numeric_drops=numeric_drops,
    )
