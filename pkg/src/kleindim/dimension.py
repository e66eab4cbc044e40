"""Limit-set sampling, box-counting dimension, critical exponent, and
connected-component (Cantor) diagnostics on the chordal sphere."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateScaleWindow, IncompleteBall
from .moebius import INF, SpherePoint

DEDUP_TOL = 1e-10
_SQRT8 = 2.0 * math.sqrt(2.0)


def _to_xyz(z):
    """Unit-sphere embedding; chordal distance = euclidean distance."""
    if z is None:
        return np.array([0.0, 0.0, 1.0])
    n = abs(z) ** 2
    return np.array([2.0 * z.real, 2.0 * z.imag, n - 1.0]) / (n + 1.0)


@dataclass
class LimitSample:
    """Deduplicated attracting fixed points of sampled loxodromics."""

    points: list  # SpherePoints
    xyz: np.ndarray  # (n, 3) unit-sphere coordinates, parallel to points
    provenance: str
    count: int
    skipped: int = 0

    def __len__(self):
        return self.count


def sample_limit_set(elements, cap=100_000, provenance=""):
    """Attracting fixed points of loxodromic elements, deduplicated.

    When over the cap, elements with the longest words are kept first;
    deeper words give better-distributed points.
    """
    ordered = sorted(elements, key=lambda e: -len(e.word))
    pts = []
    coords = []
    seen = {}
    skipped = 0
    for e in ordered:
        if len(pts) >= cap:
            break
        m = e.moebius()
        if not m.is_loxodromic():
            skipped += 1
            continue
        att, _ = m.fixed_points()
        xyz = _to_xyz(None if att.infinite else att.z)
        key0 = tuple(np.rint(xyz / DEDUP_TOL).astype(np.int64))
        key1 = tuple(np.rint(xyz / DEDUP_TOL + 0.5).astype(np.int64))
        if key0 in seen or key1 in seen:
            continue
        seen[key0] = True
        seen[key1] = True
        pts.append(att)
        coords.append(xyz)
    xyz = np.array(coords) if coords else np.empty((0, 3))
    return LimitSample(points=pts, xyz=xyz, provenance=provenance,
                       count=len(pts), skipped=skipped)


def merge_samples(a, b):
    """Union of two samples, deduplicated; keeps b's provenance.

    Limit sets of nested groups are nested, so accumulating sample
    points across truncation levels keeps the sampled sets nested too,
    which the box-count comparison across levels relies on.
    """
    pts = []
    coords = []
    seen = {}
    skipped = a.skipped + b.skipped
    for sample in (a, b):
        for p, xyz in zip(sample.points, sample.xyz):
            key0 = tuple(np.rint(xyz / DEDUP_TOL).astype(np.int64))
            key1 = tuple(np.rint(xyz / DEDUP_TOL + 0.5).astype(np.int64))
            if key0 in seen or key1 in seen:
                continue
            seen[key0] = True
            seen[key1] = True
            pts.append(p)
            coords.append(xyz)
    xyz = np.array(coords) if coords else np.empty((0, 3))
    return LimitSample(points=pts, xyz=xyz, provenance=b.provenance,
                       count=len(pts), skipped=skipped)


def sample_from_points(points, provenance=""):
    """LimitSample from explicit SpherePoints (mostly for tests)."""
    coords = [_to_xyz(None if p.infinite else p.z) for p in points]
    xyz = np.array(coords) if coords else np.empty((0, 3))
    return LimitSample(points=list(points), xyz=xyz, provenance=provenance,
                       count=len(points))


@dataclass(frozen=True)
class ScaleRow:
    delta: float
    box_count: int
    components: int
    max_diam: float


@dataclass
class ScaleTable:
    rows: list

    def to_csv(self):
        lines = ["delta,box_count,components,max_diam"]
        for r in self.rows:
            lines.append(f"{r.delta!r},{r.box_count},{r.components},{r.max_diam!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DimEstimate:
    value: float
    stderr: float
    scale_window: tuple
    method: str


def default_scales(n=10, start=1.0):
    return [start * 0.5**k for k in range(n)]


def _box_count(sample, delta):
    """Occupied chordal-grid cells across the two stereographic charts."""
    side = delta / _SQRT8
    cells = set()
    for p in sample.points:
        if p.infinite:
            z, chart = 0.0 + 0.0j, 1
        elif abs(p.z) <= 1.0:
            z, chart = p.z, 0
        else:
            z, chart = 1.0 / p.z, 1
        cells.add((chart, math.floor(z.real / side), math.floor(z.imag / side)))
    return len(cells)


def _ols(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    resid = y - (ym + slope * (x - xm))
    if n > 2:
        stderr = math.sqrt(float(np.sum(resid**2)) / (n - 2) / sxx)
    else:
        stderr = 0.0
    return slope, stderr


def _stable_window(slopes, spread=0.15, min_len=4, prefer_tail=False):
    """Longest run of consecutive local slopes varying by < spread.

    Returns (i, j) meaning scales i..j inclusive (j - i local slopes).
    Ties go to the later run when prefer_tail.
    """
    n = len(slopes)
    best = None
    for i in range(n):
        for j in range(i, n):
            run = slopes[i : j + 1]
            if max(run) - min(run) >= spread:
                break
            if j - i + 2 >= min_len:
                length = j - i
                if best is None or length > best[0] or (prefer_tail and length == best[0]):
                    best = (length, i, j)
    if best is None:
        return None
    return best[1], best[2] + 1


def box_dimension(sample, scales=None, with_components=True):
    """Box-counting dimension with an automatically chosen scale window.

    The per-scale component columns are costly on large samples; pass
    with_components=False to leave them zero when only the dimension
    estimate is needed.
    """
    if scales is None:
        scales = default_scales()
    scales = sorted(scales, reverse=True)
    counts = [_box_count(sample, d) for d in scales]
    rows = []
    for d, c in zip(scales, counts):
        comp, diam = component_analysis(sample, d) if with_components else (0, 0.0)
        rows.append(ScaleRow(delta=d, box_count=c, components=comp, max_diam=diam))
    table = ScaleTable(rows=rows)

    logs = [math.log(c) for c in counts]
    invs = [math.log(1.0 / d) for d in scales]
    local = [
        (logs[i + 1] - logs[i]) / (invs[i + 1] - invs[i]) for i in range(len(scales) - 1)
    ]
    win = _stable_window(local)
    if win is None:
        raise DegenerateScaleWindow(
            "no run of 4 consecutive scales with stable local slopes"
        )
    i, j = win
    slope, stderr = _ols(invs[i : j + 1], logs[i : j + 1])
    est = DimEstimate(
        value=max(slope, 0.0),
        stderr=stderr,
        scale_window=(scales[j], scales[i]),
        method="box",
    )
    return est, table


def critical_exponent(ball, radii):
    """Orbit-counting exponent: slope of ln N(R) against R.

    `ball` must carry a completeness certificate covering max(radii).
    """
    radii = sorted(radii)
    if ball.complete_radius < radii[-1]:
        raise IncompleteBall(
            f"ball complete to {ball.complete_radius}, need {radii[-1]}"
        )
    disps = np.sort(ball.disps)
    counts = [int(np.searchsorted(disps, r, side="right")) for r in radii]
    if min(counts) < 1:
        raise DegenerateScaleWindow("empty orbit count at the smallest radius")
    logs = [math.log(c) for c in counts]
    local = [
        (logs[i + 1] - logs[i]) / (radii[i + 1] - radii[i]) for i in range(len(radii) - 1)
    ]
    win = _stable_window(local, prefer_tail=True)
    if win is None:
        i, j = max(0, len(radii) - 4), len(radii) - 1
    else:
        i, j = win
    slope, stderr = _ols(radii[i : j + 1], logs[i : j + 1])
    return DimEstimate(
        value=max(slope, 0.0),
        stderr=stderr,
        scale_window=(radii[i], radii[j]),
        method="orbit",
    )


def _cross_within(a, b, d2):
    """Any pair across the two unit-vector sets at squared distance <= d2.

    Squared distance is 2 - 2 (a . b); chunked to bound memory, with an
    early exit on the first hit.
    """
    dot_needed = 1.0 - d2 / 2.0
    step = 2048
    for i in range(0, len(a), step):
        blk = a[i : i + step]
        for j in range(0, len(b), step):
            if float(np.max(blk @ b[j : j + step].T)) >= dot_needed:
                return True
    return False


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        p = self.parent
        root = i
        while p[root] != root:
            root = p[root]
        while p[i] != root:
            p[i], i = root, p[i]
        return root

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def component_analysis(sample, delta):
    """Components of the graph joining points at chordal distance <= delta.

    Returns (component_count, max_component_diameter).
    """
    n = sample.count
    if n == 0:
        return 0, 0.0
    xyz = sample.xyz
    # cell side delta/sqrt(3): points sharing a cell are always linked
    side = delta / math.sqrt(3.0)
    keys = np.floor(xyz / side).astype(np.int64)
    cells = {}
    for i in range(n):
        cells.setdefault(tuple(keys[i]), []).append(i)
    uf = _UnionFind(n)
    for members in cells.values():
        for i in members[1:]:
            uf.union(members[0], i)
    d2 = delta * delta
    offsets = [
        (a, b, c)
        for a in range(-2, 3)
        for b in range(-2, 3)
        for c in range(-2, 3)
        if (a, b, c) > (0, 0, 0)
    ]
    for key, members in cells.items():
        a = xyz[members]
        for off in offsets:
            nb = (key[0] + off[0], key[1] + off[1], key[2] + off[2])
            other = cells.get(nb)
            if other is None or uf.find(members[0]) == uf.find(other[0]):
                continue
            b = xyz[other]
            if _cross_within(a, b, d2):
                uf.union(members[0], other[0])
    groups = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    max_diam = 0.0
    for members in groups.values():
        if len(members) == 1:
            continue
        pts = xyz[members]
        if len(members) <= 4000:
            diam = math.sqrt(max(2.0 - 2.0 * float(np.min(pts @ pts.T)), 0.0))
        else:
            diam = _double_sweep(pts)
        max_diam = max(max_diam, diam)
    return len(groups), max_diam


def _double_sweep(pts):
    """Approximate diameter: repeated farthest-point sweeps."""
    i = 0
    best = 0.0
    for _ in range(4):
        d = 2.0 - 2.0 * pts @ pts[i]
        j = int(np.argmax(d))
        best = max(best, math.sqrt(max(float(d[j]), 0.0)))
        i = j
    return best
