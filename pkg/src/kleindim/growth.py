"""Tree-of-planes model of the glued space: strata, leaf-count bound,
volume-growth entropy bound, and empirical quasi-geodesic constants.

The glued space deformation-retracts to a tree of hyperbolic planes
joined along lifts of the two length-1 curves.  The unfolding projection
maps every stratum isometrically onto the base plane; counting how many
strata can carry a copy of a point at a given distance yields the
entropy bound 1 + ln2/(2r).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundViolation, EnumerationBudgetExceeded, UnrealizablePath
from .moebius import BASEPOINT, MoebiusMap, hdist
from .subgroup import BallLimit, enumerate_ball

GAP_TOL = 1e-6
_ENDPOINT_QUANT = 1e-6


def entropy_bound(r):
    """Upper bound 1 + ln2/(2r) for the volume-growth entropy."""
    if r <= 0:
        raise ValueError("collar radius must be positive")
    return 1.0 + math.log(2.0) / (2.0 * r)


# -- strata tree ------------------------------------------------------


@dataclass
class StrataNode:
    parent: int  # index into the tree's node list; -1 for the root
    depth: int
    kind: str  # "gamma" or "boundary": which curve the entry lifts
    d: float  # cumulative distance from the base point to the geodesic
    gap: float  # separation from the parent's entry geodesic
    proj: tuple  # projected entry geodesic, endpoints in base coords
    frame: MoebiusMap  # local stratum coords -> base-plane coords


@dataclass
class StrataTree:
    nodes: list  # StrataNode; nodes[0] is the root placeholder
    radius: float
    r_achieved: float

    def __len__(self):
        return len(self.nodes)

    def min_gap(self):
        gaps = [n.gap for n in self.nodes[1:] if n.depth >= 2]
        return min(gaps) if gaps else math.inf

    def max_depth(self):
        return max(n.depth for n in self.nodes)


def _dist_point_geodesic(p1, p2, q1, q2):
    """Distance from the base point i to the geodesic with real projective
    endpoints (p1:p2), (q1:q2): sinh d = |p1 q1 + p2 q2| / |p1 q2 - p2 q1|."""
    num = abs(p1 * q1 + p2 * q2)
    den = abs(p1 * q2 - p2 * q1)
    if den == 0.0:
        return math.inf
    return math.asinh(num / den)


def _vertical_gap(u, v):
    """Distance from the vertical axis {0, inf} to the geodesic with real
    endpoints u, v; None when they share the axis or an endpoint."""
    if u is None or v is None:
        return 0.0 if (u not in (None, 0.0) or v not in (None, 0.0)) else None
    if abs(u) < 1e-9 or abs(v) < 1e-9 or abs(u) > 1e9 or abs(v) > 1e9:
        return None
    if u == v:
        return None
    val = (u + v) / (u - v)
    if abs(val) < 1.0:
        return 0.0
    return math.acosh(abs(val))


def _endpoint_key(x):
    if x is None or abs(x) > 1e8:
        return (1, 0)
    q = _ENDPOINT_QUANT * (1.0 + abs(x))
    return (0, round(float(x) / q))


def _geodesic_key(e1, e2):
    a, b = _endpoint_key(e1), _endpoint_key(e2)
    return (a, b) if a <= b else (b, a)


@dataclass
class _Candidate:
    w: MoebiusMap  # representative surface-group element
    kind: str
    gap: float  # separation from the entry axis ({0, inf} in local frame)
    ends: tuple  # endpoints in the stratum's standard coordinates


def _image_endpoint(m, z):
    """Image of a real endpoint (None = inf) under a real Moebius map."""
    if z is None:
        return None if abs(m.c) < 1e-14 * abs(m.a) else (m.a / m.c).real
    den = m.c * z + m.d
    if abs(den) < 1e-12 * (abs(m.a * z) + abs(m.b) + 1.0):
        return None
    return ((m.a * z + m.b) / den).real


def _axis_endpoints(mat):
    att, rep = mat.fixed_points()
    return (None if att.infinite else att.z.real,
            None if rep.infinite else rep.z.real)


def _lift_candidates(surface, frame, radius, max_elements):
    """Distinct lifts of both gluing axes near the entry axis.

    `frame` carries the entry axis to {0, inf}; gaps are measured from
    that vertical axis and lifts are kept within `radius` of it, with the
    nearest point at bounded height so the list stays finite.
    """
    gens = [g.conjugate_by(frame) for g in surface.generators]
    axes = {
        "gamma": _axis_endpoints(surface.gamma_matrix().conjugate_by(frame)),
        "boundary": _axis_endpoints(surface.boundary_matrix().conjugate_by(frame)),
    }
    cap = 2.0 * radius + 3.0
    ball = enumerate_ball(gens, BallLimit(
        max_displacement=cap, max_count=max_elements, slack=1.0))
    out = []
    seen = set()
    frame_inv = frame.inverse()
    for el in ball:
        m = el.moebius()
        for kind, (e1, e2) in axes.items():
            u = _image_endpoint(m, e1)
            v = _image_endpoint(m, e2)
            gap = _vertical_gap(u, v)
            if gap is None or gap > radius:
                continue
            if u is not None and v is not None:
                axial = 0.5 * math.log(abs(u * v)) if abs(u * v) > 0 else 0.0
                if abs(axial) > radius + 1.0:
                    continue
            key = _geodesic_key(u, v)
            if key in seen:
                continue
            seen.add(key)
            ends = (_image_endpoint(frame_inv, u), _image_endpoint(frame_inv, v))
            out.append(_Candidate(w=m.conjugate_by(frame_inv), kind=kind,
                                  gap=gap, ends=ends))
    return out


def _real_stable_letter(surface):
    """Fuchsian counterpart of the stable letter: carries the boundary
    axis to the designated curve's axis with matching translation."""
    qa = surface.gamma_matrix().conjugator_to_standard()
    qw = surface.boundary_matrix().conjugator_to_standard()
    return qa.inverse() @ qw


def build_strata_tree(rep, radius, max_depth=4, max_elements=200_000,
                      max_nodes=50_000):
    """Tree of strata reachable within `radius` of the base point.

    Children of a stratum are the distinct lifts of the two gluing axes;
    a node's distance accumulates the separations along its chain, and
    `frame` unfolds the node's plane isometrically onto the base plane.
    """
    surface = rep.surface
    t_real = _real_stable_letter(surface)
    a_mat = surface.gamma_matrix()
    w_mat = surface.boundary_matrix()
    qa = a_mat.conjugator_to_standard()
    qw = w_mat.conjugator_to_standard()

    # candidate lifts per entry type, in standard surface coordinates
    cands = {
        "gamma": _lift_candidates(surface, qa, radius, max_elements),
        "boundary": _lift_candidates(surface, qw, radius, max_elements),
    }

    ident = MoebiusMap.identity()
    root = StrataNode(parent=-1, depth=0, kind="", d=0.0, gap=0.0,
                      proj=(), frame=ident)
    nodes = [root]

    # depth-1 children: lifts measured from the base point itself
    stack = []
    for c in cands["gamma"] + cands["boundary"]:
        p1, p2 = (c.ends[0], 1.0) if c.ends[0] is not None else (1.0, 0.0)
        q1, q2 = (c.ends[1], 1.0) if c.ends[1] is not None else (1.0, 0.0)
        d = _dist_point_geodesic(p1, p2, q1, q2)
        if d <= radius:
            stack.append((0, 1, c, d))

    seen_depth1 = set()
    while stack:
        parent_idx, depth, cand, d = stack.pop()
        parent = nodes[parent_idx]
        proj = tuple(_image_endpoint(parent.frame, e) for e in cand.ends)
        if depth == 1:
            key = _geodesic_key(*proj)
            if key in seen_depth1:
                continue
            seen_depth1.add(key)
        if cand.kind == "gamma":
            # crossing a lift of the curve: the far side enters through
            # the boundary axis of the next stratum
            frame = parent.frame @ cand.w @ t_real
            child_entry = "boundary"
        else:
            frame = parent.frame @ cand.w @ t_real.inverse()
            child_entry = "gamma"
        idx = len(nodes)
        nodes.append(StrataNode(parent=parent_idx, depth=depth,
                                kind=cand.kind, d=d, gap=d if depth == 1 else cand.gap,
                                proj=proj, frame=frame))
        if len(nodes) > max_nodes:
            raise EnumerationBudgetExceeded(
                f"strata tree exceeded {max_nodes} nodes")
        if depth >= max_depth:
            continue
        for c in cands[child_entry]:
            if c.gap < GAP_TOL:
                continue  # the entry geodesic itself
            d_child = d + c.gap
            if d_child <= radius:
                stack.append((idx, depth + 1, c, d_child))
    return StrataTree(nodes=nodes, radius=radius,
                      r_achieved=min_gap_halfwidth(nodes))


def min_gap_halfwidth(nodes):
    gaps = [n.gap for n in nodes[1:] if n.depth >= 2]
    return min(gaps) / 2.0 if gaps else math.inf


# -- leaf-count bound -------------------------------------------------


@dataclass(frozen=True)
class LeafRow:
    d: float
    leaves_at_d: int
    bound: float


@dataclass
class LeafTable:
    rows: list

    def violations(self):
        return [r for r in self.rows if r.leaves_at_d > r.bound]

    def to_csv(self):
        lines = ["d,leaves_at_d,bound"]
        for r in self.rows:
            lines.append(f"{r.d!r},{r.leaves_at_d},{r.bound!r}")
        return "\n".join(lines) + "\n"


def _finite_chart(endpoints_list, shifts=(2.718281828, 4.6692016, 7.389056)):
    """Map all real/inf endpoints and the base point through z -> -1/(z-s)
    for a shift s keeping every image finite."""
    for s in shifts:
        ok = True
        for e1, e2 in endpoints_list:
            for e in (e1, e2):
                if e is not None and abs(e - s) < 1e-6:
                    ok = False
        if ok:
            m = MoebiusMap(0.0, -1.0, 1.0, -s)
            z0 = m._apply_hpoint(BASEPOINT)
            conv = []
            for e1, e2 in endpoints_list:
                a = -1.0 / (e1 - s) if e1 is not None else 0.0
                b = -1.0 / (e2 - s) if e2 is not None else 0.0
                conv.append((a, b))
            return complex(z0.z.real, z0.t), conv
    raise RuntimeError("no admissible chart shift")


def leaf_count_check(tree, r):
    """Verify the preimage bound 2^{1 + d/(2r)} at every node.

    A stratum carries a copy of a node's geodesic at comparable distance
    exactly when every geodesic along the stratum's chain separates the
    base point from the target; the count of such strata is the leaf
    multiplicity and must respect the bound.
    """
    nodes = tree.nodes
    n = len(nodes)
    if n == 1:
        return LeafTable(rows=[LeafRow(d=0.0, leaves_at_d=1, bound=2.0)])
    z0, ends = _finite_chart([nd.proj for nd in nodes[1:]])
    centers = np.array([(a + b) / 2.0 for a, b in ends])
    radii = np.array([abs(a - b) / 2.0 for a, b in ends])
    e1 = np.array([a for a, _ in ends])
    e2 = np.array([b for _, b in ends])

    # sep[m] over targets: does node m's entry geodesic separate the base
    # point from each target geodesic
    z_in = np.abs(z0 - centers) < radii
    counts = np.ones(n - 1, dtype=np.int64)  # the base stratum always counts
    chain_ok = [None] * n
    chain_ok[0] = np.ones(n - 1, dtype=bool)
    for m in range(1, n):
        nd = nodes[m]
        c, rad = centers[m - 1], radii[m - 1]
        in1 = (e1 - c) ** 2 < rad * rad
        in2 = (e2 - c) ** 2 < rad * rad
        if z_in[m - 1]:
            sep = ~in1 & ~in2
        else:
            sep = in1 & in2
        sep[m - 1] = False  # a geodesic does not separate from itself
        ok = chain_ok[nd.parent] & sep
        chain_ok[m] = ok
        counts += ok

    rows = [LeafRow(d=0.0, leaves_at_d=1, bound=2.0)]
    order = sorted(range(1, n), key=lambda m: nodes[m].d)
    for m in order:
        d = nodes[m].d
        bound = 2.0 ** (1.0 + d / (2.0 * r))
        row = LeafRow(d=d, leaves_at_d=int(counts[m - 1]), bound=bound)
        if row.leaves_at_d > row.bound:
            raise BoundViolation(
                f"node at distance {d}: {row.leaves_at_d} leaves exceed "
                f"bound {bound}")
        rows.append(row)
    return LeafTable(rows=rows)


# -- quasi-geodesic constants -----------------------------------------


@dataclass(frozen=True)
class BendPath:
    """Piecewise geodesic: segment lengths joined at given bend angles."""

    lengths: tuple
    angles: tuple  # interior angles at the bends, len(lengths) - 1 of them

    def __post_init__(self):
        if not self.lengths or any(l <= 0 for l in self.lengths):
            raise UnrealizablePath("segment lengths must be positive")
        if len(self.angles) != len(self.lengths) - 1:
            raise UnrealizablePath("need one angle per interior bend")
        for a in self.angles:
            if not (math.pi / 2.0 - 1e-12 <= a <= math.pi + 1e-12):
                raise UnrealizablePath("bend angles must lie in [pi/2, pi]")

    @property
    def total_length(self):
        return float(sum(self.lengths))


def _rotation_about_i(angle):
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    return MoebiusMap(c, s, -s, c)


def realize_bend_path(path):
    """Isometry carrying the base point to the path's far endpoint."""
    m = MoebiusMap.identity()
    for i, length in enumerate(path.lengths):
        if i > 0:
            m = m @ _rotation_about_i(math.pi - path.angles[i - 1])
        m = m @ MoebiusMap.vertical_translation(length)
    return m


def endpoint_distance(path):
    m = realize_bend_path(path)
    return hdist(BASEPOINT, m._apply_hpoint(BASEPOINT))


@dataclass(frozen=True)
class QiFit:
    epsilon_hat: float
    c_hat: float
    n_samples: int
    max_ratio: float
    min_ratio: float

    def satisfied(self, d_path, d_space):
        return d_path / (1.0 + self.epsilon_hat) - self.c_hat <= d_space + 1e-9


def sample_bend_paths(r, n_paths=200, max_bends=5, seed=0):
    """Worst-case-regime sample: legs uniform in [2r, 4r], right-angle
    bends, up to `max_bends` bends per path."""
    rng = random.Random(seed)
    paths = []
    for _ in range(n_paths):
        k = rng.randint(0, max_bends)
        lengths = tuple(rng.uniform(2.0 * r, 4.0 * r) for _ in range(k + 1))
        angles = (math.pi / 2.0,) * k
        paths.append(BendPath(lengths=lengths, angles=angles))
    return paths


def qi_constants(rep, paths):
    """Empirical quasi-geodesic constants over realized bend paths.

    With the additive constant pinned to zero, the multiplicative
    constant is the worst ratio of path length to endpoint distance; the
    defining inequality is re-verified on every sample.
    """
    if not paths:
        raise ValueError("need at least one path")
    ratios = []
    samples = []
    for p in paths:
        d_space = endpoint_distance(p)
        d_path = p.total_length
        if d_space <= 0:
            raise UnrealizablePath("path endpoints coincide")
        ratios.append(d_path / d_space)
        samples.append((d_path, d_space))
    eps = max(max(ratios) - 1.0, 0.0)
    fit = QiFit(epsilon_hat=eps, c_hat=0.0, n_samples=len(paths),
                max_ratio=max(ratios), min_ratio=min(ratios))
    for d_path, d_space in samples:
        if not fit.satisfied(d_path, d_space):
            raise BoundViolation("fitted constants fail on a sample path")
    return fit


@dataclass(frozen=True)
class DimBoundReport:
    dim_value: float
    epsilon_hat: float
    entropy: float
    bound: float
    tol: float
    passed: bool


def dim_bound_check(dim, fit, r, tol=0.1):
    """Check dim <= (1 + eps_hat) * (1 + ln2/(2r)) + tol."""
    ent = entropy_bound(r)
    bound = (1.0 + fit.epsilon_hat) * ent
    return DimBoundReport(dim_value=dim.value, epsilon_hat=fit.epsilon_hat,
                          entropy=ent, bound=bound, tol=tol,
                          passed=dim.value <= bound + tol)
