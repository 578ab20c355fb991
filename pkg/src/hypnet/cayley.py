"""Exact Cayley-ball geometry.

All metric quantities are integers; Gromov products and hyperbolicity
constants are carried as doubled integers so half-integers stay exact.
"""
from __future__ import annotations

import itertools
import json
import os
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .words import Group, SubgroupSpec

DEFAULT_ELEMENT_CAP = int(os.environ.get("HYPNET_MAX_ELEMENTS", "2000000"))


class OutOfBall(ValueError):
    pass


class Ball:
    """The Cayley ball B(R): elements in shortlex order with lengths and edges.

    ``adj[i][j]`` is the index of ``elements[i] * alphabet[j]`` or -1 when that
    product lies outside the ball; ``parents[i]`` lists ``(p, j)`` with
    ``elements[p] * alphabet[j] == elements[i]`` one level down.
    """

    def __init__(self, group: Group, radius: int, elements, adj, parents):
        self.group = group
        self.radius = radius
        self.elements: list[str] = elements
        self.index = {g: i for i, g in enumerate(elements)}
        self.length = [len(g) for g in elements]
        self.adj: list[list[int]] = adj
        self.parents: list[list[tuple[int, int]]] = parents

    def __len__(self):
        return len(self.elements)

    def __contains__(self, word):
        return self.group.normal_form(word) in self.index

    def sphere(self, n: int) -> list[int]:
        return [i for i, L in enumerate(self.length) if L == n]

    def sphere_sizes(self) -> list[int]:
        out = [0] * (self.radius + 1)
        for L in self.length:
            out[L] += 1
        return out

    def lookup(self, word: str) -> int:
        nf = self.group.normal_form(word)
        try:
            return self.index[nf]
        except KeyError:
            raise OutOfBall(f"{nf!r} lies outside B({self.radius})") from None

    def to_json(self) -> str:
        syms = self.group.alphabet.symbols
        edges = [[i, syms[j], k] for i, row in enumerate(self.adj) for j, k in enumerate(row) if k >= 0]
        return json.dumps({"family": self.group.spec, "radius": self.radius, "elements": self.elements,
                           "length": self.length, "edges": edges}, separators=(",", ":"))


def build_ball(group: Group, R: int, max_elements: Optional[int] = None) -> Ball:
    """Level-by-level BFS from the identity; exact word lengths inside B(R)."""
    if R < 0:
        raise ValueError("radius must be nonnegative")
    cap = max_elements or DEFAULT_ELEMENT_CAP
    syms = group.alphabet.symbols
    elements, index = [""], {"": 0}
    parents: list[list[tuple[int, int]]] = [[]]
    adj: list[list[int]] = []
    start = 0
    for n in range(R + 1):
        end = len(elements)
        for i in range(start, end):
            g = elements[i]
            row = []
            for j, s in enumerate(syms):
                h = group.right_mul(g, s)
                k = index.get(h, -1)
                if k < 0 and len(h) == n + 1 and n < R:
                    k = len(elements)
                    index[h] = k
                    elements.append(h)
                    parents.append([])
                    if k >= cap:
                        raise MemoryError(f"ball exceeds element cap {cap}")
                if k >= 0 and len(h) == n + 1:
                    parents[k].append((i, j))
                row.append(k)
            adj.append(row)
        start = end
    return Ball(group, R, elements, adj, parents)


def distance(b: Ball, x: str, y: str) -> int:
    """Word-metric distance |x^-1 y|, required to fall inside the ball."""
    g = b.group
    return b.length[b.lookup(g.alphabet.invert(x) + y)]


def gromov_product2(b: Ball, p: str, q: str, base: str) -> int:
    """Twice the Gromov product (p.q)_base."""
    return distance(b, p, base) + distance(b, q, base) - distance(b, p, q)


def gromov_product(b: Ball, p: str, q: str, base: str) -> Fraction:
    return Fraction(gromov_product2(b, p, q, base), 2)


def inner(group: Group, g: str, h: str) -> int:
    """<g, h> = |g| + |h| - |gh| = 2 (g^-1 . h)_1."""
    return group.length(g) + group.length(h) - group.length(g + h)


def enumerate_geodesics(b: Ball, x: str, y: str, cap: int = 100_000) -> list[str]:
    """All geodesic words from x to y, i.e. all geodesic words for x^-1 y."""
    e = b.lookup(b.group.alphabet.invert(x) + y)
    syms = b.group.alphabet.symbols
    out: list[str] = []
    stack = [(e, "")]
    while stack:
        i, suffix = stack.pop()
        if i == 0:
            out.append(suffix)
            if len(out) > cap:
                raise OverflowError(f"more than {cap} geodesics")
            continue
        for p, j in b.parents[i]:
            stack.append((p, syms[j] + suffix))
    out.sort(key=b.group.alphabet.shortlex_key)
    return out


@dataclass(frozen=True)
class HyperbolicityProfile:
    delta_thin2: int
    delta_four_point2: int
    sample_size: int
    exhaustive: bool
    radius: int

    @property
    def delta_thin(self) -> Fraction:
        return Fraction(self.delta_thin2, 2)

    @property
    def delta_four_point(self) -> Fraction:
        return Fraction(self.delta_four_point2, 2)

    @property
    def delta2(self) -> int:
        return max(self.delta_thin2, self.delta_four_point2)


def _distance_matrix(group: Group, pts: list[str]) -> np.ndarray:
    inv = group.alphabet.invert
    n = len(pts)
    D = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        pi = inv(pts[i])
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = group.length(pi + pts[j])
    return D


def four_point_delta2(group: Group, pts: list[str]) -> int:
    """max over p, q, r of min{(p.r)_1, (q.r)_1} - (p.q)_1, doubled.

    The base point is fixed at the identity; by left-invariance this covers
    every quadruple whose translate lies in ``pts``.
    """
    lengths = np.array([len(p) for p in pts], dtype=np.int64)
    D = _distance_matrix(group, pts)
    G = lengths[:, None] + lengths[None, :] - D
    best = 0
    for r in range(len(pts)):
        col = G[:, r]
        m = np.minimum(col[:, None], col[None, :]) - G
        best = max(best, int(m.max()))
    return best


def _triangle_thin2(b: Ball, q: str, r: str, cache: dict) -> int:
    """Least eps (doubled) with every side of (1, q, r) in the eps-neighbourhood
    of the other two, over all geodesic choices for each side."""
    group = b.group

    def side(u, v):
        key = (u, v)
        if key not in cache:
            paths = []
            for w in enumerate_geodesics(b, u, v):
                paths.append([group.normal_form(u + w[:k]) for k in range(len(w) + 1)])
            cache[key] = paths
        return cache[key]

    def dist_to_path(p, path):
        return min(group.distance(p, x) for x in path)

    verts = ("", q, r)
    worst = 0
    for a, c, m in ((0, 2, 1), (0, 1, 2), (1, 2, 0)):
        target = side(verts[a], verts[c])
        s1, s2 = side(verts[a], verts[m]), side(verts[m], verts[c])
        for path in target:
            for p in path:
                d1 = max(dist_to_path(p, P) for P in s1)
                d2 = max(dist_to_path(p, P) for P in s2)
                worst = max(worst, min(d1, d2))
    return 2 * worst


def estimate_delta(b: Ball, mode="exhaustive", seed: int = 0) -> HyperbolicityProfile:
    """Lower bounds for delta from both hyperbolicity conditions.

    ``mode`` is ``"exhaustive"`` or an integer sample count.
    """
    if b.radius < 2:
        raise ValueError("ball radius must be at least 2")
    group = b.group
    half = [g for g in b.elements if len(g) <= b.radius // 2]
    # groups with a lazily grown normal-form table only get distances up to R
    pts = half if getattr(group, "lazy_table", False) else b.elements
    cache: dict = {}
    if mode == "exhaustive":
        four = four_point_delta2(group, pts)
        thin = max(_triangle_thin2(b, q, r, cache) for q in half for r in half)
        return HyperbolicityProfile(thin, four, len(b.elements), True, b.radius)
    n = int(mode)
    rng = random.Random(seed)
    els = pts
    four = 0
    for _ in range(n):
        p, q, r, x = (rng.choice(els) for _ in range(4))
        d = group.distance
        px, qx, rx = d(p, x), d(q, x), d(r, x)
        pq, pr, qr = px + qx - d(p, q), px + rx - d(p, r), qx + rx - d(q, r)
        four = max(four, min(pr, qr) - pq)
    thin = 0
    for _ in range(max(1, n // 10)):
        thin = max(thin, _triangle_thin2(b, rng.choice(half), rng.choice(half), cache))
    return HyperbolicityProfile(thin, four, n, False, b.radius)


@dataclass(frozen=True)
class SubgroupBall:
    elements: frozenset
    exact: bool
    radius: int

    def __contains__(self, g):
        return g in self.elements

    def __len__(self):
        return len(self.elements)

    def sorted(self, group: Group) -> list[str]:
        return sorted(self.elements, key=group.alphabet.shortlex_key)


def _subgroup_orbit(group: Group, h: SubgroupSpec, R: int, bound: int) -> set[str]:
    seen = {""}
    queue = deque([""])
    while queue:
        g = queue.popleft()
        for s in h.generators:
            x = group.multiply(g, s)
            if x not in seen and len(x) <= bound:
                seen.add(x)
                queue.append(x)
    return {g for g in seen if len(g) <= R}


def subgroup_elements(group: Group, h: SubgroupSpec, R: int, enlargement: int = 3,
                      ball: Optional[Ball] = None) -> SubgroupBall:
    """H intersected with B(R).

    Uses the exact membership predicate when one exists; otherwise walks the
    subgroup's Cayley graph through elements of length <= enlargement*R and
    certifies exactness when one more unit of enlargement adds nothing.
    """
    if h.membership is not None:
        if ball is not None and ball.radius >= R:
            els = [g for g in ball.elements if len(g) <= R and h.membership(g)]
        else:
            els = _subgroup_orbit_exact(group, h, R)
        return SubgroupBall(frozenset(els), True, R)
    if getattr(group, "lazy_table", False):
        # walking far outside the ball would grow the normal-form table
        a = _subgroup_orbit(group, h, R, R)
        b = _subgroup_orbit(group, h, R, R + 1)
    else:
        a = _subgroup_orbit(group, h, R, enlargement * R)
        b = _subgroup_orbit(group, h, R, (enlargement + 1) * R)
    return SubgroupBall(frozenset(b), a == b, R)


def _subgroup_orbit_exact(group: Group, h: SubgroupSpec, R: int) -> list[str]:
    # exact predicate available: filter the ball directly
    ball = build_ball(group, R)
    return [g for g in ball.elements if h.membership(g)]


def subgroup_ball(b: Ball, h: SubgroupSpec, enlargement: int = 3) -> SubgroupBall:
    return subgroup_elements(b.group, h, b.radius, enlargement, ball=b)


@dataclass(frozen=True)
class QuasiconvexityEstimate:
    K: int
    stable_radius: int
    per_radius: tuple


def estimate_quasiconvexity(b: Ball, h_ball: SubgroupBall) -> QuasiconvexityEstimate:
    """Largest distance from a point on a geodesic [pq], p, q in H, to H.

    p and q range over H within half the ball radius so every geodesic stays
    in the ball; the answer is a lower bound for the true constant.
    """
    if not h_ball.elements:
        raise ValueError("empty subgroup ball")
    group = b.group
    hs = h_ball.sorted(group)
    dist_cache: dict[str, int] = {}

    def dist_to_H(x):
        if x in h_ball.elements:
            return 0
        if x not in dist_cache:
            dist_cache[x] = min(group.distance(x, h) for h in hs)
        return dist_cache[x]

    per = []
    K = 0
    for r in range(0, b.radius // 2 + 1):
        pts = [p for p in hs if len(p) <= r]
        for p, q in itertools.product(pts, pts):
            if max(len(p), len(q)) < r:
                continue
            for w in enumerate_geodesics(b, p, q):
                for k in range(1, len(w)):
                    K = max(K, dist_to_H(group.normal_form(p + w[:k])))
        per.append(K)
    stable = next(r for r, k in enumerate(per) if k == K)
    return QuasiconvexityEstimate(K, stable, tuple(per))


def multi_source_distances(b: Ball, sources) -> list[int]:
    """Graph distance inside the ball from a set of element indices (-1 unreachable)."""
    dist = [-1] * len(b)
    queue = deque()
    for s in sources:
        dist[s] = 0
        queue.append(s)
    inv_adj = b.adj
    while queue:
        i = queue.popleft()
        for k in inv_adj[i]:
            if k >= 0 and dist[k] < 0:
                dist[k] = dist[i] + 1
                queue.append(k)
    return dist


def ray_extension_constant(b: Ball) -> int:
    """Least C with every g in B(R - C) within C of a geodesic from 1 to the
    sphere of radius R (a finite-radius stand-in for geodesic rays)."""
    R = b.radius
    if R < 2:
        raise ValueError("ball radius must be at least 2")
    on = [False] * len(b)
    for i in range(len(b) - 1, -1, -1):
        if b.length[i] == R:
            on[i] = True
        elif not on[i]:
            continue
        for p, _ in b.parents[i]:
            on[p] = True
    dist = multi_source_distances(b, [i for i, f in enumerate(on) if f])
    for C in range(R + 1):
        if all(0 <= dist[i] <= C for i in range(len(b)) if b.length[i] <= R - C):
            return C
    return R
