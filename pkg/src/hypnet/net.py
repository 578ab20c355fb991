"""Minimal-length coset representatives by brute force, sections and net checks.

Cosets are right cosets gH.  Every coset is keyed by its shortlex-least
element: if |gh| <= |g| then |h| <= 2|g|, so

    key(g) = shortlex-min { gh : h in H, |h| <= 2|g| }

is exact, and it is also the chosen section s(gH).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import automata as am
from .automata import Automaton
from .cayley import Ball, _subgroup_orbit, multi_source_distances
from .words import Group, SubgroupSpec


class InsufficientSubgroupBall(ValueError):
    pass


class SubgroupOracle:
    """H intersected with growing balls, plus the coset key."""

    def __init__(self, group: Group, h: SubgroupSpec, enlargement: int = 3):
        self.group = group
        self.h = h
        self.enlargement = enlargement
        self._radius = -1
        self._elements: list[str] = []
        self._keys: dict[str, str] = {}

    def elements(self, n: int) -> list[str]:
        """H intersected with B(n), shortlex sorted; certified by a wider walk."""
        if self.h.trivial:
            return [""]
        if self.h.whole:
            raise ValueError("whole group has no finite enumeration here")
        if n > self._radius:
            if getattr(self.group, "lazy_table", False):
                lo, hi = n, n + 1
            else:
                lo, hi = self.enlargement * max(n, 1), (self.enlargement + 1) * max(n, 1)
            a = _subgroup_orbit(self.group, self.h, n, lo)
            b = _subgroup_orbit(self.group, self.h, n, hi)
            if a != b:
                raise InsufficientSubgroupBall(f"subgroup walk not stable at radius {n}")
            if self.h.membership is not None and not all(self.h.membership(g) for g in b):
                raise InsufficientSubgroupBall("walk left the subgroup")
            self._elements = sorted(b, key=self.group.alphabet.shortlex_key)
            self._radius = n
        return [g for g in self._elements if len(g) <= n]

    def key(self, g: str) -> str:
        """Shortlex-least element of gH (g in normal form)."""
        hit = self._keys.get(g)
        if hit is not None:
            return hit
        if self.h.whole:
            k = ""
        elif self.h.trivial:
            k = g
        else:
            mul = self.group.multiply
            k = min((mul(g, h) for h in self.elements(2 * len(g))), key=self.group.alphabet.shortlex_key)
        self._keys[g] = k
        return k

    def sigma(self, g: str) -> int:
        """min |gh| over h in H."""
        return len(self.key(g))

    def in_S(self, g: str) -> bool:
        return len(g) == self.sigma(g)

    def coset_S(self, g: str) -> list[str]:
        """S intersected with gH, shortlex sorted."""
        k = self.key(g)
        if self.h.whole or self.h.trivial:
            return [k]
        mul = self.group.multiply
        out = {x for x in (mul(k, h) for h in self.elements(2 * len(k))) if len(x) == len(k)}
        return sorted(out, key=self.group.alphabet.shortlex_key)


def sigma(oracle: SubgroupOracle, g: str) -> int:
    return oracle.sigma(oracle.group.normal_form(g))


def compute_S_bruteforce(b: Ball, oracle: SubgroupOracle, radius: Optional[int] = None) -> list[str]:
    """{g in B(radius) : |g| = sigma(g)}, shortlex sorted."""
    r = b.radius if radius is None else radius
    return [g for g in b.elements if len(g) <= r and oracle.in_S(g)]


@dataclass
class CosetTable:
    radius: int
    coset_of: dict      # element -> coset id
    keys: list          # coset id -> shortlex-least element

    def __len__(self):
        return len(self.keys)


def build_coset_table(b: Ball, oracle: SubgroupOracle, radius: Optional[int] = None) -> CosetTable:
    r = b.radius if radius is None else radius
    ids: dict[str, int] = {}
    coset_of = {}
    for g in b.elements:
        if len(g) > r:
            break
        coset_of[g] = ids.setdefault(oracle.key(g), len(ids))
    return CosetTable(r, coset_of, list(ids))


def build_section(ct: CosetTable, oracle: SubgroupOracle, worst: bool = False) -> list[str]:
    """One S-point per coset: shortlex-least, or shortlex-greatest with ``worst``."""
    if not worst:
        return list(ct.keys)
    return [oracle.coset_S(k)[-1] for k in ct.keys]


@dataclass
class Lemma5AReport:
    max_slack: int
    S_diameter: int
    pairs: int
    violation: Optional[tuple] = None


def check_lemma_5A(oracle: SubgroupOracle, ct: CosetTable, C1: int) -> Lemma5AReport:
    """d(x1, x2) - (|x1| + |x2| - 2 sigma) over same-coset pairs in the table."""
    group = oracle.group
    members = defaultdict(list)
    for g, c in ct.coset_of.items():
        members[c].append(g)
    worst, diam, pairs, bad = None, 0, 0, None
    for c, xs in members.items():
        s = len(ct.keys[c])
        for i, x1 in enumerate(xs):
            inv1 = group.alphabet.invert(x1)
            for x2 in xs[i:]:
                d = group.length(inv1 + x2)
                slack = d - (len(x1) + len(x2) - 2 * s)
                pairs += 1
                if worst is None or slack > worst:
                    worst = slack
                if slack > C1 and bad is None:
                    bad = (x1, x2, slack)
                if len(x1) == s and len(x2) == s:
                    diam = max(diam, d)
    return Lemma5AReport(worst if worst is not None else 0, diam, pairs, bad)


def net_defect(b: Ball, s_image, margin: int) -> int:
    """max over g in B(R - margin) of the in-ball distance from g to s_image."""
    if margin < 0 or margin > b.radius:
        raise ValueError("margin out of range")
    sources = [b.index[g] for g in s_image if g in b.index]
    if not sources:
        raise ValueError("section image misses the ball")
    dist = multi_source_distances(b, sources)
    lim = b.radius - margin
    return max(d for d, L in zip(dist, b.length) if L <= lim)


def section_image(b: Ball, oracle: SubgroupOracle, worst: bool = False) -> list[str]:
    """Section points lying in B(R)."""
    if not worst:
        return [g for g in b.elements if oracle.key(g) == g]
    return [g for g in b.elements if oracle.in_S(g) and oracle.coset_S(g)[-1] == g]


def action_displacement(oracle: SubgroupOracle, reps, g: str) -> int:
    """max over cosets xH with x in ``reps`` of d(s(g xH), g s(xH))."""
    group = oracle.group
    g = group.normal_form(g)
    best = 0
    for x in reps:
        gx = group.multiply(g, x)
        best = max(best, group.length(group.alphabet.invert(gx) + oracle.key(gx)))
    return best


@dataclass
class Crosscheck:
    agree: bool
    accepted: int
    brute: int
    witness: Optional[str] = None
    witness_side: Optional[str] = None


def oracle_crosscheck(S_auto: Automaton, brute_S, group: Group, radius: int) -> Crosscheck:
    """Compare evaluated accepted words of length <= radius with brute-force S."""
    words = am.enumerate_language(S_auto, radius)
    acc = {group.normal_form(w) for w in words}
    brute = set(brute_S)
    key = group.alphabet.shortlex_key
    only_auto = sorted(acc - brute, key=key)
    only_brute = sorted(brute - acc, key=key)
    # accepted words must also be geodesic, so count words as well as elements
    not_geodesic = sorted((w for w in words if len(group.normal_form(w)) != len(w)), key=key)
    if not_geodesic:
        return Crosscheck(False, len(acc), len(brute), not_geodesic[0], "automaton")
    if only_auto or only_brute:
        if only_auto and (not only_brute or key(only_auto[0]) <= key(only_brute[0])):
            return Crosscheck(False, len(acc), len(brute), only_auto[0], "automaton")
        return Crosscheck(False, len(acc), len(brute), only_brute[0], "bruteforce")
    return Crosscheck(True, len(acc), len(brute))


@dataclass
class RadiusRow:
    R: int
    coset_count: int
    S_size: int
    defect: int
    lemma5A_max_slack: int


@dataclass
class NetReport:
    group: str
    subgroup: str
    R: int
    delta: str
    K: int
    C1: int
    coset_count: int
    S_size: int
    section_size: int
    net_defect: int
    net_defect_worst_section: int
    margin: int
    certified_region: int
    completion_distance: Optional[int]
    oracle_agreement: Optional[bool]
    lemma5A_max_slack: int
    S_coset_diameter: int
    action_check_max: int
    action_check_bound_ok: bool
    verdict: str
    checks: dict = field(default_factory=dict)
    per_radius: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)
