"""Cone types, geodesic acceptors and the regular languages built on them.

The pipeline: cone types give the geodesic acceptor for Lambda; word
difference machines give the multipliers M_c; together they give the sets
P_i(c), the relations R, R_c, R'_c, the inner-product languages

    L_n = {(x, y) in Lambda^2 : <x, y> = n},   <x, y> = |x| + |y| - |xy|,

and finally the language of minimal-length coset representatives.

Layouts: Lambda and P_i(c) are one-tape.  M_c is synchronous.  L_n reads x on
tape 1 and then y on tape 2.  R, R_c and R'_c use the phase layout described
in :func:`build_R`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import automata as am
from .automata import IDLE, PAD, Automaton
from .cayley import Ball
from .words import Group, SubgroupSpec


class ConeTypeError(ValueError):
    """The ball is too small for the signature radius, or successors clash."""


class WordDifferenceBoundError(ValueError):
    """Accepted pairs need word differences beyond the bound."""


# -- cone types ------------------------------------------------------------

@dataclass
class ConeTypeTable:
    group: Group
    k: int
    radius: int
    class_of: dict            # element -> class id, over B(radius - k)
    representatives: list     # class id -> shortlex-least member
    successor: dict           # (class, symbol) -> class, or None if not a geodesic step
    counts_by_radius: list    # number of classes met within B(r)

    @property
    def num_classes(self) -> int:
        return len(self.representatives)

    def signature_domain(self) -> int:
        return self.radius - self.k


def _signatures(b: Ball, k: int) -> tuple[int, np.ndarray]:
    R = b.radius
    dom = sum(1 for L in b.length if L <= R - k)
    m = sum(1 for L in b.length if L <= k)
    adj = np.asarray(b.adj, dtype=np.int64)
    lengths = np.asarray(b.length, dtype=np.int64)
    pos = np.empty((dom, m), dtype=np.int64)
    pos[:, 0] = np.arange(dom)
    for y in range(1, m):
        p, j = b.parents[y][0]
        pos[:, y] = adj[pos[:, p], j]
    return dom, (lengths[pos] - lengths[:dom, None]) == lengths[None, :m]


def compute_cone_types(b: Ball, k: int) -> ConeTypeTable:
    """Partition B(R - k) by the truncated cone {y : |y| <= k, |xy| = |x| + |y|}.

    Successors are checked on B(R - k - 1), so a k too small to determine
    cone types shows up as an inconsistent successor.
    """
    R = b.radius
    if k < 1 or k > R - 2:
        raise ConeTypeError(f"need 1 <= k <= R - 2 (k={k}, R={R})")
    dom, sig = _signatures(b, k)
    _, first, inverse = np.unique(sig, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    # number classes by first occurrence in shortlex order
    order = np.argsort(first, kind="stable")
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    cls = relabel[inverse]
    reps = [b.elements[int(first[c])] for c in order]

    syms = b.group.alphabet.symbols
    inner_dom = sum(1 for L in b.length if L <= R - k - 1)
    seen_inner = set(int(c) for c in cls[:inner_dom])
    missing = set(range(len(reps))) - seen_inner
    if missing:
        raise ConeTypeError(f"classes {sorted(missing)} only occur on the boundary; enlarge R")
    successor: dict = {}
    for j, s in enumerate(syms):
        for x in range(inner_dom):
            y = b.adj[x][j]
            c = int(cls[x])
            nxt = int(cls[y]) if b.length[y] == b.length[x] + 1 else None
            prev = successor.setdefault((c, s), nxt)
            if prev != nxt:
                raise ConeTypeError(f"successor of class {c} on {s!r} is not well defined; increase k")
    counts, seen, level = [], set(), 0
    for x in range(dom):
        while b.length[x] > level:
            counts.append(len(seen))
            level += 1
        seen.add(int(cls[x]))
    counts.append(len(seen))
    class_of = {b.elements[x]: int(cls[x]) for x in range(dom)}
    return ConeTypeTable(b.group, k, R, class_of, reps, successor, counts)


def geodesic_acceptor(t: ConeTypeTable) -> Automaton:
    """One accepting state per cone type; accepts exactly the geodesic words."""
    syms = t.group.alphabet.symbols
    table = []
    for c in range(t.num_classes):
        row = {}
        for s in syms:
            nxt = t.successor.get((c, s))
            if nxt is not None:
                row[(s,)] = nxt
        table.append(row)
    A = am.from_dfa(t.group.alphabet, 1, t.num_classes, t.class_of[""], range(t.num_classes), table)
    return am.canonical(A)


def acceptor_discrepancy(A: Automaton, b: Ball, maxlen: int) -> Optional[str]:
    """First word of length <= maxlen on which A disagrees with geodesicity, or None.

    Walks A and the ball together: A must allow a letter exactly when it
    lengthens the element.
    """
    syms = b.group.alphabet.symbols
    if maxlen >= b.radius:
        raise ValueError("maxlen must be below the ball radius")
    (s0,) = A.start
    seen = {(s0, 0)}
    frontier = [(s0, 0, "")]
    for _ in range(maxlen):
        nxt = []
        for s, g, w in frontier:
            for j, c in enumerate(syms):
                h = b.adj[g][j]
                geo = b.length[h] == b.length[g] + 1
                t = A.delta[s].get((c,))
                if geo != (t is not None and t[0] in A.accept):
                    return w + c
                if geo and (t[0], h) not in seen:
                    seen.add((t[0], h))
                    nxt.append((t[0], h, w + c))
        frontier = nxt
    return None


# -- word differences ----------------------------------------------------

@dataclass
class WordDifferenceMachine:
    automaton: Automaton
    bound: int
    multiplier: str
    differences: frozenset


def _tape_steps(lam: Automaton, s):
    if s is None:
        return [(PAD, None)]
    out = [(col[0], ts[0]) for col, ts in lam.delta[s].items()]
    if s in lam.accept:
        out.append((PAD, None))
    return out


def _wd_raw(group: Group, D: int, x: str, lam: Automaton, nf_cache: dict):
    xbar = group.normal_form(x)
    inv = group.alphabet.inv
    (s0,) = lam.start

    def nf(w):
        r = nf_cache.get(w)
        if r is None:
            r = nf_cache[w] = group.normal_form(w)
        return r

    def expand(key):
        d, sa, sb = key
        for p, sa2 in _tape_steps(lam, sa):
            for q, sb2 in _tape_steps(lam, sb):
                if p == PAD and q == PAD:
                    continue
                d2 = nf(("" if p == PAD else inv(p)) + d + ("" if q == PAD else q))
                if len(d2) <= D:
                    yield (p, q), (d2, sa2, sb2)

    def acc(key):
        d, sa, sb = key
        return d == xbar and (sa is None or sa in lam.accept) and (sb is None or sb in lam.accept)

    keys: list = []
    A = am.build(group.alphabet, 2, [("", s0, s0)], expand, acc, keys_out=keys)
    live = am.reachable(A) & am.coreachable(A)
    return A, frozenset(keys[i][0] for i in live)


def build_word_difference_machine(group: Group, D: int, x: str, lam: Automaton,
                                  check_stable: bool = True) -> WordDifferenceMachine:
    """Synchronous automaton for {(u, v) in Lambda^2 : u x = v}.

    States carry the difference u_t^-1 v_t of the prefixes read so far.  With
    ``check_stable`` the live differences at bound D must equal those at D+2
    (a single column changes a difference by at most 2).
    """
    if D < 0:
        raise ValueError("difference bound must be nonnegative")
    cache: dict = {}
    A, diffs = _wd_raw(group, D, x, lam, cache)
    if check_stable:
        _, wider = _wd_raw(group, D + 2, x, lam, cache)
        if wider != diffs:
            extra = sorted(wider - diffs, key=group.alphabet.shortlex_key)
            raise WordDifferenceBoundError(f"bound {D} too small for multiplier {x!r}: needs {extra[:3]}")
    return WordDifferenceMachine(am.minimize(A), D, group.normal_form(x), diffs)


# -- the R relations -------------------------------------------------------

def _r_raw(lam: Automaton, only: Optional[str] = None) -> Automaton:
    """Phases X (x and z advance), Y (y and z advance), W (y and w advance).

    Columns: X reads (u, IDLE, u, IDLE), Y reads (PAD, u, u, IDLE) and W reads
    (PAD, u, PAD, u).  W starts on the first letter that leaves Lambda, so i
    is maximal.  With ``only`` set, that first letter must be ``only`` and w
    must be nonempty.
    """
    syms = lam.alphabet.symbols
    (s0,) = lam.start

    def expand(key):
        phase, s = key
        if phase == "W":
            for u in syms:
                yield (PAD, u, PAD, u), ("W", None)
            return
        row = lam.delta[s]
        for u in syms:
            t = row.get((u,))
            if t is not None:
                if phase == "X":
                    yield (u, IDLE, u, IDLE), ("X", t[0])
                yield (PAD, u, u, IDLE), ("Y", t[0])
            elif only is None or u == only:
                yield (PAD, u, PAD, u), ("W", None)

    acc = (lambda k: k[0] == "W") if only is not None else (lambda k: True)
    return am.build(lam.alphabet, 4, [("X", s0)], expand, acc)


def build_R(lam: Automaton) -> Automaton:
    """(x, y, z, w): y = y_1..y_n, z = x y_1..y_i with i maximal such that
    z is geodesic, w = y_{i+1}..y_n."""
    return am.minimize(am.restrict(_r_raw(lam), lam, [1]))


def build_R_c(lam: Automaton, c: str) -> Automaton:
    """R restricted to quadruples whose w starts with c."""
    return am.minimize(am.restrict(_r_raw(lam, c), lam, [1]))


def build_R_prime_c(lam: Automaton, c: str, mult: Automaton) -> Automaton:
    """Six tapes (x, y, z, w, z', w'): (x, y, z, w) in R_c, z' geodesic for zc,
    w' = w minus its first letter.

    z' runs synchronously with z through ``mult``; its possible extra letter
    sits in the first W column, where w' is still idle.
    """
    base = am.minimize(am.restrict(_r_raw(lam, c), lam, [1]))
    (m0,) = mult.start
    (r0,) = base.start
    opts = tuple(lam.alphabet.symbols) + (PAD,)

    def expand(key):
        r, m, in_w = key
        for col, ts in base.delta[r].items():
            t = ts[0]
            z, w = col[2], col[3]
            if z != PAD:
                for e in opts:
                    nm = mult.delta[m].get((z, e))
                    if nm is not None:
                        yield col + (e, IDLE), (t, nm[0], False)
            elif not in_w:
                yield col + (PAD, IDLE), (t, m, True)
                for e in lam.alphabet.symbols:
                    nm = mult.delta[m].get((PAD, e))
                    if nm is not None:
                        yield col + (e, IDLE), (t, nm[0], True)
            else:
                yield col + (PAD, w), (t, m, True)

    return am.build(lam.alphabet, 6, [(r0, m0, False)], expand,
                    lambda k: k[2] and k[0] in base.accept and k[1] in mult.accept)


def m_prime(lam: Automaton) -> Automaton:
    """Each arrow c becomes two arrows, (c, IDLE) and (PAD, c)."""
    delta = []
    for row in lam.delta:
        new: dict = {}
        for (c,), ts in row.items():
            new[(c, IDLE)] = ts
            new[(PAD, c)] = ts
        delta.append(new)
    return Automaton(lam.alphabet, 2, lam.n, lam.start, lam.accept, delta)


# -- the pipeline ------------------------------------------------------------

@dataclass
class PSets:
    c: str
    p0: Automaton
    p1: Automaton
    p2: Automaton

    def __getitem__(self, i):
        return (self.p0, self.p1, self.p2)[i]


@dataclass
class SLanguage:
    automaton: Automaton
    C1: int
    union_form: Optional[Automaton] = None
    union_form_agrees: Optional[bool] = None


@dataclass
class ConeLanguages:
    """Lazily built, cached languages over one cone-type table."""

    table: ConeTypeTable
    D: int
    check_stable: bool = True
    lam: Automaton = field(init=False)
    _mult: dict = field(default_factory=dict, init=False, repr=False)
    _P: dict = field(default_factory=dict, init=False, repr=False)
    _Rp: dict = field(default_factory=dict, init=False, repr=False)
    _L: dict = field(default_factory=dict, init=False, repr=False)
    _Lle: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self.lam = geodesic_acceptor(self.table)

    @property
    def group(self) -> Group:
        return self.table.group

    @property
    def symbols(self):
        return self.group.alphabet.symbols

    def multiplier(self, x: str) -> WordDifferenceMachine:
        if x not in self._mult:
            self._mult[x] = build_word_difference_machine(self.group, self.D, x, self.lam, self.check_stable)
        return self._mult[x]

    def P(self, c: str) -> PSets:
        """P_i(c) = {x in Lambda : <x, c> = i}."""
        if c not in self._P:
            lam = self.lam
            grow = {s for s in range(lam.n) if (c,) in lam.delta[s]}
            p0 = am.minimize(Automaton(lam.alphabet, 1, lam.n, lam.start, grow, lam.delta))
            ci = self.group.alphabet.inv(c)
            cgrow = {s for s in range(lam.n) if (ci,) in lam.delta[s]}
            p0_inv = Automaton(lam.alphabet, 1, lam.n, lam.start, cgrow, lam.delta)
            # x in P_2(c) iff a geodesic y for xc extends by c^-1
            p2 = am.minimize(am.project(am.restrict(self.multiplier(c).automaton, p0_inv, [1]), [0]))
            p1 = am.minimize(am.difference(lam, am.union(p0, p2)))
            self._P[c] = PSets(c, p0, p1, p2)
        return self._P[c]

    def R(self) -> Automaton:
        return build_R(self.lam)

    def R_c(self, c: str) -> Automaton:
        return build_R_c(self.lam, c)

    def R_prime(self, c: str) -> Automaton:
        if c not in self._Rp:
            self._Rp[c] = build_R_prime_c(self.lam, c, self.multiplier(c).automaton)
        return self._Rp[c]

    def pairs(self) -> Automaton:
        """Lambda x Lambda in the sequential layout."""
        return am.concat_tapes(self.lam, self.lam)

    def L(self, n: int) -> Automaton:
        if n < 0:
            raise ValueError("n must be nonnegative")
        if n not in self._L:
            if n == 0:
                out = am.minimize(am.intersect(m_prime(self.lam), self.pairs()))
            else:
                parts = []
                for c in self.symbols:
                    P = self.P(c)
                    for i in (1, 2):
                        if n - i < 0 or am.is_empty(P[i]):
                            continue
                        prev = self.L(n - i)
                        if am.is_empty(prev):
                            continue
                        X = am.restrict(self.R_prime(c), P[i], [2])
                        X = am.restrict(X, prev, [4, 5])
                        parts.append(am.minimize(am.project(X, [0, 1])))
                out = am.minimize(am.union(*parts)) if parts else am.empty(self.group.alphabet, 2)
            self._L[n] = out
        return self._L[n]

    def L_at_most(self, n: int) -> Automaton:
        if n not in self._Lle:
            self._Lle[n] = self.L(0) if n == 0 else am.minimize(am.union(self.L_at_most(n - 1), self.L(n)))
        return self._Lle[n]

    def subgroup_geodesics(self, h: SubgroupSpec, K: int,
                           member: Optional[Callable[[str], bool]] = None) -> Automaton:
        """Geodesic words of G that evaluate into H.

        A prefix u of such a word lies within K of H, so the state records the
        shortlex-least p in B(K) with u p^-1 in H.
        """
        group = self.group
        if member is None:
            if h.whole:
                member = lambda g: True  # noqa: E731
            elif h.trivial:
                member = lambda g: g == ""  # noqa: E731
            elif h.membership is not None:
                member = h.membership
            else:
                raise ValueError("subgroup needs a membership test")
        if h.whole:
            K = 0
        alph = group.alphabet
        pts = sorted({group.normal_form(w) for w in alph.all_words(K)}, key=alph.shortlex_key)
        pts = [p for p in pts if len(p) <= K]
        lam = self.lam
        (s0,) = lam.start
        step_cache: dict = {}

        def step(p, c):
            key = (p, c)
            if key not in step_cache:
                q = p + c
                step_cache[key] = next((r for r in pts if member(group.normal_form(q + alph.invert(r)))), None)
            return step_cache[key]

        def expand(key):
            s, p = key
            for (c,), ts in lam.delta[s].items():
                p2 = step(p, c)
                if p2 is not None:
                    yield (c,), (ts[0], p2)

        A = am.build(alph, 1, [(s0, "")], expand, lambda k: k[0] in lam.accept and k[1] == "")
        return am.minimize(A)

    def _violators(self, lam_h: Automaton, bound: int) -> Automaton:
        """Pairs (x, y) in Lambda x L(lam_h) with <x, y> > bound."""
        pairs = am.concat_tapes(self.lam, lam_h)
        return am.difference(pairs, self.L_at_most(bound))

    def S_language(self, lam_h: Automaton, C1: int, diagnostic: bool = False) -> SLanguage:
        """{x in Lambda : <x, y> <= min(|y|, C1) for every y in L(lam_h)}."""
        if C1 < 0:
            raise ValueError("C1 must be nonnegative")
        alph = self.group.alphabet
        bad = [self._violators(lam_h, C1)]
        for m in range(C1 + 1):
            ym = am.intersect(lam_h, _exact_length(alph, m))
            if not am.is_empty(ym):
                bad.append(self._violators(ym, m))
        bad_x = am.project(am.union(*bad), [0])
        S = am.minimize(am.difference(self.lam, bad_x))
        out = SLanguage(S, C1)
        if diagnostic:
            out.union_form = self._union_form(lam_h, C1)
            out.union_form_agrees = am.equivalent(out.union_form, S)
        return out

    def _union_form(self, lam_h: Automaton, C1: int) -> Automaton:
        """The union-over-r expression, evaluated literally."""
        alph = self.group.alphabet
        lam = self.lam
        first = am.difference(lam, am.project(self._violators(lam_h, C1), [0]))
        union_parts = []
        for r in range(C1 + 1):
            yr = am.intersect(lam_h, _length_at_most(alph, r))
            union_parts.append(am.difference(lam, am.project(self._violators(yr, r), [0])))
        return am.minimize(am.intersect(first, am.union(*union_parts)))


def _exact_length(alph, m: int) -> Automaton:
    table = [{(s,): i + 1 for s in alph.symbols} for i in range(m)] + [{}]
    return am.from_dfa(alph, 1, m + 1, 0, [m], table)


def _length_at_most(alph, m: int) -> Automaton:
    table = [{(s,): i + 1 for s in alph.symbols} for i in range(m)] + [{}]
    return am.from_dfa(alph, 1, m + 1, 0, range(m + 1), table)
