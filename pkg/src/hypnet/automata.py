"""Finite automata over padded multi-tape alphabets.

A k-tape automaton reads *columns*: k-tuples whose components are base
letters, ``PAD`` ("$", the tape has finished) or ``IDLE`` ("", the tape has
not started yet).  Every tape reads ``IDLE* letters* PAD*`` and no column is
entirely blank.  Decoding a column string strips the blanks from each tape.

Synchronous relations (the usual padded convolution) never use ``IDLE``.
Sequential layouts, where a tape starts only once another has finished, use
``IDLE`` exactly where the construction has an epsilon on that tape.  Boolean
operations act on column languages, so operands must share a layout; the
constructors in :mod:`hypnet.cones` keep every relation in one canonical
layout.
"""
from __future__ import annotations

import json
from collections import deque
from typing import Callable, Iterable, Optional, Sequence

from .words import Alphabet

PAD = "$"
IDLE = ""
BLANK = (PAD, IDLE)

DEFAULT_STATE_CAP = 1_000_000


class StateBudgetExceeded(MemoryError):
    pass


class EnumerationCapExceeded(OverflowError):
    pass


def is_blank(col) -> bool:
    return all(c in BLANK for c in col)


def decode(columns: Iterable[tuple], tapes: int) -> tuple[str, ...]:
    parts = [[] for _ in range(tapes)]
    for col in columns:
        for i, c in enumerate(col):
            if c not in BLANK:
                parts[i].append(c)
    return tuple("".join(p) for p in parts)


def convolution(words: Sequence[str]) -> list[tuple]:
    """Synchronous padded convolution: shorter words padded on the right."""
    n = max((len(w) for w in words), default=0)
    return [tuple(w[t] if t < len(w) else PAD for w in words) for t in range(n)]


def sequential(x: str, y: str) -> list[tuple]:
    """Columns of the sequential layout: x on tape 1, then y on tape 2."""
    return [(c, IDLE) for c in x] + [(PAD, c) for c in y]


class Automaton:
    """A (possibly nondeterministic) automaton; immutable by convention.

    ``delta[s]`` maps a column to a tuple of successor states.
    """

    __slots__ = ("alphabet", "tapes", "n", "start", "accept", "delta", "_colkey")

    def __init__(self, alphabet: Alphabet, tapes: int, n: int, start, accept, delta):
        self.alphabet = alphabet
        self.tapes = tapes
        self.n = n
        self.start = frozenset(start)
        self.accept = frozenset(accept)
        self.delta: list[dict[tuple, tuple[int, ...]]] = delta
        self._colkey = None

    def __repr__(self):
        kind = "DFA" if self.deterministic else "NFA"
        return f"<{kind} tapes={self.tapes} states={self.n} accept={len(self.accept)}>"

    @property
    def deterministic(self) -> bool:
        return len(self.start) == 1 and all(len(t) == 1 for row in self.delta for t in row.values())

    @property
    def num_transitions(self) -> int:
        return sum(len(row) for row in self.delta)

    def col_key(self, col):
        order = self.alphabet.order
        n = len(order)
        return tuple(order[c] if c in order else (n if c == IDLE else n + 1) for c in col)

    def columns(self) -> list[tuple]:
        cols = {c for row in self.delta for c in row}
        return sorted(cols, key=self.col_key)

    # -- running ---------------------------------------------------------
    def run(self, columns: Iterable[tuple]) -> bool:
        cur = set(self.start)
        for col in columns:
            col = tuple(col)
            nxt = set()
            for s in cur:
                nxt.update(self.delta[s].get(col, ()))
            if not nxt:
                return False
            cur = nxt
        return bool(cur & self.accept)

    def accepts(self, *words: str) -> bool:
        """Membership of a word tuple under any alignment the automaton reads."""
        if len(words) != self.tapes:
            raise ValueError(f"expected {self.tapes} words")
        if self.tapes == 1:
            return self.run((c,) for c in words[0])
        k = self.tapes
        init = tuple((0, 0) for _ in range(k))  # (position, phase)
        seen = set()
        queue = deque((s, init) for s in self.start)
        while queue:
            s, pos = queue.popleft()
            if (s, pos) in seen:
                continue
            seen.add((s, pos))
            if s in self.accept and all(p == len(w) for (p, _), w in zip(pos, words)):
                return True
            for col, targets in self.delta[s].items():
                npos = []
                for c, (p, ph), w in zip(col, pos, words):
                    if c == IDLE:
                        if ph != 0:
                            break
                        npos.append((p, 0))
                    elif c == PAD:
                        if p != len(w):
                            break
                        npos.append((p, 2))
                    else:
                        if ph == 2 or p >= len(w) or w[p] != c:
                            break
                        npos.append((p + 1, 1))
                else:
                    npos = tuple(npos)
                    for t in targets:
                        queue.append((t, npos))
        return False

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        trans = []
        for s, row in enumerate(self.delta):
            for col in sorted(row, key=self.col_key):
                for t in row[col]:
                    trans.append([s, list(col), t])
        return {"states": self.n, "start": sorted(self.start), "accept": sorted(self.accept),
                "tapes": self.tapes, "alphabet": list(self.alphabet.symbols),
                "inverse": [self.alphabet.inv(s) for s in self.alphabet.symbols],
                "transitions": trans}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Automaton":
        d = json.loads(text)
        alph = Alphabet(d["alphabet"], dict(zip(d["alphabet"], d["inverse"])))
        delta: list[dict] = [dict() for _ in range(d["states"])]
        for s, col, t in d["transitions"]:
            col = tuple(col)
            delta[s][col] = tuple(sorted(set(delta[s].get(col, ())) | {t}))
        return cls(alph, d["tapes"], d["states"], d["start"], d["accept"], delta)

    def to_dot(self, name: str = "A") -> str:
        lines = [f'digraph "{name}" {{', "  rankdir=LR;", '  __start [shape=point];']
        for s in range(self.n):
            shape = "doublecircle" if s in self.accept else "circle"
            lines.append(f"  {s} [shape={shape}];")
        for s in sorted(self.start):
            lines.append(f"  __start -> {s};")
        for s, row in enumerate(self.delta):
            edges: dict[int, list[str]] = {}
            for col in sorted(row, key=self.col_key):
                label = "(" + ",".join(c if c else "ε" for c in col) + ")" if self.tapes > 1 else col[0]
                for t in row[col]:
                    edges.setdefault(t, []).append(label)
            for t, labels in sorted(edges.items()):
                lines.append(f'  {s} -> {t} [label="{" ".join(labels)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- construction helpers ------------------------------------------------

def from_dfa(alphabet: Alphabet, tapes: int, n: int, start: int, accept, table) -> Automaton:
    """Build from ``table[s] = {col: target}``."""
    delta = [{col: (t,) for col, t in row.items()} for row in table]
    return Automaton(alphabet, tapes, n, [start], accept, delta)


def empty(alphabet: Alphabet, tapes: int = 1) -> Automaton:
    return Automaton(alphabet, tapes, 1, [0], [], [{}])


def word_acceptor(alphabet: Alphabet, words: Iterable[str]) -> Automaton:
    """A 1-tape trie automaton for a finite set of words."""
    table: list[dict] = [{}]
    accept = set()
    for w in words:
        s = 0
        for c in w:
            nxt = table[s].get((c,))
            if nxt is None:
                nxt = len(table)
                table.append({})
                table[s][(c,)] = nxt
            s = nxt
        accept.add(s)
    return from_dfa(alphabet, 1, len(table), 0, accept, table)


def build(alphabet, tapes, init_states, expand, is_accept, cap=DEFAULT_STATE_CAP,
           keys_out: Optional[list] = None) -> Automaton:
    """Generic reachable-state construction.

    ``expand(key)`` yields ``(col, key')`` pairs; keys are hashable.  State i
    has key ``keys_out[i]`` when a list is supplied.
    """
    ids: dict = {}
    keys: list = []
    delta: list[dict] = []

    def get(k):
        i = ids.get(k)
        if i is None:
            i = ids[k] = len(keys)
            if i >= cap:
                raise StateBudgetExceeded(f"more than {cap} states")
            keys.append(k)
            delta.append({})
        return i

    start = [get(k) for k in init_states]
    i = 0
    while i < len(keys):
        k = keys[i]
        row = delta[i]
        for col, k2 in expand(k):
            j = get(k2)
            prev = row.get(col)
            if prev is None:
                row[col] = (j,)
            elif j not in prev:
                row[col] = prev + (j,)
        i += 1
    accept = [i for i, k in enumerate(keys) if is_accept(k)]
    for row in delta:
        for col, t in row.items():
            if len(t) > 1:
                row[col] = tuple(sorted(t))
    if keys_out is not None:
        keys_out[:] = keys
    return Automaton(alphabet, tapes, len(keys), start, accept, delta)


# -- analysis --------------------------------------------------------------

def reachable(A: Automaton) -> set[int]:
    seen = set(A.start)
    stack = list(A.start)
    while stack:
        s = stack.pop()
        for ts in A.delta[s].values():
            for t in ts:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return seen


def coreachable(A: Automaton) -> set[int]:
    rev: list[list[int]] = [[] for _ in range(A.n)]
    for s, row in enumerate(A.delta):
        for ts in row.values():
            for t in ts:
                rev[t].append(s)
    seen = set(A.accept)
    stack = list(A.accept)
    while stack:
        s = stack.pop()
        for p in rev[s]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def is_empty(A: Automaton) -> bool:
    return not (reachable(A) & A.accept)


def trim(A: Automaton) -> Automaton:
    """Drop states that are unreachable or cannot reach acceptance."""
    live = reachable(A) & coreachable(A)
    if not live:
        return empty(A.alphabet, A.tapes)
    order = sorted(live)
    new = {s: i for i, s in enumerate(order)}
    delta = []
    for s in order:
        row = {}
        for col, ts in A.delta[s].items():
            kept = tuple(new[t] for t in ts if t in new)
            if kept:
                row[col] = kept
        delta.append(row)
    return Automaton(A.alphabet, A.tapes, len(order), [new[s] for s in A.start if s in new],
                     [new[s] for s in A.accept if s in new], delta)


def determinize(A: Automaton, cap: int = DEFAULT_STATE_CAP) -> Automaton:
    """Subset construction, trimmed and canonically numbered."""
    if A.deterministic:
        return canonical(trim(A))
    start = frozenset(A.start)
    accept = A.accept

    def expand(S):
        moves: dict[tuple, set] = {}
        for s in S:
            for col, ts in A.delta[s].items():
                moves.setdefault(col, set()).update(ts)
        for col, T in moves.items():
            yield col, frozenset(T)

    D = build(A.alphabet, A.tapes, [start], expand, lambda S: bool(S & accept), cap)
    return canonical(trim(D))


def canonical(A: Automaton) -> Automaton:
    """Renumber a DFA in BFS order with columns visited in sorted order."""
    if not A.deterministic:
        raise ValueError("canonical numbering needs a DFA")
    (s0,) = A.start
    order = [s0]
    new = {s0: 0}
    i = 0
    while i < len(order):
        s = order[i]
        for col in sorted(A.delta[s], key=A.col_key):
            (t,) = A.delta[s][col]
            if t not in new:
                new[t] = len(order)
                order.append(t)
        i += 1
    delta = [{col: (new[ts[0]],) for col, ts in A.delta[s].items()} for s in order]
    return Automaton(A.alphabet, A.tapes, len(order), [0], sorted(new[s] for s in A.accept if s in new), delta)


def minimize(A: Automaton, cap: int = DEFAULT_STATE_CAP) -> Automaton:
    """Minimal trimmed DFA (the dead state stays implicit).

    The empty language gives the one-state rejecting automaton.
    """
    D = determinize(A, cap)
    if not D.accept:
        return empty(A.alphabet, A.tapes)
    n = D.n
    first = {}
    block = [first.setdefault(s in D.accept, len(first)) for s in range(n)]
    nblocks = len(first)
    while True:
        sigs = {}
        new_block = []
        for s in range(n):
            sig = (block[s], tuple(sorted((D.col_key(c), block[ts[0]]) for c, ts in D.delta[s].items())))
            new_block.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == nblocks:
            break
        block, nblocks = new_block, len(sigs)
    rep: dict[int, int] = {}
    for s in range(n):
        rep.setdefault(block[s], s)
    delta = [{c: (block[ts[0]],) for c, ts in D.delta[rep[b]].items()} for b in range(nblocks)]
    (s0,) = D.start
    M = Automaton(D.alphabet, D.tapes, nblocks, [block[s0]], {block[s] for s in D.accept}, delta)
    return canonical(M)


determinize_minimize = minimize


def _check_compatible(A: Automaton, B: Automaton):
    if A.alphabet != B.alphabet or A.tapes != B.tapes:
        raise ValueError("alphabet or tape-count mismatch")


def combine(A: Automaton, B: Automaton, op: str) -> Automaton:
    """Product construction for ``intersect``, ``union`` or ``difference``."""
    _check_compatible(A, B)
    if op not in ("intersect", "union", "difference"):
        raise ValueError(f"unknown operation {op!r}")
    A, B = determinize(A), determinize(B)
    (a0,), (b0,) = A.start, B.start
    DEAD = -1

    def expand(k):
        a, b = k
        ra = A.delta[a] if a != DEAD else {}
        rb = B.delta[b] if b != DEAD else {}
        if op == "intersect":
            cols = ra.keys() & rb.keys()
        elif op == "union":
            cols = ra.keys() | rb.keys()
        else:
            cols = ra.keys()
        for col in cols:
            yield col, (ra[col][0] if col in ra else DEAD, rb[col][0] if col in rb else DEAD)

    def acc(k):
        x, y = k[0] in A.accept, k[1] in B.accept
        return {"intersect": x and y, "union": x or y, "difference": x and not y}[op]

    return determinize(build(A.alphabet, A.tapes, [(a0, b0)], expand, acc))


def intersect(*autos: Automaton) -> Automaton:
    out = autos[0]
    for B in autos[1:]:
        out = combine(out, B, "intersect")
    return out


def union(*autos: Automaton) -> Automaton:
    out = autos[0]
    for B in autos[1:]:
        out = combine(out, B, "union")
    return out


def difference(A: Automaton, B: Automaton) -> Automaton:
    return combine(A, B, "difference")


def universe(alphabet: Alphabet, tapes: int = 1) -> Automaton:
    """All padding-valid synchronous convolutions over ``tapes`` tapes."""
    letters = list(alphabet.symbols)

    def expand(mask):
        choices = [[PAD] if mask >> i & 1 else letters + [PAD] for i in range(tapes)]
        cols = [()]
        for ch in choices:
            cols = [c + (x,) for c in cols for x in ch]
        for col in cols:
            if is_blank(col):
                continue
            m = mask
            for i, x in enumerate(col):
                if x == PAD:
                    m |= 1 << i
            yield col, m

    return minimize(build(alphabet, tapes, [0], expand, lambda m: True))


def complement(A: Automaton, within: Optional[Automaton] = None) -> Automaton:
    """Complement relative to ``within`` (default: the synchronous universe)."""
    return difference(within if within is not None else universe(A.alphabet, A.tapes), A)


def equivalent(A: Automaton, B: Automaton) -> bool:
    return is_empty(difference(A, B)) and is_empty(difference(B, A))


# -- tape manipulation -----------------------------------------------------

def pad_join(A: Automaton, B: Automaton) -> Automaton:
    """Synchronous join: tuples (u, v) with u in L(A), v in L(B), padded."""
    if A.alphabet != B.alphabet:
        raise ValueError("alphabet mismatch")
    j, l = A.tapes, B.tapes
    done_a, done_b = (PAD,) * j, (PAD,) * l

    def options(M, s, fin):
        if s is None:
            return [(fin, None)]
        out = [(col, t) for col, ts in M.delta[s].items() for t in ts]
        if s in M.accept:
            out.append((fin, None))
        return out

    def expand(k):
        a, b = k
        for ca, a2 in options(A, a, done_a):
            for cb, b2 in options(B, b, done_b):
                col = ca + cb
                if not is_blank(col):
                    yield col, (a2, b2)

    def acc(k):
        a, b = k
        return (a is None or a in A.accept) and (b is None or b in B.accept)

    init = [(a, b) for a in A.start for b in B.start]
    return build(A.alphabet, j + l, init, expand, acc)


def concat_tapes(A: Automaton, B: Automaton) -> Automaton:
    """Sequential layout: A's tapes are read first, then B's tapes start.

    Mirrors the padding construction that turns an automaton over one tape
    into one reading (c, eps) and then ($, c).
    """
    if A.alphabet != B.alphabet:
        raise ValueError("alphabet mismatch")
    j, l = A.tapes, B.tapes
    idle_b, pad_a = (IDLE,) * l, (PAD,) * j

    def expand(k):
        phase, s = k
        if phase == 0:
            for col, ts in A.delta[s].items():
                for t in ts:
                    yield col + idle_b, (0, t)
            if s in A.accept:
                for b in B.start:
                    for col, ts in B.delta[b].items():
                        for t in ts:
                            yield pad_a + col, (1, t)
        else:
            for col, ts in B.delta[s].items():
                for t in ts:
                    yield pad_a + col, (1, t)

    b_eps = bool(B.start & B.accept)

    def acc(k):
        phase, s = k
        return (s in A.accept and b_eps) if phase == 0 else s in B.accept

    return build(A.alphabet, j + l, [(0, s) for s in A.start], expand, acc)


def restrict(X: Automaton, A: Automaton, tapes: Sequence[int]) -> Automaton:
    """Tuples of L(X) whose restriction to ``tapes`` lies in L(A).

    Columns that are blank on ``tapes`` leave A's state unchanged, so A is
    read in its own blank-free encoding.
    """
    tapes = tuple(tapes)
    if len(tapes) != A.tapes or X.alphabet != A.alphabet:
        raise ValueError("restriction does not match automaton")
    A = determinize(A)
    (a0,) = A.start if A.start else (None,)

    def expand(k):
        x, a = k
        for col, ts in X.delta[x].items():
            sub = tuple(col[i] for i in tapes)
            if is_blank(sub):
                a2 = a
            else:
                nxt = A.delta[a].get(sub)
                if nxt is None:
                    continue
                a2 = nxt[0]
            for t in ts:
                yield col, (t, a2)

    if a0 is None:
        return empty(X.alphabet, X.tapes)
    return build(X.alphabet, X.tapes, [(x, a0) for x in X.start], expand,
                  lambda k: k[0] in X.accept and k[1] in A.accept)


def _eps_close(A: Automaton, eps: list[list[int]]) -> list[frozenset]:
    out = []
    for s in range(A.n):
        seen = {s}
        stack = [s]
        while stack:
            p = stack.pop()
            for q in eps[p]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        out.append(frozenset(seen))
    return out


def project(A: Automaton, keep: Sequence[int]) -> Automaton:
    """Existential projection onto ``keep``; columns gone blank become epsilon."""
    keep = tuple(keep)
    if not keep:
        raise ValueError("keep must be nonempty")
    eps: list[list[int]] = [[] for _ in range(A.n)]
    moves: list[dict] = [dict() for _ in range(A.n)]
    for s, row in enumerate(A.delta):
        for col, ts in row.items():
            sub = tuple(col[i] for i in keep)
            if is_blank(sub):
                eps[s].extend(ts)
            else:
                moves[s].setdefault(sub, set()).update(ts)
    clo = _eps_close(A, eps)
    delta = []
    for s in range(A.n):
        row: dict[tuple, set] = {}
        for p in clo[s]:
            for sub, ts in moves[p].items():
                tgt = row.setdefault(sub, set())
                for t in ts:
                    tgt |= clo[t]
        delta.append({c: tuple(sorted(t)) for c, t in row.items()})
    accept = [s for s in range(A.n) if clo[s] & A.accept]
    return trim(Automaton(A.alphabet, len(keep), A.n, A.start, accept, delta))


def fix_tape(A: Automaton, t: int, w: str) -> Automaton:
    """Tuples of L(A) whose tape ``t`` reads ``w``, projected onto the other tapes."""
    if not 0 <= t < A.tapes:
        raise ValueError("tape index out of range")
    if A.tapes == 1:
        raise ValueError("cannot fix the only tape")
    n = len(w)

    def expand(k):
        s, pos = k
        for col, ts in A.delta[s].items():
            c = col[t]
            if c == IDLE:
                if pos != 0:
                    continue
                p2 = 0
            elif c == PAD:
                if pos != n:
                    continue
                p2 = n
            elif pos < n and w[pos] == c:
                p2 = pos + 1
            else:
                continue
            for q in ts:
                yield col, (q, p2)

    X = build(A.alphabet, A.tapes, [(s, 0) for s in A.start], expand,
               lambda k: k[0] in A.accept and k[1] == n)
    return project(X, [i for i in range(A.tapes) if i != t])


def prefix_closure(A: Automaton) -> Automaton:
    """All prefixes of accepted words: every live state becomes accepting."""
    T = trim(determinize(A))
    if not T.accept:
        return T
    return Automaton(T.alphabet, T.tapes, T.n, T.start, range(T.n), T.delta)


def completion_distance(A: Automaton) -> int:
    """Least D such that every prefix of L(A) extends into L(A) by <= D columns."""
    T = trim(determinize(A))
    if not T.accept:
        raise ValueError("empty language")
    rev: list[list[int]] = [[] for _ in range(T.n)]
    for s, row in enumerate(T.delta):
        for ts in row.values():
            rev[ts[0]].append(s)
    dist = {s: 0 for s in T.accept}
    queue = deque(T.accept)
    while queue:
        s = queue.popleft()
        for p in rev[s]:
            if p not in dist:
                dist[p] = dist[s] + 1
                queue.append(p)
    return max(dist[s] for s in reachable(T))


# -- enumeration ---------------------------------------------------------

def enumerate_columns(A: Automaton, maxlen: int, cap: int = 2_000_000) -> list[list[tuple]]:
    """Accepted column strings of length <= maxlen, in shortlex order."""
    D = trim(determinize(A))
    if not D.accept:
        return []
    (s0,) = D.start
    out = []
    level = [(s0, ())]
    if s0 in D.accept:
        out.append([])
    total = 0
    for _ in range(maxlen):
        nxt = []
        for s, path in level:
            for col in sorted(D.delta[s], key=D.col_key):
                t = D.delta[s][col][0]
                p2 = path + (col,)
                nxt.append((t, p2))
                if t in D.accept:
                    out.append(list(p2))
        total += len(nxt)
        if total > cap:
            raise EnumerationCapExceeded(f"more than {cap} live prefixes")
        level = nxt
    return out


def enumerate_language(A: Automaton, maxlen: int, cap: int = 2_000_000) -> list:
    """Decoded accepted tuples (plain words for one tape), shortlex by columns."""
    out, seen = [], set()
    for cols in enumerate_columns(A, maxlen, cap):
        t = decode(cols, A.tapes)
        if t not in seen:
            seen.add(t)
            out.append(t[0] if A.tapes == 1 else t)
    return out


def count_by_length(A: Automaton, maxlen: int) -> list[int]:
    """Number of accepted column strings of each length 0..maxlen."""
    D = trim(determinize(A))
    counts = [0] * (maxlen + 1)
    if not D.accept:
        return counts
    (s0,) = D.start
    cur = {s0: 1}
    for n in range(maxlen + 1):
        counts[n] = sum(c for s, c in cur.items() if s in D.accept)
        nxt: dict[int, int] = {}
        for s, c in cur.items():
            for ts in D.delta[s].values():
                nxt[ts[0]] = nxt.get(ts[0], 0) + c
        cur = nxt
    return counts


# -- validators --------------------------------------------------------------

def padding_violations(A: Automaton) -> list[tuple]:
    """Transitions on accepted column strings that break IDLE* letters* PAD*."""
    T = trim(A)
    bad = []
    seen = set()
    init = (0,) * T.tapes
    stack = [(s, init) for s in T.start]
    while stack:
        s, ph = stack.pop()
        if (s, ph) in seen:
            continue
        seen.add((s, ph))
        for col, ts in T.delta[s].items():
            if is_blank(col):
                bad.append((s, col))
                continue
            nph = []
            for c, p in zip(col, ph):
                if c == IDLE:
                    nph.append(0 if p == 0 else -1)
                elif c == PAD:
                    nph.append(2)
                else:
                    nph.append(1 if p < 2 else -1)
            if -1 in nph:
                bad.append((s, col))
                continue
            for t in ts:
                stack.append((t, tuple(nph)))
    return bad


def is_padding_valid(A: Automaton) -> bool:
    return not padding_violations(A)


def with_end_marker(A: Automaton) -> Automaton:
    """Explicit end-marker form: an all-PAD arrow from each accept state to a
    fresh sole accept state."""
    end = (PAD,) * A.tapes
    f = A.n
    delta = [dict(row) for row in A.delta] + [{}]
    for s in A.accept:
        delta[s][end] = tuple(sorted(set(delta[s].get(end, ())) | {f}))
    return Automaton(A.alphabet, A.tapes, A.n + 1, A.start, [f], delta)


def strip_end_marker(A: Automaton) -> Automaton:
    """Accept-state semantics for an automaton using all-PAD end arrows."""
    end = (PAD,) * A.tapes
    accept = [s for s in range(A.n) if set(A.delta[s].get(end, ())) & A.accept]
    delta = [{c: t for c, t in row.items() if c != end} for row in A.delta]
    return Automaton(A.alphabet, A.tapes, A.n, A.start, accept, delta)


def relabel(A: Automaton, f: Callable[[tuple], Optional[tuple]], tapes: int) -> Automaton:
    """Map every column through ``f`` (None drops the transition)."""
    delta = []
    for row in A.delta:
        new: dict[tuple, set] = {}
        for col, ts in row.items():
            c2 = f(col)
            if c2 is not None:
                new.setdefault(c2, set()).update(ts)
        delta.append({c: tuple(sorted(t)) for c, t in new.items()})
    return Automaton(A.alphabet, tapes, A.n, A.start, A.accept, delta)
