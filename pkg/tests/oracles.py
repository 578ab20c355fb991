"""Brute-force reference implementations, independent of the package.

Each oracle group maps a word to a canonical element key by its own means
(stack reduction, exponent vectors, integer matrices) and measures word
length by breadth-first search over keys.
"""
from itertools import product


def free_reduce(word):
    out = []
    for c in word:
        if out and out[-1] != c and out[-1].lower() == c.lower():
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def invert(word, self_inverse=""):
    return "".join(c if c in self_inverse else c.swapcase() for c in reversed(word))


def _mat_mul(A, B):
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _psl(M):
    # projective class: fix the sign of the first nonzero entry
    flat = [M[0][0], M[0][1], M[1][0], M[1][1]]
    first = next(x for x in flat if x)
    if first < 0:
        M = ((-M[0][0], -M[0][1]), (-M[1][0], -M[1][1]))
    return M


class OracleGroup:
    def __init__(self, letters, self_inverse, identity, act):
        self.letters = letters
        self.self_inverse = self_inverse
        self.identity = identity
        self.act = act
        self._dist = {identity: 0}
        self._radius = 0
        self._frontier = [identity]

    def element(self, word):
        e = self.identity
        for c in word:
            e = self.act(e, c)
        return e

    def _grow(self, r):
        while self._radius < r:
            nxt = []
            for e in self._frontier:
                for c in self.letters:
                    f = self.act(e, c)
                    if f not in self._dist:
                        self._dist[f] = self._radius + 1
                        nxt.append(f)
            self._frontier = nxt
            self._radius += 1

    def length(self, word, bound=None):
        e = self.element(word)
        r = bound if bound is not None else len(word)
        self._grow(r)
        return self._dist[e]

    def inner(self, x, y):
        return self.length(x) + self.length(y) - self.length(x + y)

    def inv(self, word):
        return invert(word, self.self_inverse)

    def geodesic_words(self, maxlen):
        """All geodesic words of length <= maxlen (they form a prefix-closed set)."""
        out = [""]
        level = [""]
        for n in range(maxlen):
            nxt = []
            for w in level:
                for c in self.letters:
                    if self.length(w + c) == n + 1:
                        nxt.append(w + c)
            out += nxt
            level = nxt
        return out

    def ball(self, r):
        self._grow(r)
        return {e for e, d in self._dist.items() if d <= r}


def free_oracle(rank=2):
    gens = "abcdefghijklm"[:rank]
    letters = "".join(g + g.upper() for g in gens)
    return OracleGroup(letters, "", "", lambda e, c: free_reduce(e + c))


def zfree_oracle(dim=2):
    gens = "xyzuv"[:dim]
    letters = "".join(g + g.upper() for g in gens)

    def act(e, c):
        i = gens.index(c.lower())
        v = list(e)
        v[i] += 1 if c.islower() else -1
        return tuple(v)

    return OracleGroup(letters, "", (0,) * dim, act)


_S = ((0, -1), (1, 0))
_ST = ((0, -1), (1, 1))
_ST_INV = ((1, 1), (-1, 0))


def fpc23_oracle():
    """Z/2 * Z/3 realised as PSL(2, Z): a = S, b = ST."""
    gen = {"a": _S, "b": _ST, "B": _ST_INV}
    return OracleGroup("abB", "a", ((1, 0), (0, 1)), lambda e, c: _psl(_mat_mul(e, gen[c])))


def all_words(letters, maxlen):
    for n in range(maxlen + 1):
        for t in product(letters, repeat=n):
            yield "".join(t)


def free_S(g, h_words, bound):
    """g reduced: is |g| <= |g h| for every element h of the listed subgroup words."""
    return all(len(free_reduce(g + h)) >= len(g) for h in h_words)


def cyclic_powers(w, n, self_inverse=""):
    """w^k for |k| <= n."""
    out = [""]
    for k in range(1, n + 1):
        out += [w * k, invert(w, self_inverse) * k]
    return out


def brute_R(og, maxcols, only=None):
    """Quadruples (x, y, z, w) with x, y geodesic and |x| + |y| <= maxcols."""
    geo = og.geodesic_words(maxcols)
    out = set()
    for x in geo:
        for y in geo:
            if len(x) + len(y) > maxcols:
                continue
            i = 0
            while i < len(y) and og.length(x + y[: i + 1]) == len(x) + i + 1:
                i += 1
            z, w = x + y[:i], y[i:]
            if only is not None and not w.startswith(only):
                continue
            out.add((x, y, z, w))
    return out


def brute_R_prime(og, maxcols, c):
    out = set()
    for x, y, z, w in brute_R(og, maxcols, only=c):
        target = og.element(z + c)
        n = og.length(z + c)
        for zp in og.geodesic_words(n):
            if len(zp) == n and og.element(zp) == target:
                out.add((x, y, z, w, zp, w[1:]))
    return out


def brute_L(og, maxcols, n):
    geo = og.geodesic_words(maxcols)
    return {(x, y) for x in geo for y in geo if len(x) + len(y) <= maxcols and og.inner(x, y) == n}
