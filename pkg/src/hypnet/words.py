"""Alphabets, words and the built-in group families.

Words are plain ``str`` objects.  Every generator is a lowercase letter and
its formal inverse is the matching uppercase letter; a generator of order two
is its own inverse and has no uppercase partner.  Normal forms are always the
shortlex-least geodesic word for the element, so ``len(normal_form(w))`` is
the word length of ``w`` in the group.
"""
from __future__ import annotations

import re
import string
from math import gcd
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional


class AlphabetError(ValueError):
    pass


class SpecError(ValueError):
    """Raised for malformed group or subgroup specification text."""


class Alphabet:
    """An ordered symbol set closed under inversion."""

    def __init__(self, symbols: Iterable[str], inverse: dict[str, str]):
        self.symbols = tuple(symbols)
        if len(set(self.symbols)) != len(self.symbols):
            raise AlphabetError("duplicate symbols")
        self._inv = dict(inverse)
        for s in self.symbols:
            t = self._inv.get(s)
            if t is None or t not in self.symbols or self._inv[t] != s:
                raise AlphabetError(f"inverse map is not an involution at {s!r}")
        self.order = {s: i for i, s in enumerate(self.symbols)}
        self._inv_table = str.maketrans(self._inv)

    @classmethod
    def from_generators(cls, gens: str, involutions: str = "") -> "Alphabet":
        symbols, inverse = [], {}
        for g in gens:
            if g in involutions:
                symbols.append(g)
                inverse[g] = g
            else:
                G = g.upper()
                symbols += [g, G]
                inverse[g], inverse[G] = G, g
        return cls(symbols, inverse)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, s):
        return s in self.order

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols and self._inv == other._inv

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({''.join(self.symbols)!r})"

    def inv(self, s: str) -> str:
        return self._inv[s]

    def check(self, word: str) -> str:
        for s in word:
            if s not in self.order:
                raise AlphabetError(f"symbol {s!r} not in alphabet {''.join(self.symbols)}")
        return word

    def invert(self, word: str) -> str:
        """Formal inverse: reverse and invert each symbol."""
        return word[::-1].translate(self._inv_table)

    def shortlex_key(self, word: str):
        order = self.order
        return (len(word), tuple(order[s] for s in word))

    def all_words(self, maxlen: int):
        """All words of length <= maxlen in shortlex order."""
        level = [""]
        yield ""
        for _ in range(maxlen):
            level = [w + s for w in level for s in self.symbols]
            yield from level


def reduce_free(word: str, alphabet: Alphabet) -> str:
    """Freely reduce ``word``: cancel every adjacent pair ``c c^-1``."""
    out: list[str] = []
    order, inv = alphabet.order, alphabet._inv
    for s in word:
        if s not in order:
            raise AlphabetError(f"symbol {s!r} not in alphabet")
        if out and out[-1] == inv[s]:
            out.pop()
        else:
            out.append(s)
    return "".join(out)


def symmetrize(relators: Iterable[str], alphabet: Alphabet) -> tuple[str, ...]:
    """All cyclic permutations of the relators and of their inverses."""
    out = set()
    for r in relators:
        for w in (r, alphabet.invert(r)):
            for i in range(len(w)):
                out.add(w[i:] + w[:i])
    return tuple(sorted(out, key=alphabet.shortlex_key))


def is_symmetrized(relators: Iterable[str], alphabet: Alphabet) -> bool:
    rels = set(relators)
    return rels == set(symmetrize(rels, alphabet))


def dehn_reduce(word: str, relators, alphabet: Alphabet) -> str:
    """Dehn's algorithm over a symmetrized relator set.

    Repeatedly replaces a subword that is more than half of some relator by
    the inverse of the complementary piece.  For C'(1/6) presentations the
    result is empty iff ``word`` represents the identity.
    """
    rels = tuple(relators)
    if not is_symmetrized(rels, alphabet):
        raise ValueError("relator set is not symmetrized")
    by_first: dict[str, list[str]] = {}
    for r in rels:
        by_first.setdefault(r[0], []).append(r)
    return _dehn(reduce_free(word, alphabet), by_first, alphabet)


def _dehn(w: str, by_first: dict[str, list[str]], alphabet: Alphabet) -> str:
    changed = True
    while changed:
        changed = False
        n = len(w)
        for i in range(n):
            for r in by_first.get(w[i], ()):
                m = len(r)
                L = 1
                while L < m and i + L < n and w[i + L] == r[L]:
                    L += 1
                if 2 * L > m:
                    w = reduce_free(w[:i] + alphabet.invert(r[L:]) + w[i + L:], alphabet)
                    changed = True
                    break
            if changed:
                break
    return w


class Group:
    """A group with solvable word problem; subclasses supply ``normal_form``."""

    family = "abstract"

    def __init__(self, alphabet: Alphabet, spec: str):
        self.alphabet = alphabet
        self.spec = spec

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec}>"

    def normal_form(self, word: str) -> str:
        raise NotImplementedError

    def multiply(self, u: str, v: str) -> str:
        return self.normal_form(u + v)

    def invert(self, u: str) -> str:
        return self.normal_form(self.alphabet.invert(u))

    def length(self, word: str) -> int:
        return len(self.normal_form(word))

    def right_mul(self, nf: str, s: str) -> str:
        """Normal form of ``nf * s`` for ``nf`` already normal and ``s`` a symbol."""
        return self.normal_form(nf + s)

    def distance(self, u: str, v: str) -> int:
        return len(self.normal_form(self.alphabet.invert(u) + v))

    def equal(self, u: str, v: str) -> bool:
        return self.normal_form(u) == self.normal_form(v)

    def membership(self, gens: tuple[str, ...]) -> Optional[Callable[[str], bool]]:
        """Exact membership predicate for ``<gens>`` if the family has one."""
        return None


class FreeGroup(Group):
    family = "free"

    def __init__(self, rank: int):
        if not 1 <= rank <= 13:
            raise SpecError("free group rank must be in 1..13")
        self.rank = rank
        super().__init__(Alphabet.from_generators(string.ascii_lowercase[:rank]), f"free:{rank}")

    def normal_form(self, word: str) -> str:
        return reduce_free(word, self.alphabet)

    def right_mul(self, nf, s):
        if nf and nf[-1] == self.alphabet._inv[s]:
            return nf[:-1]
        return nf + s

    def membership(self, gens):
        if len(gens) == 1:
            w = gens[0]
            powers: dict[int, set[str]] = {}

            def member(g: str) -> bool:
                n = len(g)
                # |w^k| >= |k| for nontrivial w in a free group
                if n not in powers:
                    pw, acc = set([""]), ""
                    inv, acc_inv = self.alphabet.invert(w), ""
                    for _ in range(n):
                        acc = self.normal_form(acc + w)
                        acc_inv = self.normal_form(acc_inv + inv)
                        pw.update((acc, acc_inv))
                    powers[n] = pw
                return g in powers[n]

            return member
        return None


class FreeAbelianGroup(Group):
    family = "zfree"
    LETTERS = "xyzuv"

    def __init__(self, dim: int):
        if not 1 <= dim <= len(self.LETTERS):
            raise SpecError(f"free abelian rank must be in 1..{len(self.LETTERS)}")
        self.dim = dim
        self.gens = self.LETTERS[:dim]
        super().__init__(Alphabet.from_generators(self.gens), f"zfree:{dim}")

    def vector(self, word: str) -> tuple[int, ...]:
        c = Counter(self.alphabet.check(word))
        return tuple(c[g] - c[g.upper()] for g in self.gens)

    def from_vector(self, vec) -> str:
        return "".join((g if n > 0 else g.upper()) * abs(n) for g, n in zip(self.gens, vec))

    def normal_form(self, word: str) -> str:
        return self.from_vector(self.vector(word))

    def membership(self, gens):
        vecs = [self.vector(g) for g in gens]
        vecs = [v for v in vecs if any(v)]
        if not vecs:
            return lambda g: not any(self.vector(g))
        if len({tuple(abs(x) for x in v) for v in vecs}) == 1 and all(
            v == vecs[0] or v == tuple(-x for x in vecs[0]) for v in vecs
        ):
            base = vecs[0]

            def member(g: str) -> bool:
                u = self.vector(g)
                ratios = {u[i] / base[i] for i in range(self.dim) if base[i]}
                if any(u[i] for i in range(self.dim) if not base[i]) or len(ratios) > 1:
                    return False
                r = ratios.pop()
                return r == int(r)

            return member
        # diagonal lattices m1 Z x m2 Z x ... generated by basis multiples
        if all(sum(1 for x in v if x) == 1 for v in vecs):
            mods = [0] * self.dim
            for v in vecs:
                i = next(i for i, x in enumerate(v) if x)
                mods[i] = gcd(mods[i], abs(v[i]))

            def member(g: str) -> bool:
                u = self.vector(g)
                return all((u[i] == 0) if mods[i] == 0 else u[i] % mods[i] == 0 for i in range(self.dim))

            return member
        return None


class FreeProductCyclic(Group):
    """Z/m * Z/n with generators ``a`` (order m) and ``b`` (order n)."""

    family = "fpc"

    def __init__(self, m: int, n: int):
        if m < 2 or n < 2:
            raise SpecError("cyclic factor orders must be >= 2")
        self.orders = {"a": m, "b": n}
        invol = "".join(g for g, k in self.orders.items() if k == 2)
        super().__init__(Alphabet.from_generators("ab", invol), f"fpc:{m},{n}")

    def _syllable(self, g: str, e: int) -> str:
        k = self.orders[g]
        e %= k
        if 2 * e <= k:
            return g * e
        return self.alphabet.inv(g) * (k - e)

    def normal_form(self, word: str) -> str:
        stack: list[list] = []
        for s in self.alphabet.check(word):
            g, e = s.lower(), (1 if s.islower() else -1)
            if stack and stack[-1][0] == g:
                stack[-1][1] = (stack[-1][1] + e) % self.orders[g]
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([g, e % self.orders[g]])
        return "".join(self._syllable(g, e) for g, e in stack)

    def _exponent(self, nf: str) -> int:
        if not nf:
            return 0
        if self.orders[nf[0].lower()] == 2:
            return len(nf)
        return sum(1 if s.islower() else -1 for s in nf)

    def membership(self, gens):
        letters = {s.lower() for w in gens for s in self.normal_form(w)}
        if len(letters) != 1:
            return None
        (g,) = letters
        step = self.orders[g]
        for w in gens:
            step = gcd(step, self._exponent(self.normal_form(w)) % self.orders[g])

        def member(x: str) -> bool:
            nf = self.normal_form(x)
            if any(s.lower() != g for s in nf):
                return False
            return self._exponent(nf) % step == 0

        return member


class SurfaceGroup(Group):
    """Closed orientable surface group of genus g: <a,b,c,d,... | [a,b][c,d]...>.

    The relator satisfies C'(1/7), so Dehn's algorithm solves the word
    problem.  Normal forms are found in a lazily grown table of shortlex-least
    geodesics, bucketed by homomorphic images and compared with Dehn's
    algorithm.
    """

    family = "surface"
    lazy_table = True

    def __init__(self, genus: int, max_radius: int = 9):
        if not 2 <= genus <= 6:
            raise SpecError("surface genus must be in 2..6")
        self.genus = genus
        gens = string.ascii_lowercase[: 2 * genus]
        super().__init__(Alphabet.from_generators(gens), f"surface:{genus}")
        rel = "".join(gens[2 * i] + gens[2 * i + 1] + gens[2 * i].upper() + gens[2 * i + 1].upper()
                      for i in range(genus))
        self.relator = rel
        self.relators = symmetrize([rel], self.alphabet)
        self._by_first: dict[str, list[str]] = {}
        for r in self.relators:
            self._by_first.setdefault(r[0], []).append(r)
        self.max_radius = max_radius
        self._images = self._hash_maps()
        self._levels: list[list[str]] = [[""]]
        self._bucket: dict[tuple, list[str]] = {self._hash(""): [""]}
        self._cache: dict[str, str] = {}

    def _hash_maps(self):
        # homomorphisms to F(x,y): pair 1 -> (u, v), pair 2 -> (v, u), others -> 1
        f2 = Alphabet.from_generators("xy")
        maps = []
        for u, v in (("x", "y"), ("x", "yx"), ("xy", "y"), ("xxy", "yx")):
            m = {}
            for i, g in enumerate(self.alphabet.symbols[::2]):
                pair, first = divmod(i, 2)
                if pair == 0:
                    img = u if first == 0 else v
                elif pair == 1:
                    img = v if first == 0 else u
                else:
                    img = ""
                m[g], m[g.upper()] = img, f2.invert(img)
            maps.append(m)
        self._f2 = f2
        return maps

    def _hash(self, word: str) -> tuple:
        c = Counter(word)
        ab = tuple(c[g] - c[g.upper()] for g in self.alphabet.symbols[::2])
        imgs = tuple(reduce_free("".join(m[s] for s in word), self._f2) for m in self._images)
        return (ab,) + imgs

    def dehn(self, word: str) -> str:
        return _dehn(reduce_free(word, self.alphabet), self._by_first, self.alphabet)

    def _same(self, u: str, v: str) -> bool:
        return not self.dehn(u + self.alphabet.invert(v))

    def _grow(self, radius: int):
        if radius > self.max_radius:
            raise MemoryError(f"surface normal-form table capped at radius {self.max_radius}")
        inv = self.alphabet._inv
        while len(self._levels) <= radius:
            new: list[str] = []
            for g in self._levels[-1]:
                for s in self.alphabet.symbols:
                    if g and g[-1] == inv[s]:
                        continue
                    cand = g + s
                    key = self._hash(cand)
                    bucket = self._bucket.setdefault(key, [])
                    if any(self._same(cand, e) for e in bucket):
                        continue
                    bucket.append(cand)
                    new.append(cand)
            self._levels.append(new)

    def normal_form(self, word: str) -> str:
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        w = self.dehn(self.alphabet.check(word))
        if len(w) >= len(self._levels):
            self._grow(len(w))
        key = self._hash(w)
        for e in self._bucket.get(key, ()):
            if self._same(w, e):
                if len(self._cache) < 1_000_000:
                    self._cache[word] = e
                return e
        raise AssertionError("element missing from complete normal-form table")


_GROUP_RE = re.compile(r"^(free|zfree|fpc|surface):(\d+)(?:,(\d+))?$")


def parse_group(text: str) -> Group:
    """Parse ``free:K``, ``zfree:D``, ``fpc:M,N`` or ``surface:G``."""
    m = _GROUP_RE.match(text.strip())
    if not m:
        raise SpecError(f"bad group spec {text!r}")
    fam, x, y = m.group(1), int(m.group(2)), m.group(3)
    if fam == "fpc":
        if y is None:
            raise SpecError("fpc needs two orders, e.g. fpc:2,3")
        return FreeProductCyclic(x, int(y))
    if y is not None:
        raise SpecError(f"{fam} takes a single parameter")
    return {"free": FreeGroup, "zfree": FreeAbelianGroup, "surface": SurfaceGroup}[fam](x)


@dataclass(frozen=True)
class SubgroupSpec:
    generators: tuple[str, ...]
    label: str
    membership: Optional[Callable[[str], bool]] = field(default=None, compare=False, repr=False)
    whole: bool = False

    @property
    def trivial(self) -> bool:
        return not self.generators

    @property
    def exact(self) -> bool:
        return self.membership is not None


_TOKEN = re.compile(r"([A-Za-z])(?:\^(-?\d+))?")


def parse_word(text: str, alphabet: Alphabet) -> str:
    """Parse ``a^2Bb^-1``-style text into a word; ``1`` is the empty word."""
    text = text.strip()
    if text in ("1", "e", ""):
        return ""
    out, pos = [], 0
    for m in _TOKEN.finditer(text):
        if m.start() != pos:
            raise SpecError(f"cannot parse word {text!r}")
        pos = m.end()
        s, e = m.group(1), int(m.group(2) or 1)
        if s not in alphabet:
            raise SpecError(f"letter {s!r} is not a generator")
        if e < 0:
            s, e = alphabet.inv(s), -e
        out.append(s * e)
    if pos != len(text):
        raise SpecError(f"cannot parse word {text!r}")
    return "".join(out)


def parse_subgroup(text: str, group: Group) -> SubgroupSpec:
    """Comma-separated generator words; ``1`` is trivial and ``all`` is G."""
    label = text.strip()
    if label in ("all", "G"):
        gens = tuple(s for s in group.alphabet.symbols)
        return SubgroupSpec(gens, "all", lambda g: True, whole=True)
    words = [parse_word(t, group.alphabet) for t in label.split(",")] if label else []
    return make_subgroup(group, words, label or "1")


def make_subgroup(group: Group, words, label: str) -> SubgroupSpec:
    gens, base = [], []
    for w in words:
        nf = group.normal_form(w)
        if nf and nf not in base and group.invert(nf) not in base:
            base.append(nf)
        for v in (group.normal_form(w), group.invert(w)):
            if v and v not in gens:
                gens.append(v)
    gens.sort(key=group.alphabet.shortlex_key)
    if not gens:
        return SubgroupSpec((), label, lambda g: not group.normal_form(g))
    if set(group.alphabet.symbols) <= set(gens):
        return SubgroupSpec(tuple(gens), label, lambda g: True, whole=True)
    return SubgroupSpec(tuple(gens), label, group.membership(tuple(base)))


def pretty(word: str) -> str:
    """Render uppercase inverse letters as ``a^-1``."""
    return "".join(s if s.islower() else s.lower() + "^-1" for s in word) or "1"
