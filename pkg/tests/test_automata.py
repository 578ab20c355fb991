import pytest

from hypnet import automata as am
from hypnet.automata import IDLE, PAD, Automaton
from hypnet.words import Alphabet

F2 = Alphabet.from_generators("ab")


def reduced_words(redundant=False):
    """Reduced words of F(a, b); with ``redundant`` every state is duplicated."""
    syms = F2.symbols
    n = 1 + len(syms)
    table = [{} for _ in range(n)]
    for i, last in enumerate([None] + list(syms)):
        for j, s in enumerate(syms):
            if last is not None and F2.inv(last) == s:
                continue
            table[i][(s,)] = 1 + j
    if not redundant:
        return am.from_dfa(F2, 1, n, 0, range(n), table)
    # two copies that alternate: same language, twice the states
    big = [{c: t + n * (1 - k) for c, t in row.items()} for k in range(2) for row in table]
    return am.from_dfa(F2, 1, 2 * n, 0, range(2 * n), big)


def single(words):
    return am.word_acceptor(F2, words)


def test_enumerate_reduced_words():
    L = reduced_words()
    assert len(am.enumerate_language(L, 2)) == 17
    assert am.count_by_length(L, 5) == [1, 4, 12, 36, 108, 324]


def test_empty_and_epsilon():
    E = am.empty(F2)
    assert am.is_empty(E)
    assert am.enumerate_language(E, 4) == []
    assert am.enumerate_language(single([""]), 4) == [""]


def test_minimize_reduced_acceptor():
    M = am.minimize(reduced_words(redundant=True))
    assert M.n == 5
    assert am.equivalent(M, reduced_words())


def test_minimize_removes_unreachable():
    L = reduced_words()
    delta = [dict(r) for r in L.delta] + [{("a",): (0,)}]
    A = Automaton(F2, 1, L.n + 1, L.start, set(L.accept) | {L.n}, delta)
    M = am.minimize(A)
    assert M.n == 5
    assert am.enumerate_language(M, 8) == am.enumerate_language(L, 8)


def test_minimize_empty_language():
    A = am.from_dfa(F2, 1, 3, 0, [], [{("a",): 1}, {("b",): 2}, {}])
    M = am.minimize(A)
    assert M.n == 1 and not M.accept


def test_boolean_operations():
    L = reduced_words()
    ab = single(["ab", "a", "aA"])
    assert am.enumerate_language(am.intersect(L, L), 8) == am.enumerate_language(L, 8)
    assert am.enumerate_language(am.intersect(L, ab), 3) == ["a", "ab"]
    assert am.enumerate_language(am.difference(ab, L), 3) == ["aA"]
    assert set(am.enumerate_language(am.union(single(["b"]), ab), 3)) == {"a", "b", "ab", "aA"}
    U = am.universe(F2, 1)
    assert am.count_by_length(am.union(L, am.complement(L)), 6) == am.count_by_length(U, 6)


def test_union_with_complement_covers_two_tape_universe():
    A = am.pad_join(reduced_words(), single(["a", "bb"]))
    U = am.universe(F2, 2)
    both = am.union(A, am.complement(A))
    assert am.count_by_length(both, 6) == am.count_by_length(U, 6)
    assert am.count_by_length(U, 2) == [1, 24, 416]


def test_pad_join_examples():
    eps = single([""])
    B = single(["ab", "b"])
    J = am.pad_join(eps, B)
    assert set(am.enumerate_language(J, 4)) == {("", "ab"), ("", "b")}
    assert am.enumerate_columns(J, 1) == [[(PAD, "b")]]
    J = am.pad_join(single(["a"]), single(["bb"]))
    assert am.enumerate_columns(J, 3) == [[("a", "b"), (PAD, "b")]]


def test_project_pad_join_recovers_first_tape():
    A = single(["a", "ab", "bAb"])
    J = am.pad_join(A, reduced_words())
    assert am.equivalent(am.project(J, [0]), A)
    assert am.is_empty(am.project(am.pad_join(A, am.empty(F2)), [0]))


def test_concat_tapes_layout():
    A = am.concat_tapes(single(["ab"]), single(["b"]))
    assert am.enumerate_columns(A, 4) == [[("a", IDLE), ("b", IDLE), (PAD, "b")]]
    assert A.accepts("ab", "b") and not A.accepts("ab", "")
    assert am.is_padding_valid(A)


def test_fix_tape():
    J = am.pad_join(single(["a", "b"]), single(["ab", "B"]))
    assert set(am.enumerate_language(am.fix_tape(J, 1, "ab"), 3)) == {"a", "b"}
    assert am.is_empty(am.fix_tape(J, 1, "aa"))
    with pytest.raises(ValueError):
        am.fix_tape(single(["a"]), 0, "a")


def test_restrict_skips_blank_columns():
    A = am.concat_tapes(reduced_words(), reduced_words())
    only_b = single(["b", "bb"])
    X = am.restrict(A, only_b, [1])
    assert set(am.enumerate_language(X, 2)) == {("", "b"), ("a", "b"), ("A", "b"), ("b", "b"), ("B", "b"),
                                                ("", "bb")}


def test_prefix_closure():
    assert am.enumerate_language(am.prefix_closure(single(["abab"])), 5) == ["", "a", "ab", "aba", "abab"]
    assert am.is_empty(am.prefix_closure(am.empty(F2)))


def test_completion_distance():
    assert am.completion_distance(single(["ab"])) == 2
    assert am.completion_distance(reduced_words()) == 0
    with pytest.raises(ValueError):
        am.completion_distance(am.empty(F2))


def test_json_and_dot_round_trip():
    A = am.minimize(am.pad_join(reduced_words(), single(["a"])))
    B = Automaton.from_json(A.to_json())
    assert B.to_json() == A.to_json()
    assert am.equivalent(A, B)
    dot = A.to_dot("J")
    assert dot.startswith('digraph "J"') and "doublecircle" in dot


def test_end_marker_round_trip():
    A = am.pad_join(single(["ab", ""]), single(["b"]))
    E = am.with_end_marker(A)
    assert len(E.accept) == 1
    assert am.equivalent(am.strip_end_marker(E), A)


def test_padding_validator():
    good = am.pad_join(single(["a"]), single(["bb"]))
    assert am.is_padding_valid(good)
    bad = am.from_dfa(F2, 2, 3, 0, [2], [{(PAD, "a"): 1}, {("a", "a"): 2}, {}])
    assert am.padding_violations(bad) == [(1, ("a", "a"))]
    blank = am.from_dfa(F2, 2, 2, 0, [1], [{(PAD, PAD): 1}, {}])
    assert not am.is_padding_valid(blank)


def test_accepts_any_alignment():
    A = am.pad_join(single(["ab"]), single(["b"]))
    assert A.accepts("ab", "b")
    assert not A.accepts("ab", "a")
    with pytest.raises(ValueError):
        A.accepts("ab")


def test_determinize_nfa():
    # NFA for words ending in "ab"
    nfa = Automaton(F2, 1, 3, [0], [2], [
        {("a",): (0, 1), ("A",): (0,), ("b",): (0,), ("B",): (0,)},
        {("b",): (2,)},
        {},
    ])
    D = am.determinize(nfa)
    assert D.deterministic
    words = am.enumerate_language(D, 3)
    assert words and all(w.endswith("ab") for w in words)
    assert len(words) == 1 + 4
