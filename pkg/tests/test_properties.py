from hypothesis import given, settings
from hypothesis import strategies as st

from hypnet import automata as am
from hypnet.automata import Automaton
from hypnet.cayley import inner
from hypnet.words import Alphabet

from conftest import group, languages
from oracles import fpc23_oracle, free_oracle, free_reduce, zfree_oracle

FREE = free_oracle()
ZFREE = zfree_oracle()
FPC = fpc23_oracle()

free_words = st.text(alphabet="aAbB", max_size=12)
zfree_words = st.text(alphabet="xXyY", max_size=10)
fpc_words = st.text(alphabet="abB", max_size=10)
surface_words = st.text(alphabet="aAbBcCdD", max_size=2)


@given(free_words)
def test_free_normal_form_is_free_reduction(w):
    assert group("free:2").normal_form(w) == free_reduce(w)


@given(zfree_words)
def test_zfree_normal_form_same_element_and_geodesic(w):
    nf = group("zfree:2").normal_form(w)
    assert ZFREE.element(nf) == ZFREE.element(w)
    assert len(nf) == ZFREE.length(w, bound=len(w))


@given(fpc_words)
def test_fpc_normal_form_matches_matrix_oracle(w):
    nf = group("fpc:2,3").normal_form(w)
    assert FPC.element(nf) == FPC.element(w)
    assert len(nf) == FPC.length(w, bound=len(w))


@settings(max_examples=60)
@given(st.sampled_from(["free:2", "zfree:2", "fpc:2,3"]), st.data())
def test_multiplication_is_associative(spec, data):
    letters = "".join(group(spec).alphabet.symbols)
    x, y, z = (data.draw(st.text(alphabet=letters, max_size=6)) for _ in range(3))
    G = group(spec)
    assert G.multiply(G.multiply(x, y), z) == G.multiply(x, G.multiply(y, z))
    assert G.multiply(x, G.invert(x)) == ""


@settings(max_examples=30, deadline=None)
@given(surface_words, surface_words)
def test_surface_inverse_and_length(x, y):
    G = group("surface:2")
    g = G.multiply(x, y)
    assert G.multiply(g, G.invert(g)) == ""
    assert G.length(g) <= G.length(x) + G.length(y)


@given(free_words, free_words, free_words)
def test_induction_identity_free(x, y, z):
    F = group("free:2")
    xy = F.multiply(x, y)
    lhs = inner(F, x, y) + inner(F, xy, z) - inner(F, y, z)
    assert lhs == inner(F, x, F.multiply(y, z))
    fx, fy = free_reduce(x), free_reduce(y)
    assert inner(F, x, y) == len(fx) + len(fy) - len(free_reduce(fx + fy))


@given(free_words, free_words)
def test_inner_product_nonnegative_and_bounded(x, y):
    F = group("free:2")
    i = inner(F, x, y)
    assert 0 <= i <= 2 * min(F.length(x), F.length(y))
    assert i % 2 == 0


# -- automata ------------------------------------------------------------------

F2 = Alphabet.from_generators("ab")


@st.composite
def random_dfa(draw, max_states=5):
    n = draw(st.integers(1, max_states))
    table = []
    for _ in range(n):
        row = {}
        for s in F2.symbols:
            t = draw(st.one_of(st.none(), st.integers(0, n - 1)))
            if t is not None:
                row[(s,)] = t
        table.append(row)
    accept = draw(st.sets(st.integers(0, n - 1)))
    return am.from_dfa(F2, 1, n, 0, accept, table)


@settings(max_examples=60, deadline=None)
@given(random_dfa())
def test_minimize_preserves_language_and_is_idempotent(A):
    M = am.minimize(A)
    assert am.equivalent(M, A)
    assert am.count_by_length(M, 5) == am.count_by_length(A, 5)
    assert am.minimize(M).n == M.n <= max(A.n, 1)


@settings(max_examples=60, deadline=None)
@given(random_dfa(), random_dfa())
def test_boolean_identities(A, B):
    U = am.universe(F2, 1)
    assert am.equivalent(am.complement(am.union(A, B)), am.intersect(am.complement(A), am.complement(B)))
    assert am.equivalent(am.union(am.intersect(A, B), am.difference(A, B)), A)
    assert am.equivalent(am.union(A, am.complement(A)), U)
    assert am.is_empty(am.intersect(A, am.complement(A)))


@settings(max_examples=40, deadline=None)
@given(random_dfa())
def test_json_round_trip(A):
    B = Automaton.from_json(A.to_json())
    assert am.equivalent(A, B)
    assert B.to_json() == A.to_json()


@settings(max_examples=40, deadline=None)
@given(random_dfa())
def test_prefix_closure_contains_language(A):
    P = am.prefix_closure(A)
    for w in am.enumerate_language(A, 4):
        for i in range(len(w) + 1):
            assert P.accepts(w[:i])


# -- cone languages -------------------------------------------------------------

geodesic_free = st.sampled_from(FREE.geodesic_words(3))
geodesic_fpc = st.sampled_from(FPC.geodesic_words(3))


@settings(max_examples=60, deadline=None)
@given(geodesic_free, geodesic_free)
def test_L_languages_partition_pairs_free(x, y):
    L = languages("free:2")
    n = FREE.inner(x, y)
    hits = [m for m in range(7) if L.L(m).accepts(x, y)]
    assert hits == [n]


@settings(max_examples=60, deadline=None)
@given(geodesic_fpc, geodesic_fpc)
def test_L_languages_partition_pairs_fpc(x, y):
    L = languages("fpc:2,3")
    n = FPC.inner(x, y)
    hits = [m for m in range(7) if L.L(m).accepts(x, y)]
    assert hits == [n]
