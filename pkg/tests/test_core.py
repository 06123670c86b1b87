import pytest
from hypothesis import given, settings, strategies as st

from rsumset.core import (
    IntegerSet,
    ModulusError,
    Relation,
    RelationConstraint,
    ResidueSet,
    degree_profile,
    dilate,
    format_relation,
    format_set,
    is_prime,
    iterated_span,
    least_abs_residue,
    next_prime,
    parse_relation_literal,
    parse_set_literal,
    representation_counts,
    restricted_sumset,
    sumset,
)
from rsumset.constructions import construct_fp_matching

from _oracles import primes_upto, restricted

PRIMES = primes_upto(60)


@st.composite
def residue_triple(draw, max_p=31):
    p = draw(st.sampled_from([q for q in PRIMES if q <= max_p]))
    elems = st.integers(0, p - 1)
    A = draw(st.sets(elems, min_size=1, max_size=p))
    B = draw(st.sets(elems, min_size=1, max_size=p))
    pairs = [(a, b) for a in sorted(A) for b in sorted(B)]
    R = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs)))
    return p, A, B, R


@st.composite
def integer_triple(draw):
    elems = st.integers(-20, 20)
    A = draw(st.sets(elems, min_size=1, max_size=10))
    B = draw(st.sets(elems, min_size=1, max_size=10))
    pairs = [(a, b) for a in sorted(A) for b in sorted(B)]
    R = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs)))
    return A, B, R


def test_primality_helpers():
    assert [n for n in range(60) if is_prime(n)] == PRIMES
    assert next_prime(4 ** 5) == 1031
    assert next_prime(16) == 17


def test_least_abs_residue_range():
    assert least_abs_residue(50, 101) == 50
    assert least_abs_residue(51, 101) == -50
    assert least_abs_residue(5, 10) == 5
    assert least_abs_residue(-3, 7) == -3


def test_composite_modulus_rejected():
    with pytest.raises(ModulusError):
        ResidueSet.of(6, [0, 1])


def test_integer_set_must_be_sorted():
    with pytest.raises(ValueError):
        IntegerSet((2, 1))
    assert list(IntegerSet.of([3, 1, 3])) == [1, 3]


def test_sumset_examples():
    assert list(sumset(IntegerSet.of([0, 1]), IntegerSet.of([0]))) == [0, 1]
    assert list(sumset(ResidueSet.of(5, [1, 3]), ResidueSet.of(5, [1, 3]))) == [1, 2, 4]
    n = 7
    X = IntegerSet.interval(0, n - 1)
    assert list(sumset(X, X)) == list(range(2 * n - 1))


def test_sumset_of_mixed_kinds_rejected():
    with pytest.raises(TypeError):
        sumset(IntegerSet.of([0]), ResidueSet.of(5, [0]))


def test_restricted_sumset_examples():
    A = IntegerSet.of([0, 1])
    assert list(restricted_sumset(A, A, Relation())) == [0, 1, 2]
    assert list(restricted_sumset(A, A, Relation.of([(0, 0), (1, 1)]))) == [1]


def test_restricted_sumset_p23_matching():
    out = construct_fp_matching(23)
    S = out.evaluate()
    # A + A misses 14 at p = 23, so the value is 19 rather than p - 3
    assert set(range(23)) - set(S) == {2, 14, 21, 22}
    assert len(S) == 19
    assert degree_profile(out.R) == (1, 1)


def test_relation_outside_sets_rejected():
    A = IntegerSet.of([0, 1])
    with pytest.raises(ValueError):
        restricted_sumset(A, A, Relation.of([(5, 0)]))


def test_dilate_examples():
    X = ResidueSet.of(101, [1, 50])
    assert dilate(X, 1) == X
    assert list(dilate(X, 2)) == [2, 100]
    assert dilate(X, 100) == -X
    with pytest.raises(ValueError):
        dilate(X, 101)


def test_iterated_span_examples():
    B = IntegerSet.of([0, 1])
    assert iterated_span(B, 1, 0) == B
    assert list(iterated_span(B, 2, 1)) == [-1, 0, 1, 2]
    assert list(iterated_span(B, 3, 0)) == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        iterated_span(B, 0, 0)


def test_degree_profile_examples():
    assert degree_profile(Relation()) == (0, 0)
    assert degree_profile(Relation.of([(0, 0), (0, 1)])) == (2, 1)


def test_constraint_admits():
    R = Relation.of([(0, 0), (1, 0)])
    assert RelationConstraint.degree_on_b(2).admits(R)
    assert not RelationConstraint.degree_on_b(1).admits(R)
    assert not RelationConstraint.matching_b_to_a().admits(R)
    assert RelationConstraint.matching_b_to_a().admits(Relation.of([(0, 1), (1, 0)]))
    assert not RelationConstraint.matching_b_to_a().admits(Relation.of([(0, 1), (0, 0)]))


@pytest.mark.parametrize("text", ["function-b", "matching", "degree-b:3", "degree-both:2"])
def test_constraint_parse_roundtrip(text):
    assert RelationConstraint.parse(text).label() == text


@pytest.mark.parametrize("text", ["degree-b", "degree-b:x", "injective", "degree-b:0"])
def test_constraint_parse_rejects(text):
    with pytest.raises(ValueError):
        RelationConstraint.parse(text)


def test_literal_parsers():
    assert parse_set_literal(" 0, 1,4 ") == [0, 1, 4]
    assert parse_relation_literal("0:2;1:1") == [(0, 2), (1, 1)]
    R = Relation.of(parse_relation_literal("1:1;0:2"))
    assert format_relation(R) == "0:2;1:1"
    assert format_set(IntegerSet.of([4, 0])) == "0,4"
    with pytest.raises(ValueError):
        parse_set_literal("0,,1")
    with pytest.raises(ValueError):
        parse_relation_literal("0-1")


@given(residue_triple())
def test_restricted_sumset_matches_oracle_mod_p(t):
    p, A, B, R = t
    got = restricted_sumset(ResidueSet.of(p, A), ResidueSet.of(p, B), Relation.of(R))
    assert set(got) == restricted(A, B, R, p)


@given(integer_triple())
def test_restricted_sumset_matches_oracle_z(t):
    A, B, R = t
    got = restricted_sumset(IntegerSet.of(A), IntegerSet.of(B), Relation.of(R))
    assert set(got) == restricted(A, B, R)


@given(residue_triple())
def test_restricted_is_monotone_in_r(t):
    p, A, B, R = t
    X, Y = ResidueSet.of(p, A), ResidueSet.of(p, B)
    full = sumset(X, Y)
    part = restricted_sumset(X, Y, Relation.of(R))
    assert part <= full
    smaller = Relation.of(sorted(R)[: len(R) // 2])
    assert part <= restricted_sumset(X, Y, smaller)


@given(residue_triple(max_p=23), st.integers(1, 22), st.integers(0, 30), st.integers(0, 30))
def test_affine_invariance(t, u, x, y):
    p, A, B, R = t
    if u % p == 0:
        return
    X, Y = ResidueSet.of(p, A), ResidueSet.of(p, B)
    base = len(restricted_sumset(X, Y, Relation.of(R)))
    f = lambda v, s: (u * v + s) % p
    X2 = ResidueSet.of(p, (f(a, x) for a in A))
    Y2 = ResidueSet.of(p, (f(b, y) for b in B))
    R2 = Relation.of([(f(a, x), f(b, y)) for a, b in R])
    assert len(restricted_sumset(X2, Y2, R2)) == base


@given(residue_triple())
def test_representation_counts_total(t):
    p, A, B, _ = t
    X, Y = ResidueSet.of(p, A), ResidueSet.of(p, B)
    rc = representation_counts(X, Y)
    assert sum(rc.values()) == len(A) * len(B)
    assert set(rc) == set(sumset(X, Y))


@settings(max_examples=50)
@given(st.sets(st.integers(-6, 6), min_size=1, max_size=5), st.integers(0, 3), st.integers(0, 3))
def test_iterated_span_oracle(B, m, n):
    if m + n == 0:
        return
    def fold(k):
        out = {0}
        for _ in range(k):
            out = {x + b for x in out for b in B}
        return out
    expect = {x - y for x in fold(m) for y in fold(n)}
    assert set(iterated_span(IntegerSet.of(B), m, n)) == expect
