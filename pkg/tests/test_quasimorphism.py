import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import nontrivial_words, reduced_words
from freesep.errors import InvalidInputError, PreconditionError
from freesep.quasimorphism import (
    CountingQuasimorphism,
    brooks_eval,
    count_occurrences,
    defect_search,
    homogenized_eval,
    homogenized_limit_estimate,
    make_pk,
    pk_quasimorphism,
)
from freesep.words import conjugate, cyclic_reduce, invert, parse, power


def naive_count(p, t):
    p, t = p.letters, t.letters
    return sum(1 for i in range(len(t) - len(p) + 1) if t[i:i + len(p)] == p)


def test_count_examples(w2):
    assert count_occurrences(w2("aa"), w2("aaa")) == 2
    assert count_occurrences(w2("ab"), w2("")) == 0
    assert count_occurrences(w2("aabba"), w2("aabbaaabba")) == 2


def test_count_errors(w2):
    with pytest.raises(InvalidInputError):
        count_occurrences(w2(""), w2("ab"))
    with pytest.raises(InvalidInputError):
        count_occurrences(w2("a"), parse("a", 3))


@given(nontrivial_words(max_len=4), reduced_words(max_len=30))
def test_count_matches_naive_scan(p, t):
    assert count_occurrences(p, t) == naive_count(p, t)


def test_make_pk_examples():
    assert str(make_pk(2, 1)) == "aabba"
    assert str(make_pk(2, 2)) == "aaabbba"
    assert str(make_pk(3, 1)) == "aabbcca"
    with pytest.raises(InvalidInputError):
        make_pk(1, 1)
    with pytest.raises(InvalidInputError):
        make_pk(2, 0)


def test_delta_identity_small():
    for n in (2, 3):
        for k in range(1, 4):
            for j in range(1, 4):
                for r in range(1, 8):
                    v = brooks_eval(pk_quasimorphism(n, k), power(make_pk(n, j), r))
                    assert v == (r if k == j else 0)


@settings(max_examples=300)
@given(nontrivial_words(max_len=4), reduced_words(max_len=20))
def test_antisymmetry(p, x):
    q = CountingQuasimorphism(p)
    assert brooks_eval(q, invert(x)) == -brooks_eval(q, x)


def test_homogenized_examples(w2):
    q1 = pk_quasimorphism(2, 1)
    assert homogenized_eval(q1, make_pk(2, 1)) == 1
    assert homogenized_limit_estimate(q1, make_pk(2, 1), 50) == 1
    assert homogenized_limit_estimate(q1, w2("baB"), 100) == 0
    assert homogenized_eval(q1, w2("")) == 0
    assert homogenized_limit_estimate(q1, w2(""), 10) == 0


def test_limit_estimate_guards(w2):
    q = CountingQuasimorphism(w2("ab"))
    with pytest.raises(InvalidInputError):
        homogenized_limit_estimate(q, w2("ab"), 0)
    with pytest.raises(PreconditionError):
        homogenized_limit_estimate(q, w2("ab"), 10, cap=5)


@settings(max_examples=100)
@given(nontrivial_words(max_len=5), nontrivial_words(max_len=10), st.integers(1, 6))
def test_homogenized_is_homogeneous(p, s, r):
    q = CountingQuasimorphism(p)
    assert homogenized_eval(q, power(s, r)) == r * homogenized_eval(q, s)


@settings(max_examples=100)
@given(nontrivial_words(max_len=5), nontrivial_words(max_len=10))
def test_closed_form_is_the_slope(p, s):
    # q(s^r) is affine in r once r is large enough to swamp the boundary
    q = CountingQuasimorphism(p)
    r = len(p) + 2
    slope = brooks_eval(q, power(s, r + 1)) - brooks_eval(q, power(s, r))
    assert homogenized_eval(q, s) == slope


@settings(max_examples=200)
@given(nontrivial_words(rank=3, max_len=5), reduced_words(rank=3, max_len=10),
       reduced_words(rank=3, max_len=8))
def test_homogenized_conjugation_invariant(p, s, k):
    q = CountingQuasimorphism(p)
    assert homogenized_eval(q, conjugate(s, k)) == homogenized_eval(q, s)


def test_limit_gap_within_boundary_bound():
    rng = random.Random(4)
    from freesep.words import random_reduced
    for _ in range(100):
        p = random_reduced(2, rng.randint(1, 4), rng)
        s = random_reduced(2, rng.randint(1, 10), rng)
        q = CountingQuasimorphism(p)
        conj, _ = cyclic_reduce(s)
        gap = abs(homogenized_eval(q, s) - homogenized_limit_estimate(q, s, 200))
        assert gap <= Fraction(2 * (len(p) - 1) + 2 * len(conj), 200)


def test_defect_values():
    # measured: raw q_{p_1} has defect 1 and its homogenization defect 2
    q = pk_quasimorphism(2, 1)
    raw = defect_search(q, 3)
    hom = defect_search(q, 4, homogenized=True)
    assert raw.bound == 1 and raw.homogeneous_bound == 2
    assert hom.bound == 2 and hom.homogeneous_bound == 2
    x, y = hom.witness
    from freesep.words import multiply
    assert abs(homogenized_eval(q, multiply(x, y)) - homogenized_eval(q, x) - homogenized_eval(q, y)) == 2


def test_defect_sampled_is_seeded():
    q = pk_quasimorphism(2, 1)
    a = defect_search(q, 8, method="sampled", samples=300, seed=9)
    b = defect_search(q, 8, method="sampled", samples=300, seed=9)
    assert a == b
    assert a.bound <= 2


def test_defect_guards():
    q = pk_quasimorphism(2, 1)
    with pytest.raises(InvalidInputError):
        defect_search(q, 0)
    with pytest.raises(InvalidInputError):
        defect_search(q, 2, method="guess")
    with pytest.raises(PreconditionError):
        defect_search(q, 6, budget=100)
