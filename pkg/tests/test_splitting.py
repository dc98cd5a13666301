import random

import pytest
from hypothesis import given

from conftest import reduced_words
from freesep.errors import InvalidInputError, PreconditionError
from freesep.folding import same_subgroup
from freesep.splitting import (
    ELLIPTIC,
    ESVertex,
    SplittingTHw,
    TreeEdge,
    axis_entry_exit,
    axis_window,
    basis_rewrite,
    coset_path,
    es_common_neighbor,
    es_vertex,
    h_vertex,
    b_vertex,
    project_r,
    same_h_coset,
    translation_length,
    verify_section,
)
from freesep.words import Word, invert, multiply, parse, random_reduced


def T3(w):
    return SplittingTHw(3, parse(w, 3))


def h_word(n, rng, max_len=12):
    return Word(n, random_reduced(n - 1, rng.randint(0, max_len), rng).letters)


def test_splitting_validation():
    with pytest.raises(InvalidInputError):
        SplittingTHw(2, parse("a", 2))
    with pytest.raises(InvalidInputError):
        T3("ac")


def test_basis_rewrite_examples(w3):
    assert basis_rewrite(w3("c"), T3("1")).to_list() == [["B", 1]]
    assert basis_rewrite(w3("c"), T3("a")).to_list() == [["H", "A"], ["B", 1]]
    assert basis_rewrite(w3("abA"), T3("ab")).to_list() == [["H", "abA"]]


@given(reduced_words(rank=3, max_len=16), reduced_words(rank=2, max_len=5))
def test_normal_form_reassembles(g, h):
    T = SplittingTHw(3, Word(3, h.letters))
    form = basis_rewrite(g, T)
    assert form.reassemble() == g
    kinds = [k for k, _ in form.syllables]
    assert all(a != b for a, b in zip(kinds, kinds[1:]))


def test_coset_path_examples(w3):
    T = T3("ab")
    assert coset_path(w3("abA"), T) == []
    b = T.b
    assert coset_path(b, T) == [TreeEdge(w3("")), TreeEdge(b)]


def _shares_vertex(e, f, T):
    return bool(set(e.endpoints(T)) & set(f.endpoints(T)))


@given(reduced_words(rank=3, max_len=14), reduced_words(rank=2, max_len=4))
def test_coset_path_is_a_path(g, h):
    T = SplittingTHw(3, Word(3, h.letters))
    path = coset_path(g, T)
    assert len(path) == 2 * len(basis_rewrite(g, T).b_syllables())
    start, end = h_vertex(Word.identity(3), T), h_vertex(g, T)
    if not path:
        assert start == end
        return
    assert start in path[0].endpoints(T)
    assert end in path[-1].endpoints(T)
    for e, f in zip(path, path[1:]):
        assert _shares_vertex(e, f, T)
    assert len(set(path)) == len(path)


@given(reduced_words(rank=3, max_len=10), reduced_words(rank=3, max_len=10))
def test_coset_equality(g, g2):
    T = T3("ab")
    assert same_h_coset(g, g2, T) == (h_vertex(g, T) == h_vertex(g2, T))


def test_b_vertex_representatives(w3):
    T = T3("ab")
    g = w3("ca")
    assert b_vertex(multiply(T.b, g), T) == b_vertex(g, T)
    assert b_vertex(multiply(invert(T.b), g), T) == b_vertex(g, T)


def test_axis_examples(w3):
    assert axis_entry_exit(T3("1")) == ELLIPTIC
    entry, exit_edge = axis_entry_exit(T3("a"))
    assert (entry, exit_edge) == (TreeEdge(w3("a")), TreeEdge(w3("")))
    entry, exit_edge = axis_entry_exit(T3("ab"))
    assert (entry, exit_edge) == (TreeEdge(w3("ab")), TreeEdge(w3("")))


def test_axis_translation():
    rng = random.Random(8)
    c = parse("c", 3)
    for _ in range(40):
        T = SplittingTHw(3, h_word(3, rng, 6))
        ell = translation_length(c, T)
        if ell == 0:
            continue
        window = axis_window(T, 6)
        assert len(window) >= 10
        for t in range(len(window) - ell):
            assert window[t].act(c) == window[t + ell]
        for e, f in zip(window, window[1:]):
            assert _shares_vertex(e, f, T)


def test_project_examples(w3):
    assert project_r(T3("1")).is_identity()
    assert project_r(T3("ab")) == w3("ab")
    assert verify_section(w3(""), 3)
    assert verify_section(w3("ab"), 3)


def test_section_identity_random():
    rng = random.Random(12)
    for n in (3, 4):
        for _ in range(100):
            w = h_word(n, rng)
            assert str(project_r(SplittingTHw(n, w))) == str(w)


def test_es_vertex_examples(w3):
    v = es_vertex(w3(""), 3)
    assert [str(x) for x in v.B_basis] == ["c"]
    v = es_vertex(w3("b"), 3)
    assert same_subgroup(3, v.A_basis, [w3("a"), w3("b")])
    assert [str(x) for x in v.B_basis] == ["bc"]
    assert [str(x) for x in es_vertex(w3("ab"), 3).B_basis] == ["abc"]
    with pytest.raises(InvalidInputError):
        es_vertex(w3("c"), 3)


def test_es_vertex_rejects_non_bases(w3):
    with pytest.raises(InvalidInputError):
        ESVertex((w3("a"),), (w3("aa"), w3("c")))


def test_common_neighbor_examples(w3):
    c = es_common_neighbor(w3("b"), w3("a"), 3)
    assert c.vertex.same_as(ESVertex((w3("b"),), (w3("a"), w3("bc"))))
    assert c.adjacent_to_w and c.adjacent_to_uw
    c = es_common_neighbor(w3(""), w3("aa"), 3)
    assert c.vertex.same_as(ESVertex((w3("b"),), (w3("a"), w3("c"))))
    with pytest.raises(PreconditionError):
        es_common_neighbor(w3("b"), w3(""), 3)
    with pytest.raises(PreconditionError):
        es_common_neighbor(w3("b"), w3("abAB"), 3)


def test_common_neighbor_is_adjacent_to_both():
    rng = random.Random(6)
    done = 0
    while done < 40:
        n = rng.choice((3, 4))
        u = h_word(n, rng, 6)
        if u.is_identity():
            continue
        w = h_word(n, rng, 6)
        try:
            c = es_common_neighbor(w, u, n)
        except PreconditionError:
            continue
        done += 1
        assert c.adjacent_to_w and c.adjacent_to_uw
