import random

from freesep.folding import FoldedGraph, generates, is_basis, same_subgroup
from freesep.words import multiply, parse, random_reduced


def test_basis_examples(w3):
    assert is_basis(3, [w3("a"), w3("b"), w3("abc")])
    assert not is_basis(2, [parse("aa", 2), parse("b", 2)])
    assert not is_basis(3, [w3("a"), w3("b")])
    assert not is_basis(2, [parse("ab", 2), parse("ba", 2)])
    assert not is_basis(2, [parse("aab", 2), parse("B", 2)])
    assert is_basis(2, [parse("aab", 2), parse("a", 2)])


def test_membership(w2):
    g = FoldedGraph(2, [w2("aa"), w2("bab")])
    assert g.contains(w2("aaaa"))
    assert g.contains(w2("babAA"))
    assert not g.contains(w2("a"))
    assert not g.contains(w2("b"))
    assert g.contains(w2(""))


def test_nielsen_moves_preserve_generation():
    rng = random.Random(0)
    for _ in range(200):
        gens = [parse(c, 3) for c in "abc"]
        for _ in range(rng.randint(1, 6)):
            i, j = rng.sample(range(3), 2)
            gens[i] = multiply(gens[i], gens[j]) if rng.random() < 0.5 else multiply(gens[j], gens[i])
        assert is_basis(3, gens)
        # the new basis still contains every generator
        g = FoldedGraph(3, gens)
        assert g.is_whole_group()


def test_subgroup_equality(w2):
    assert same_subgroup(2, [w2("a"), w2("b")], [w2("ab"), w2("b")])
    assert same_subgroup(2, [w2("aa")], [w2("AA")])
    assert not same_subgroup(2, [w2("aa")], [w2("a")])


def test_contains_products_of_generators():
    rng = random.Random(1)
    for _ in range(100):
        gens = [random_reduced(2, rng.randint(1, 5), rng) for _ in range(2)]
        g = FoldedGraph(2, gens)
        w = parse("", 2)
        for _ in range(5):
            s = rng.choice(gens)
            w = multiply(w, s if rng.random() < 0.5 else s ** -1)
        assert g.contains(w)


def test_generates_identity_only():
    assert not generates(2, [parse("", 2)])
