"""
Brooks counting quasimorphisms and their exact homogenization.

``q_w(x)`` counts overlapping occurrences of ``w`` minus those of ``w^-1`` in
the reduced word ``x``.  The homogenization is the per-period count on the
cyclic core of ``s``, which is the exact slope of ``q_w(s^r)`` in ``r``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError, PreconditionError
from .words import Word, cyclic_reduce, enumerate_reduced, invert, multiply, power, random_reduced

DEFAULT_POWER_CAP = 10**6
DEFAULT_PAIR_BUDGET = 2 * 10**6


def _encode(t: tuple) -> str:
    # one code point per letter; injective, so substring search is exact
    return "".join(chr(0x4000 + l) for l in t)


def _count_str(pattern: str, text: str) -> int:
    n, i = 0, text.find(pattern)
    while i >= 0:
        n += 1
        i = text.find(pattern, i + 1)
    return n


def count_occurrences(pattern: Word, text: Word) -> int:
    """Starting positions where ``pattern`` matches ``text``; overlaps count.

    >>> from freesep.words import parse
    >>> count_occurrences(parse("aa", 2), parse("aaa", 2))
    2
    """
    if pattern.rank != text.rank:
        raise InvalidInputError(f"rank mismatch: {pattern.rank} vs {text.rank}")
    if not pattern.letters:
        raise InvalidInputError("empty pattern")
    return _count_str(_encode(pattern.letters), _encode(text.letters))


@dataclass(frozen=True)
class CountingQuasimorphism:
    pattern: Word

    def __post_init__(self):
        if self.pattern.is_identity():
            raise InvalidInputError("counting quasimorphism needs a nonempty pattern")

    @property
    def rank(self) -> int:
        return self.pattern.rank

    def __call__(self, x: Word) -> int:
        return brooks_eval(self, x)


def brooks_eval(q: CountingQuasimorphism, x: Word) -> int:
    return count_occurrences(q.pattern, x) - count_occurrences(invert(q.pattern), x)


def make_pk(n: int, k: int) -> Word:
    """``a_1^{k+1} a_2^{k+1} ... a_n^{k+1} a_1``."""
    if not isinstance(n, int) or n < 2:
        raise InvalidInputError(f"n must be >= 2, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k!r}")
    letters = tuple(i for i in range(1, n + 1) for _ in range(k + 1)) + (1,)
    return Word(n, letters)


def pk_quasimorphism(n: int, k: int) -> CountingQuasimorphism:
    return CountingQuasimorphism(make_pk(n, k))


def _cyclic_count(pattern: tuple, core: tuple) -> int:
    c, m = len(core), len(pattern)
    reps = (c + m - 1) // c + 1
    window = (core * reps)[: c + m - 1]
    p = _encode(pattern)
    text = _encode(window)
    return sum(1 for i in range(c) if text.startswith(p, i))


def homogenized_eval(q: CountingQuasimorphism, s: Word) -> Fraction:
    """Exact value of lim q(s^r)/r."""
    if q.rank != s.rank:
        raise InvalidInputError(f"rank mismatch: {q.rank} vs {s.rank}")
    _, core = cyclic_reduce(s)
    if not core.letters:
        return Fraction(0)
    t = core.letters
    pos = _cyclic_count(q.pattern.letters, t)
    neg = _cyclic_count(invert(q.pattern).letters, t)
    return Fraction(pos - neg)


def homogenized_limit_estimate(q: CountingQuasimorphism, s: Word, r: int,
                               cap: int = DEFAULT_POWER_CAP) -> Fraction:
    """``q(s^r) / r`` computed on the literal power; the oracle for the closed form."""
    if r < 1:
        raise InvalidInputError(f"r must be >= 1, got {r}")
    if r * len(s) > cap:
        raise PreconditionError(f"s^{r} would have more than {cap} letters")
    return Fraction(brooks_eval(q, power(s, r)), r)


@dataclass(frozen=True)
class DefectBound:
    """Largest observed defect over a search set; empirical, never certified.

    ``homogenized`` records whether the search measured ``q`` itself or its
    homogenization.
    """

    bound: Fraction
    method: str
    L_or_samples: int
    homogenized: bool = False
    witness: tuple = ()

    @property
    def homogeneous_bound(self) -> Fraction:
        # D(q~) <= 2 D(q) for any quasimorphism q
        return self.bound if self.homogenized else 2 * self.bound

    def to_dict(self) -> dict:
        return {
            "bound": str(self.bound),
            "method": self.method,
            "L_or_samples": self.L_or_samples,
            "homogenized": self.homogenized,
            "witness": [str(w) for w in self.witness],
        }


def _defect_of(f, x: Word, y: Word):
    return abs(f(multiply(x, y)) - f(x) - f(y))


def defect_search(q: CountingQuasimorphism, L: int, method: str = "exhaustive",
                  samples: int = 10000, seed: int = 0, homogenized: bool = False,
                  budget: int = DEFAULT_PAIR_BUDGET) -> DefectBound:
    """Largest ``|f(xy) - f(x) - f(y)|`` over reduced ``x, y`` with ``|x|, |y| <= L``.

    ``f`` is ``q`` or, with ``homogenized=True``, its homogenization.  In
    ``"sampled"`` mode ``samples`` random pairs are drawn with ``seed``.
    """
    if L < 1:
        raise InvalidInputError(f"L must be >= 1, got {L}")
    if homogenized:
        f = lambda x: homogenized_eval(q, x)  # noqa: E731
    else:
        f = lambda x: brooks_eval(q, x)  # noqa: E731
    best, witness = 0, ()
    if method == "exhaustive":
        words = list(enumerate_reduced(q.rank, L))
        if len(words) ** 2 > budget:
            raise PreconditionError(
                f"exhaustive search needs {len(words) ** 2} pairs, budget is {budget}"
            )
        values = {w: f(w) for w in words}
        for x, y in itertools.product(words, repeat=2):
            d = abs(f(multiply(x, y)) - values[x] - values[y])
            if d > best:
                best, witness = d, (x, y)
        count = L
    elif method == "sampled":
        rng = random.Random(seed)
        for _ in range(samples):
            x = random_reduced(q.rank, rng.randint(0, L), rng)
            y = random_reduced(q.rank, rng.randint(0, L), rng)
            d = _defect_of(f, x, y)
            if d > best:
                best, witness = d, (x, y)
        count = samples
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    return DefectBound(Fraction(best), method, count, homogenized, witness)
