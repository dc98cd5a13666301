"""
Reduced words in the free group F_n.

A letter is a nonzero signed integer: ``i`` stands for the generator a_i and
``-i`` for its inverse.  Letters are totally ordered by ``letter_key``::

    a_1 < A_1 < a_2 < A_2 < ...

which is the order used for canonical rotations, Whitehead graph vertices
and DOT output.

>>> w = parse("aabbA", 2)
>>> w.letters
(1, 1, 2, 2, -1)
>>> str(w * ~w)
'1'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInputError

Letter = int

_TOKEN = re.compile(r"([xX])(\d+)")


def letter_key(l: Letter) -> int:
    """Position of a letter in the order a_1 < A_1 < a_2 < A_2 < ..."""
    return 2 * (l - 1) if l > 0 else 2 * (-l - 1) + 1


def key_letter(k: int) -> Letter:
    """Inverse of :func:`letter_key`."""
    i = k // 2 + 1
    return i if k % 2 == 0 else -i


def _check_rank(rank: int) -> None:
    if not isinstance(rank, int) or rank < 2:
        raise InvalidInputError(f"rank must be an integer >= 2, got {rank!r}")


def _free_reduce(letters: Iterable[Letter]) -> list:
    out: list = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return out


@dataclass(frozen=True)
class Word:
    """A freely reduced word; the empty word is the identity.

    Direct construction checks reducedness; use :func:`reduce` for raw input.
    """

    rank: int
    letters: tuple = ()

    def __post_init__(self):
        _check_rank(self.rank)
        t = self.letters
        if not isinstance(t, tuple):
            object.__setattr__(self, "letters", tuple(t))
            t = self.letters
        n = self.rank
        for l in t:
            if l == 0 or abs(l) > n:
                raise InvalidInputError(f"letter {l} out of range for rank {n}")
        for a, b in zip(t, t[1:]):
            if a == -b:
                raise InvalidInputError("letters are not freely reduced")

    @classmethod
    def _make(cls, rank: int, letters: tuple) -> "Word":
        # Trusted constructor for internal hot paths; skips validation.
        w = object.__new__(cls)
        object.__setattr__(w, "rank", rank)
        object.__setattr__(w, "letters", letters)
        return w

    @classmethod
    def identity(cls, rank: int) -> "Word":
        _check_rank(rank)
        return cls._make(rank, ())

    @classmethod
    def generator(cls, rank: int, index: int) -> "Word":
        return cls(rank, (index,))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, r: int) -> "Word":
        return power(self, r)

    def __str__(self) -> str:
        return format_word(self)

    def is_identity(self) -> bool:
        return not self.letters

    def generators_used(self) -> frozenset:
        return frozenset(abs(l) for l in self.letters)

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(letter_key(l) for l in self.letters))


@dataclass(frozen=True)
class CyclicWord:
    """A conjugacy class representative: the rotation of a cyclically
    reduced word that is smallest in the letter order."""

    rank: int
    letters: tuple = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_letters(self.letters, self.rank)

    def as_word(self) -> Word:
        return Word._make(self.rank, self.letters)


def reduce(rank: int, raw: Sequence[Letter]) -> Word:
    """Free reduction of an arbitrary letter sequence.

    >>> reduce(2, [1, 2, -2, 1]).letters
    (1, 1)
    """
    _check_rank(rank)
    for l in raw:
        if not isinstance(l, int) or l == 0 or abs(l) > rank:
            raise InvalidInputError(f"letter {l!r} out of range for rank {rank}")
    return Word._make(rank, tuple(_free_reduce(raw)))


def _same_rank(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise InvalidInputError(f"rank mismatch: {u.rank} vs {v.rank}")


def _cancel_len(left: tuple, right: tuple) -> int:
    k = 0
    m = min(len(left), len(right))
    while k < m and left[-1 - k] == -right[k]:
        k += 1
    return k


def multiply(u: Word, v: Word) -> Word:
    _same_rank(u, v)
    a, b = u.letters, v.letters
    k = _cancel_len(a, b)
    return Word._make(u.rank, a[: len(a) - k] + b[k:])


def multiply_all(rank: int, words: Iterable[Word]) -> Word:
    out: list = []
    for w in words:
        if w.rank != rank:
            raise InvalidInputError(f"rank mismatch: {rank} vs {w.rank}")
        for l in w.letters:
            if out and out[-1] == -l:
                out.pop()
            else:
                out.append(l)
    return Word._make(rank, tuple(out))


def invert_letters(t: tuple) -> tuple:
    return tuple(-l for l in reversed(t))


def invert(u: Word) -> Word:
    return Word._make(u.rank, invert_letters(u.letters))


def conjugate(u: Word, k: Word) -> Word:
    """``k u k^-1``."""
    _same_rank(u, k)
    return multiply(multiply(k, u), invert(k))


def _cyclic_split(t: tuple) -> int:
    """Number of letters peeled from each end to reach the cyclic core."""
    i, j = 0, len(t) - 1
    while i < j and t[i] == -t[j]:
        i += 1
        j -= 1
    return i


def power(u: Word, r: int) -> Word:
    """``u**r`` for any integer r, built from the cyclic decomposition."""
    if r == 0 or not u.letters:
        return Word._make(u.rank, ())
    t = u.letters if r > 0 else invert_letters(u.letters)
    r = abs(r)
    p = _cyclic_split(t)
    head, core = t[:p], t[p: len(t) - p]
    return Word._make(u.rank, head + core * r + t[len(t) - p:])


def cyclic_reduce(u: Word) -> tuple:
    """Split ``u`` as ``conjugator * core * conjugator^-1``.

    The core is returned as a plain (unrotated) cyclically reduced
    :class:`Word` so the reconstruction is literal.

    >>> c, core = cyclic_reduce(parse("bbaBB", 2))
    >>> str(c), str(core)
    ('bb', 'a')
    """
    t = u.letters
    p = _cyclic_split(t)
    return Word._make(u.rank, t[:p]), Word._make(u.rank, t[p: len(t) - p])


def is_cyclically_reduced(t: Sequence[Letter]) -> bool:
    return not t or t[0] != -t[-1]


def min_rotation(t: tuple) -> tuple:
    """Least rotation of ``t`` under the letter order (first one on ties)."""
    if len(t) < 2:
        return t
    keys = tuple(letter_key(l) for l in t)
    doubled = keys + keys
    k = len(t)
    best = min(range(k), key=lambda i: doubled[i: i + k])
    return t[best:] + t[:best]


def canonical_conjugacy_rep(u: Word) -> CyclicWord:
    """Key for the conjugacy class of ``u``.  ``[g]`` and ``[g^-1]`` stay distinct."""
    _, core = cyclic_reduce(u)
    return CyclicWord(u.rank, min_rotation(core.letters))


def cyclic_key(t: tuple) -> tuple:
    """Canonical rotation of an already cyclically reduced letter tuple."""
    return min_rotation(t)


# -- text grammar ---------------------------------------------------------

def format_letters(t: Sequence[Letter], rank: int) -> str:
    if not t:
        return "1"
    if rank <= 26:
        return "".join(chr(96 + l) if l > 0 else chr(64 - l) for l in t)
    return "".join(f"x{l}" if l > 0 else f"X{-l}" for l in t)


def format_word(w: Word) -> str:
    """Text form: ``aabbA`` for rank <= 26, ``x1x1X3`` above; identity is ``1``."""
    return format_letters(w.letters, w.rank)


def parse_letters(text: str, rank: int) -> list:
    s = "".join(text.split())
    if s in ("", "1"):
        return []
    if any(ch.isdigit() for ch in s):
        out, pos = [], 0
        for m in _TOKEN.finditer(s):
            if m.start() != pos:
                raise InvalidInputError(f"cannot parse word {text!r}")
            i = int(m.group(2))
            out.append(i if m.group(1) == "x" else -i)
            pos = m.end()
        if pos != len(s):
            raise InvalidInputError(f"cannot parse word {text!r}")
        return out
    out = []
    for ch in s:
        if "a" <= ch <= "z":
            out.append(ord(ch) - 96)
        elif "A" <= ch <= "Z":
            out.append(-(ord(ch) - 64))
        else:
            raise InvalidInputError(f"bad character {ch!r} in word {text!r}")
    return out


def parse(text: str, rank: int) -> Word:
    """Parse and freely reduce a word; raises on letters beyond ``rank``."""
    return reduce(rank, parse_letters(text, rank))


def enumerate_reduced(rank: int, max_len: int, min_len: int = 0):
    """All reduced words of length in [min_len, max_len], shortlex order."""
    letters = sorted([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)], key=letter_key)
    level = [()]
    for length in range(max_len + 1):
        if length >= min_len:
            for t in level:
                yield Word._make(rank, t)
        level = [t + (l,) for t in level for l in letters if not t or t[-1] != -l]


def enumerate_cyclically_reduced(rank: int, max_len: int, min_len: int = 1):
    for w in enumerate_reduced(rank, max_len, min_len):
        if is_cyclically_reduced(w.letters):
            yield w


def random_reduced(rank: int, length: int, rng) -> Word:
    """Uniform random reduced word of exactly ``length`` letters."""
    out: list = []
    while len(out) < length:
        l = rng.choice([i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)])
        if out and out[-1] == -l:
            continue
        out.append(l)
    return Word._make(rank, tuple(out))
