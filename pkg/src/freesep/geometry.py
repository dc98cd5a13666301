"""
The word metric on Cay(F_n, sep_n).

Upper bounds come from explicit factorizations into separable elements,
lower bounds from homogenized counting quasimorphisms that vanish on
separable elements.  If ``q~`` vanishes on every factor of a product of N
separable elements then ``|q~(g)| <= (N - 1) D(q~)``, which is the bound used
throughout.  Lower bounds are only as good as the (empirical) defect bound
they divide by.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import InvalidInputError, PreconditionError, UndecidedError
from .quasimorphism import (
    DefectBound,
    brooks_eval,
    defect_search,
    homogenized_eval,
    make_pk,
    pk_quasimorphism,
)
from .whitehead import is_separable
from .words import (
    Word,
    canonical_conjugacy_rep,
    conjugate,
    enumerate_reduced,
    invert,
    invert_letters,
    multiply,
    multiply_all,
    power,
)

DEFAULT_KS = (1, 2, 3)
FULL_DP_LENGTH = 40
DP_WINDOW = 24
DEFAULT_BALL_BUDGET = 2 * 10**6


# -- defects ----------------------------------------------------------------

@lru_cache(maxsize=None)
def default_defect(rank: int, k: int) -> DefectBound:
    """Exhaustive homogenized defect of ``q_{p_k}`` at a rank-dependent depth."""
    L = 4 if rank == 2 else 3
    return defect_search(pk_quasimorphism(rank, k), L, homogenized=True)


def _defect_for(defect, rank: int, k: int) -> DefectBound:
    if defect is None:
        return default_defect(rank, k)
    if isinstance(defect, DefectBound):
        return defect
    return defect[k]


def _ks(ks) -> tuple:
    ks = tuple(sorted(set(DEFAULT_KS if ks is None else ks)))
    if not ks or any(k < 1 for k in ks):
        raise InvalidInputError(f"quasimorphism indices must be >= 1, got {ks}")
    return ks


# -- upper bounds -----------------------------------------------------------

def _segment_separable(rank: int, t: tuple) -> bool:
    if len({abs(l) for l in t}) < rank:
        return True
    try:
        return is_separable(Word._make(rank, t))[0]
    except UndecidedError:
        return False


def sep_norm_upper(g: Word) -> tuple:
    """``(count, factors)``: a shortest split of ``g`` into contiguous separable subwords.

    Every split point is tried for words of up to 40 letters; longer words
    only try segments of at most 24 letters.  Single letters are primitive,
    so the count never exceeds ``|g|``.

    >>> from freesep.words import parse
    >>> n, fs = sep_norm_upper(parse("aabba", 2))
    >>> n, [str(f) for f in fs]
    (2, ['aa', 'bba'])
    """
    t, n = g.letters, g.rank
    L = len(t)
    if L == 0:
        return 0, []
    window = L if L <= FULL_DP_LENGTH else DP_WINDOW
    best = [0] + [L + 1] * L
    back = [0] * (L + 1)
    for j in range(1, L + 1):
        for i in range(max(0, j - window), j):
            if best[i] + 1 < best[j] and _segment_separable(n, t[i:j]):
                best[j], back[j] = best[i] + 1, i
    factors = []
    j = L
    while j > 0:
        i = back[j]
        factors.append(Word._make(n, t[i:j]))
        j = i
    factors.reverse()
    return best[L], factors


# -- lower bounds -----------------------------------------------------------

def _norm_from_value(value: Fraction, d: Fraction) -> int:
    if value == 0:
        return 0
    if d == 0:
        raise PreconditionError("defect bound is 0 but the quasimorphism does not vanish")
    return 1 + math.ceil(abs(value) / d)


def lower_bound_detail(g: Word, ks=None, defect=None) -> tuple:
    """``(bound, k, defect)`` for the best witness ``k``; ``k`` is None when all vanish."""
    best, wk, wd = 0, None, None
    for k in _ks(ks):
        d = _defect_for(defect, g.rank, k)
        v = homogenized_eval(pk_quasimorphism(g.rank, k), g)
        b = _norm_from_value(v, d.homogeneous_bound)
        if b > best:
            best, wk, wd = b, k, d
    return best, wk, wd


def sep_norm_lower(g: Word, ks=None, defect=None) -> int:
    """Lower bound on the sep-norm from ``q~_{p_k}``, ``k`` in ``ks``.

    ``defect`` is one DefectBound for every k, a mapping k -> DefectBound,
    or None for :func:`default_defect`.
    """
    return lower_bound_detail(g, ks, defect)[0]


# -- truncated BFS ----------------------------------------------------------

@lru_cache(maxsize=8)
def _generators(rank: int, gen_len: int) -> frozenset:
    return frozenset(
        w.letters for w in enumerate_reduced(rank, gen_len, 1)
        if _segment_separable(rank, w.letters)
    )


def _mul_t(a: tuple, b: tuple) -> tuple:
    k, m = 0, min(len(a), len(b))
    while k < m and a[-1 - k] == -b[k]:
        k += 1
    return a[: len(a) - k] + b[k:]


class _Balls:
    def __init__(self, rank: int, gen_len: int, budget: int):
        self.gens = _generators(rank, gen_len)
        self.balls = [frozenset([()]), frozenset([()]) | self.gens]
        self.budget = budget

    def get(self, j: int) -> Optional[frozenset]:
        while len(self.balls) <= j:
            prev = self.balls[-1]
            if len(prev) * len(self.gens) > self.budget:
                return None
            self.balls.append(frozenset(_mul_t(x, s) for x in prev for s in self.gens) | prev)
        return self.balls[j]


@lru_cache(maxsize=8)
def _balls(rank: int, gen_len: int, budget: int) -> _Balls:
    return _Balls(rank, gen_len, budget)


class _QueryBalls:
    """Balls for the short generators plus the separable subwords of one query."""

    def __init__(self, base: _Balls, extra: frozenset):
        self.base = base
        self.extra = extra - base.gens
        self.cache = {0: frozenset(), 1: self.extra}

    def get(self, j: int) -> Optional[tuple]:
        # (base ball, extra elements); the j-ball is their union
        b = self.base.get(j)
        if b is None:
            return None
        if j not in self.cache:
            prev_b, prev_x = self.base.get(j - 1), self.get(j - 1)[1]
            if (len(prev_b) + len(prev_x)) * len(self.extra) + len(prev_x) * len(self.base.gens) > self.base.budget:
                return None
            gens = self.base.gens | self.extra
            new = {_mul_t(x, s) for x in prev_b for s in self.extra}
            new |= {_mul_t(x, s) for x in prev_x for s in gens}
            self.cache[j] = frozenset(new - b) | prev_x
        return b, self.cache[j]


@dataclass(frozen=True)
class BfsResult:
    """``distance`` is None when the search ran out of budget or radius."""

    distance: Optional[int]
    frontier: int

    @property
    def found(self) -> bool:
        return self.distance is not None


def _separable_subwords(g: Word) -> frozenset:
    # the same segments sep_norm_upper considers, closed under inversion
    t, n = g.letters, g.rank
    window = len(t) if len(t) <= FULL_DP_LENGTH else DP_WINDOW
    segs = {t[i:j] for j in range(1, len(t) + 1) for i in range(max(0, j - window), j)
            if _segment_separable(n, t[i:j])}
    return frozenset(segs | {invert_letters(x) for x in segs})


def sep_norm_bfs(g: Word, gen_len: int = 5, radius: int = 4,
                 budget: int = DEFAULT_BALL_BUDGET) -> BfsResult:
    """Exact word length of ``g`` over a finite set of separable generators.

    The generators are the separable words of length <= ``gen_len`` together
    with the separable subwords of ``g``, so the result is an upper bound on
    the sep-norm and never exceeds :func:`sep_norm_upper`.  Meet in the
    middle: ``g`` is within ``d`` steps iff ``x^-1 g`` lies in the
    ``ceil(d/2)``-ball for some ``x`` in the ``floor(d/2)``-ball.  Balls that
    would exceed ``budget`` elements are not built.
    """
    if gen_len < 1 or radius < 1:
        raise InvalidInputError("gen_len and radius must be >= 1")
    t = g.letters
    if not t:
        return BfsResult(0, 1)
    base = _balls(g.rank, gen_len, budget)
    balls = _QueryBalls(base, _separable_subwords(g))
    frontier = 1
    for d in range(1, radius + 1):
        lo, hi = balls.get(d // 2), balls.get((d + 1) // 2)
        if lo is None or hi is None:
            return BfsResult(None, frontier)
        frontier = len(hi[0]) + len(hi[1])
        for part in lo:
            for x in part:
                y = _mul_t(invert_letters(x), t)
                if y in hi[0] or y in hi[1]:
                    return BfsResult(d, frontier)
    return BfsResult(None, frontier)


# -- composite --------------------------------------------------------------

@dataclass(frozen=True)
class SepNormBounds:
    lower: int
    upper: int
    factorization: tuple
    witness_k: Optional[int]
    defect_used: Optional[DefectBound]
    bfs: Optional[BfsResult] = None

    @property
    def exact(self) -> bool:
        return self.lower == self.upper or (
            self.bfs is not None and self.bfs.found and self.bfs.distance == self.lower
        )

    def to_dict(self) -> dict:
        d = {
            "lower": self.lower,
            "upper": self.upper,
            "factorization": [str(f) for f in self.factorization],
            "witness_k": self.witness_k,
            "defect_used": None if self.defect_used is None else self.defect_used.to_dict(),
            "exact": self.exact,
        }
        if self.bfs is not None:
            d["bfs"] = {"distance": self.bfs.distance, "frontier": self.bfs.frontier}
        return d


def sep_norm_bounds(g: Word, ks=None, defect=None, bfs_genlen: Optional[int] = None,
                    bfs_radius: Optional[int] = None) -> SepNormBounds:
    lower, k, d = lower_bound_detail(g, ks, defect)
    upper, factors = sep_norm_upper(g)
    bfs = None
    if bfs_genlen is not None or bfs_radius is not None:
        bfs = sep_norm_bfs(g, bfs_genlen or 5, bfs_radius or 4)
    return SepNormBounds(lower, upper, tuple(factors), k, d, bfs)


# -- the quasi-flat ---------------------------------------------------------

def _invert_matrix(M: list) -> Optional[list]:
    m = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(m)]
         for i, row in enumerate(M)]
    for c in range(m):
        p = next((r for r in range(c, m) if A[r][c] != 0), None)
        if p is None:
            return None
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(m):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[m:] for row in A]


@dataclass(frozen=True)
class FlatSpec:
    """``f(i) = p_1^{i_1} ... p_m^{i_m}`` together with the quasimorphisms
    ``q_{p_1}, ..., q_{p_m}`` and the combination making them dual to the basepoints."""

    m: int
    rank: int
    basepoints: tuple = ()
    delta: tuple = field(init=False)
    combination: tuple = field(init=False)

    def __post_init__(self):
        if self.m < 1:
            raise InvalidInputError(f"m must be >= 1, got {self.m}")
        if not self.basepoints:
            object.__setattr__(self, "basepoints", tuple(make_pk(self.rank, k) for k in range(1, self.m + 1)))
        if len(self.basepoints) != self.m:
            raise InvalidInputError(f"need {self.m} basepoints, got {len(self.basepoints)}")
        for p in self.basepoints:
            if p.rank != self.rank:
                raise InvalidInputError(f"basepoint {p} has rank {p.rank}, expected {self.rank}")
        M = [[homogenized_eval(pk_quasimorphism(self.rank, k), p) for p in self.basepoints]
             for k in range(1, self.m + 1)]
        C = _invert_matrix(M)
        if C is None:
            raise InvalidInputError("the matrix q~_k(p_j) is singular for these basepoints")
        object.__setattr__(self, "delta", tuple(tuple(r) for r in M))
        object.__setattr__(self, "combination", tuple(tuple(r) for r in C))

    def is_dual(self) -> bool:
        return all(self.delta[k][j] == (k == j) for k in range(self.m) for j in range(self.m))

    def quasimorphisms(self) -> list:
        return [pk_quasimorphism(self.rank, k) for k in range(1, self.m + 1)]

    def adjusted_values(self, g: Word, homogenized: bool = True) -> list:
        """``q'_k(g) = sum_l C_kl q_l(g)``, dual to the basepoints."""
        f = homogenized_eval if homogenized else brooks_eval
        raw = [Fraction(f(q, g)) for q in self.quasimorphisms()]
        return [sum((c * v for c, v in zip(row, raw)), Fraction(0)) for row in self.combination]

    def adjusted_defects(self, defect=None) -> list:
        ds = [_defect_for(defect, self.rank, k).homogeneous_bound for k in range(1, self.m + 1)]
        return [sum((abs(c) * d for c, d in zip(row, ds)), Fraction(0)) for row in self.combination]


def flat_point(spec: FlatSpec, exponents) -> Word:
    exponents = tuple(exponents)
    if len(exponents) != spec.m:
        raise InvalidInputError(f"need {spec.m} exponents, got {len(exponents)}")
    return multiply_all(spec.rank, (power(p, e) for p, e in zip(spec.basepoints, exponents)))


@lru_cache(maxsize=64)
def _basepoint_split(p: Word) -> tuple:
    return tuple(sep_norm_upper(p)[1])


def _flat_blocks(spec: FlatSpec, i: tuple, i2: tuple) -> list:
    # f(i) f(i')^-1 = B_m ... B_1 with B_k = X p_k^{d_k} X^-1, X = p_1^{i_1} ... p_{k-1}^{i_{k-1}}
    blocks = []
    X = Word.identity(spec.rank)
    for k in range(spec.m):
        d = i[k] - i2[k]
        blocks.append((X, k, d))
        X = multiply(X, power(spec.basepoints[k], i[k]))
    blocks.reverse()
    return blocks


def _unit_factors(spec: FlatSpec, X: Word, k: int, sign: int) -> list:
    parts = _basepoint_split(spec.basepoints[k])
    if sign < 0:
        parts = tuple(invert(s) for s in reversed(parts))
    return [conjugate(s, X) for s in parts]


def flat_factorization(spec: FlatSpec, i, i2) -> list:
    """Separable factors of ``f(i) f(i')^-1``; each is a conjugate of a piece of some ``p_k^{+-1}``."""
    out = []
    for X, k, d in _flat_blocks(spec, tuple(i), tuple(i2)):
        unit = _unit_factors(spec, X, k, 1 if d > 0 else -1)
        out.extend(unit * abs(d))
    return out


@dataclass(frozen=True)
class FlatCertificate:
    sample_count: int
    seed: int
    range: int
    m: int
    rank: int
    max_additive_error: Fraction
    max_additive_error_raw: Fraction
    lipschitz_constant: int
    lipschitz_upper_verified: bool
    upper_within_l1: bool
    lower_bound_verified: bool
    lower_slope: Fraction
    factors_separable: bool
    defects: tuple
    report_rows: tuple

    def to_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "seed": self.seed,
            "range": self.range,
            "m": self.m,
            "rank": self.rank,
            "max_additive_error": str(self.max_additive_error),
            "max_additive_error_raw": str(self.max_additive_error_raw),
            "lipschitz_constant": self.lipschitz_constant,
            "lipschitz_upper_verified": self.lipschitz_upper_verified,
            "upper_within_l1": self.upper_within_l1,
            "lower_bound_verified": self.lower_bound_verified,
            "lower_slope": str(self.lower_slope),
            "factors_separable": self.factors_separable,
            "defects": [str(d) for d in self.defects],
            "rows": [
                {"i": list(r[0]), "i_prime": list(r[1]), "upper": r[2], "lower": r[3],
                 "l1": r[4], "error": str(r[5]), "error_raw": str(r[6])}
                for r in self.report_rows
            ],
        }


def flat_certificate(spec: FlatSpec, range_: int, samples: int, seed: int,
                     defect=None) -> FlatCertificate:
    """Sample pairs in ``[-range, range]^m`` and certify both sides of the quasi-flat.

    Upper side: ``f(i) f(i')^-1`` is rebuilt block by block from the explicit
    separable factors, and every distinct factor is checked with
    :func:`is_separable`.  Lower side: the adjusted quasimorphisms are
    compared with ``i - i'``.
    """
    if range_ < 1 or samples < 1:
        raise InvalidInputError("range and samples must be >= 1")
    rng = random.Random(seed)
    n, m = spec.rank, spec.m
    lip = max(len(_basepoint_split(p)) for p in spec.basepoints)
    dprime = spec.adjusted_defects(defect)
    checked: dict = {}

    def separable(w: Word) -> bool:
        key = canonical_conjugacy_rep(w)
        if key not in checked:
            try:
                checked[key] = is_separable(w)[0]
            except UndecidedError:
                checked[key] = False
        return checked[key]

    rows = []
    err_max = err_raw_max = Fraction(0)
    lip_ok = within = lower_ok = seps_ok = True
    for _ in range(samples):
        i = tuple(rng.randint(-range_, range_) for _ in range(m))
        i2 = tuple(rng.randint(-range_, range_) for _ in range(m))
        g = multiply(flat_point(spec, i), invert(flat_point(spec, i2)))
        diff = [a - b for a, b in zip(i, i2)]
        l1 = sum(abs(x) for x in diff)

        count, products = 0, []
        for X, k, d in _flat_blocks(spec, i, i2):
            unit = _unit_factors(spec, X, k, 1 if d > 0 else -1)
            if d:
                seps_ok &= all(separable(s) for s in unit)
                u = multiply_all(n, unit)
                if u != conjugate(power(spec.basepoints[k], 1 if d > 0 else -1), X):
                    lip_ok = False
                products.append(power(u, abs(d)))
                count += len(unit) * abs(d)
        if multiply_all(n, products) != g:
            lip_ok = False
        lip_ok &= count <= lip * l1
        within &= count <= l1

        vals = spec.adjusted_values(g)
        raw = spec.adjusted_values(g, homogenized=False)
        err = max(abs(v - x) for v, x in zip(vals, diff))
        err_raw = max(abs(v - x) for v, x in zip(raw, diff))
        err_max, err_raw_max = max(err_max, err), max(err_raw_max, err_raw)
        lower = max(_norm_from_value(v, d) for v, d in zip(vals, dprime))
        lower_ok &= max(abs(v) for v in vals) >= Fraction(l1, m) - err
        lower_ok &= lower <= count
        rows.append((i, i2, count, lower, l1, err, err_raw))

    return FlatCertificate(
        sample_count=samples, seed=seed, range=range_, m=m, rank=n,
        max_additive_error=err_max, max_additive_error_raw=err_raw_max,
        lipschitz_constant=lip, lipschitz_upper_verified=lip_ok and seps_ok,
        upper_within_l1=within, lower_bound_verified=lower_ok,
        lower_slope=Fraction(1, m), factors_separable=seps_ok,
        defects=tuple(dprime), report_rows=tuple(rows),
    )


# -- the quotient by inner automorphisms ------------------------------------

def quotient_dist_lower(g: Word, h: Word, ks=None, defect=None) -> int:
    """Lower bound on ``min_k |g (k^-1 h k)^-1|`` in the sep-norm.

    ``q~`` is conjugation invariant, so ``|q~(g) - q~(h)| <= N D(q~)`` for
    any product of N separable elements equal to ``g (k^-1 h k)^-1``.
    """
    if g.rank != h.rank:
        raise InvalidInputError(f"rank mismatch: {g.rank} vs {h.rank}")
    if canonical_conjugacy_rep(g) == canonical_conjugacy_rep(h):
        return 0
    best = 0
    for k in _ks(ks):
        q = pk_quasimorphism(g.rank, k)
        diff = homogenized_eval(q, g) - homogenized_eval(q, h)
        if diff == 0:
            continue
        d = _defect_for(defect, g.rank, k).homogeneous_bound
        if d == 0:
            raise PreconditionError("defect bound is 0 but the quasimorphism does not vanish")
        best = max(best, math.ceil(abs(diff) / d))
    return best


def quotient_dist_upper(g: Word, h: Word, conj_len: int = 1) -> int:
    if g.rank != h.rank:
        raise InvalidInputError(f"rank mismatch: {g.rank} vs {h.rank}")
    if conj_len < 0:
        raise InvalidInputError("conj_len must be >= 0")
    if canonical_conjugacy_rep(g) == canonical_conjugacy_rep(h):
        return 0
    best = None
    for k in enumerate_reduced(g.rank, conj_len):
        v = sep_norm_upper(multiply(g, invert(conjugate(h, k))))[0]
        if best is None or v < best:
            best = v
    return best
