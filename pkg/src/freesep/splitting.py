"""
One-edge free splittings ``F_n = H * <b>`` with ``H = <a_1, ..., a_{n-1}>`` and
``b = w a_n`` for some ``w`` in H.

The Bass-Serre tree is never built.  Vertices are right cosets ``H g`` and
``B g`` (``B = <b>``), edges are ``E g`` joining ``H g`` to ``B g``, and F_n
acts on the right.  Edge stabilizers are trivial, so an edge is named by
its translate ``g`` alone.  Geodesics are read off the normal form of ``g``
in the free product ``H * <b>``.

With these conventions the axis of ``a_n`` enters the vertex ``v_H = H``
through ``E w`` and leaves through ``E``, and the projection sends
``T_{H,w}`` back to ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import InvalidInputError, PreconditionError
from .folding import is_basis, same_subgroup
from .whitehead import complementary_basis, is_separable
from .words import Word, _free_reduce, invert, invert_letters, letter_key, multiply

H_SIDE = "H"
B_SIDE = "B"


@dataclass(frozen=True)
class SplittingTHw:
    """The splitting ``H * <w a_n>``; ``w`` must avoid the letter a_n."""

    rank: int
    w: Word

    def __post_init__(self):
        if self.rank < 3:
            raise InvalidInputError(f"splittings need rank >= 3, got {self.rank}")
        if self.w.rank != self.rank:
            raise InvalidInputError(f"w has rank {self.w.rank}, expected {self.rank}")
        if self.rank in self.w.generators_used():
            raise InvalidInputError(f"w = {self.w} uses a_{self.rank}; it must lie in H")
        if not is_basis(self.rank, self.h_basis() + (self.b,)):
            raise InvalidInputError(f"H and w a_n do not form a basis for w = {self.w}")

    @property
    def b(self) -> Word:
        return multiply(self.w, Word._make(self.rank, (self.rank,)))

    def h_basis(self) -> tuple:
        return tuple(Word._make(self.rank, (i,)) for i in range(1, self.rank))

    def to_a_letters(self, t) -> Word:
        """Evaluate a word in the basis ``(a_1, ..., a_{n-1}, b)``; letter ``+-n`` is ``b``."""
        n = self.rank
        bw, bi = self.b.letters, invert_letters(self.b.letters)
        out = []
        for l in t:
            out.extend(bw if l == n else bi if l == -n else (l,))
        return Word._make(n, tuple(_free_reduce(out)))


@dataclass(frozen=True)
class SyllableForm:
    """Normal form in ``H * <b>``.

    ``syllables`` alternates ``("H", h)`` with ``h`` a nontrivial Word in H and
    ``("B", e)`` with ``e`` a nonzero exponent of ``b``.
    """

    splitting: SplittingTHw
    syllables: tuple

    def b_syllables(self) -> list:
        return [e for kind, e in self.syllables if kind == B_SIDE]

    def reassemble(self) -> Word:
        n = self.splitting.rank
        t = []
        for kind, v in self.syllables:
            t.extend(v.letters if kind == H_SIDE else (n if v > 0 else -n,) * abs(v))
        return self.splitting.to_a_letters(t)

    def to_list(self) -> list:
        return [[kind, str(v) if kind == H_SIDE else v] for kind, v in self.syllables]


def _new_basis_letters(g: Word, T: SplittingTHw) -> tuple:
    # a_n = w^-1 b
    n = T.rank
    wi = invert_letters(T.w.letters)
    out = []
    for l in g.letters:
        if l == n:
            out.extend(wi + (n,))
        elif l == -n:
            out.extend((-n,) + T.w.letters)
        else:
            out.append(l)
    return tuple(_free_reduce(out))


def _syllables_of(t: tuple, T: SplittingTHw) -> tuple:
    n = T.rank
    out = []
    for l in t:
        kind = B_SIDE if abs(l) == n else H_SIDE
        if out and out[-1][0] == kind:
            out[-1][1].append(l)
        else:
            out.append((kind, [l]))
    res = []
    for kind, run in out:
        if kind == H_SIDE:
            res.append((H_SIDE, Word._make(n, tuple(run))))
        else:
            res.append((B_SIDE, sum(1 if l > 0 else -1 for l in run)))
    return tuple(res)


def basis_rewrite(g: Word, T: SplittingTHw) -> SyllableForm:
    if g.rank != T.rank:
        raise InvalidInputError(f"rank mismatch: {g.rank} vs {T.rank}")
    return SyllableForm(T, _syllables_of(_new_basis_letters(g, T), T))


@dataclass(frozen=True)
class TreeEdge:
    """The edge ``E g``; its endpoints are ``H g`` and ``B g``."""

    translate: Word

    def act(self, g: Word) -> "TreeEdge":
        return TreeEdge(multiply(self.translate, g))

    def endpoints(self, T: SplittingTHw) -> tuple:
        return h_vertex(self.translate, T), b_vertex(self.translate, T)

    def __str__(self) -> str:
        return f"E.{self.translate}"


@dataclass(frozen=True)
class TreeVertex:
    side: str
    coset_rep: Word

    def __str__(self) -> str:
        return f"{self.side}.{self.coset_rep}"


def h_vertex(g: Word, T: SplittingTHw) -> TreeVertex:
    """``H g`` with its shortest representative: drop the longest H-prefix."""
    t, n = g.letters, T.rank
    i = 0
    while i < len(t) and abs(t[i]) != n:
        i += 1
    return TreeVertex(H_SIDE, Word._make(n, t[i:]))


def b_vertex(g: Word, T: SplittingTHw) -> TreeVertex:
    """``B g`` with its shortest representative, ties broken by letter order."""
    b = T.b
    bound = 2 * len(g) // len(b) + 2
    best = None
    for j in range(-bound, bound + 1):
        cand = multiply(b ** j, g)
        if best is None or cand.sort_key() < best.sort_key():
            best = cand
    return TreeVertex(B_SIDE, best)


def same_h_coset(g: Word, g2: Word, T: SplittingTHw) -> bool:
    """``H g == H g2`` iff ``g2 g^-1`` has no b-syllable."""
    return not basis_rewrite(multiply(g2, invert(g)), T).b_syllables()


def coset_path(g: Word, T: SplittingTHw) -> list:
    """Edges of the geodesic from ``v_H`` to ``v_H g`` in order.

    For ``g = h_0 b^{e_1} h_1 ... b^{e_k} h_k`` the path is
    ``E T_k, E S_k, E T_{k-1}, ..., E S_1`` where ``T_i`` is the suffix
    starting at ``h_i`` and ``S_i`` the suffix starting at ``b^{e_i}``.
    """
    syl = basis_rewrite(g, T).syllables
    n = T.rank
    edges = []
    suffix: list = []
    for kind, v in reversed(syl):
        if kind == H_SIDE:
            suffix = list(v.letters) + suffix
            continue
        edges.append(TreeEdge(T.to_a_letters(suffix)))
        suffix = [n if v > 0 else -n] * abs(v) + suffix
        edges.append(TreeEdge(T.to_a_letters(suffix)))
    return edges


def _cyclic_b_runs(t: tuple, n: int) -> int:
    """Number of b-runs of the cyclically reduced word ``t`` read cyclically."""
    i, j = 0, len(t) - 1
    while i < j and t[i] == -t[j]:
        i += 1
        j -= 1
    t = t[i: j + 1]
    if not t:
        return 0
    kinds = [abs(l) == n for l in t]
    if all(kinds):
        return 0
    return sum(1 for i in range(len(t)) if kinds[i] and not kinds[i - 1])


def translation_length(g: Word, T: SplittingTHw) -> int:
    """Translation length of ``g`` on the tree; zero exactly for elliptic ``g``."""
    return 2 * _cyclic_b_runs(_new_basis_letters(g, T), T.rank)


ELLIPTIC = "elliptic"
OFF_AXIS = "off-axis"


def axis_entry_exit(T: SplittingTHw) -> Union[tuple, str]:
    """Edges of ``Axis(a_n)`` at ``v_H`` as ``(entry, exit)``.

    Returns ``"elliptic"`` when ``a_n`` fixes a vertex and ``"off-axis"``
    when the axis misses ``v_H``.
    """
    an = Word._make(T.rank, (T.rank,))
    ell = translation_length(an, T)
    if ell == 0:
        return ELLIPTIC
    path = coset_path(an, T)
    if len(path) != ell:
        return OFF_AXIS
    exit_edge = path[0]
    entry_edge = path[-1].act(invert(an))
    return entry_edge, exit_edge


def project_r(T: SplittingTHw) -> Word:
    """The h in H with ``e_exit h = e_entry``; the identity if a_n is elliptic
    or its axis avoids ``v_H``."""
    res = axis_entry_exit(T)
    if isinstance(res, str):
        return Word.identity(T.rank)
    entry, exit_edge = res
    # both edges touch v_H, i.e. their translates lie in H
    for e in (entry, exit_edge):
        if T.rank in e.translate.generators_used():
            raise AssertionError(f"edge {e} is not adjacent to v_H")
    h = multiply(invert(exit_edge.translate), entry.translate)
    if T.rank in h.generators_used():
        raise AssertionError("entry and exit edges are in different H-orbits")
    return h


def axis_window(T: SplittingTHw, periods: int) -> list:
    """Consecutive axis edges covering ``periods`` translates of the base segment."""
    an = Word._make(T.rank, (T.rank,))
    seg = coset_path(an, T)
    out = []
    for j in range(periods):
        g = an ** j
        out.extend(e.act(g) for e in seg)
    return out


# -- edge-splitting graph ------------------------------------------------

@dataclass(frozen=True)
class ESVertex:
    """Unordered pair ``(A, B)`` of free factors with ``F_n = A * B``, stored by bases."""

    A_basis: tuple
    B_basis: tuple

    def __post_init__(self):
        gens = tuple(self.A_basis) + tuple(self.B_basis)
        if not self.A_basis or not self.B_basis:
            raise InvalidInputError("both factors must be non-trivial")
        rank = gens[0].rank
        if not is_basis(rank, gens):
            raise InvalidInputError("A_basis + B_basis is not a basis of F_n")

    @property
    def rank(self) -> int:
        return self.A_basis[0].rank

    def same_as(self, other: "ESVertex") -> bool:
        """Equality of the unordered pairs of subgroups (not up to conjugacy)."""
        n = self.rank
        sA, sB = self.A_basis, self.B_basis
        oA, oB = other.A_basis, other.B_basis
        return (same_subgroup(n, sA, oA) and same_subgroup(n, sB, oB)) or (
            same_subgroup(n, sA, oB) and same_subgroup(n, sB, oA)
        )

    def to_dict(self) -> dict:
        return {"A": [str(x) for x in self.A_basis], "B": [str(x) for x in self.B_basis]}


def _in_h(w: Word, n: int) -> None:
    if w.rank != n:
        raise InvalidInputError(f"word has rank {w.rank}, expected {n}")
    if n in w.generators_used():
        raise InvalidInputError(f"{w} uses a_{n}; it must lie in H")


def es_vertex(w: Word, n: int) -> ESVertex:
    """``i(w) = (H, <w a_n>)``."""
    _in_h(w, n)
    an = Word._make(n, (n,))
    return ESVertex(tuple(Word._make(n, (i,)) for i in range(1, n)), (multiply(w, an),))


def es_edge(X: ESVertex, Y: ESVertex, A, B, C) -> bool:
    """Whether ``(A, B, C)`` witnesses the edge ``(A*B, C) -- (A, B*C)`` from X to Y."""
    A, B, C = tuple(A), tuple(B), tuple(C)
    if not A or not B or not C:
        return False
    n = X.rank
    if not is_basis(n, A + B + C):
        return False
    return X.same_as(ESVertex(A + B, C)) and Y.same_as(ESVertex(A, B + C))


@dataclass(frozen=True)
class CommonNeighbor:
    vertex: ESVertex
    h1: tuple
    h2: tuple
    adjacent_to_w: bool
    adjacent_to_uw: bool


def es_common_neighbor(w: Word, u: Word, n: int) -> CommonNeighbor:
    """``(H_1, H_2 * <w a_n>)`` for a splitting ``H = H_1 * H_2`` with ``u`` in ``H_2``."""
    _in_h(w, n)
    _in_h(u, n)
    if u.is_identity():
        raise PreconditionError("u must be a non-trivial separable element of H")
    u_h = Word(n - 1, u.letters)
    ok, cert = is_separable(u_h)
    if not ok:
        raise PreconditionError(f"{u} is not separable in H")
    ys = [Word._make(n, y.letters) for y in complementary_basis(u_h, cert)]
    h2, h1 = tuple(ys[:-1]), (ys[-1],)
    an = Word._make(n, (n,))
    wa = multiply(w, an)
    uwa = multiply(u, wa)
    vertex = ESVertex(h1, h2 + (wa,))
    adj_w = es_edge(es_vertex(w, n), vertex, h1, h2, (wa,))
    adj_uw = es_edge(es_vertex(multiply(u, w), n), vertex, h1, h2, (uwa,))
    return CommonNeighbor(vertex, h1, h2, adj_w, adj_uw)


def splitting_of(v: ESVertex) -> Optional[SplittingTHw]:
    """The splitting ``T_{H,w}`` of a vertex ``(H, <w a_n>)``, when it has that shape."""
    n = v.rank
    for A, B in ((v.A_basis, v.B_basis), (v.B_basis, v.A_basis)):
        if len(B) != 1 or len(A) != n - 1:
            continue
        if not same_subgroup(n, A, [Word._make(n, (i,)) for i in range(1, n)]):
            continue
        b = B[0]
        an_inv = Word._make(n, (-n,))
        for cand in (b, invert(b)):
            w = multiply(cand, an_inv)
            if n not in w.generators_used():
                return SplittingTHw(n, w)
    return None


def verify_section(w: Word, n: int) -> bool:
    """``r(tau_BS(i(w))) == w``."""
    T = splitting_of(es_vertex(w, n))
    if T is None:
        return False
    return project_r(T) == w
