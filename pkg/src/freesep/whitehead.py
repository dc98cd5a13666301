"""
Whitehead graphs, Whitehead automorphisms and the separability decision.

Vertices of a Whitehead graph are the 2n letters, indexed by
:func:`freesep.words.letter_key` (a1=0, A1=1, a2=2, ...).  Every adjacent
pair ``l m`` of a word contributes the edge ``{l, m^-1}``.

Type II automorphisms use the multiplier/set convention ``(x, A)`` with
``x in A`` and ``x^-1 not in A``; every letter ``l`` other than ``x^{+-1}`` is
sent to::

    (x^-1 if l^-1 in A) . l . (x if l in A)

so for a generator y: ``y -> y x`` when only y is in A, ``y -> x^-1 y`` when
only y^-1 is, ``y -> x^-1 y x`` when both are.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import networkx as nx

from .errors import InvalidInputError, PreconditionError, UndecidedError
from .words import (
    CyclicWord,
    Word,
    _free_reduce,
    cyclic_reduce,
    invert,
    key_letter,
    letter_key,
    min_rotation,
    multiply,
)

DEFAULT_NODE_CAP = 10**6


def vertex_label(k: int) -> str:
    l = key_letter(k)
    return f"a{l}" if l > 0 else f"A{-l}"


@dataclass(frozen=True)
class WhiteheadGraph:
    """Simple graph on the 2n letters; edges are sorted key pairs."""

    rank: int
    edges: frozenset = field(default_factory=frozenset)

    @property
    def vertices(self) -> range:
        return range(2 * self.rank)

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def edge_labels(self) -> list:
        return [(vertex_label(u), vertex_label(v)) for u, v in self.sorted_edges()]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def is_subgraph_of(self, other: "WhiteheadGraph") -> bool:
        return self.rank == other.rank and self.edges <= other.edges

    def to_dot(self, name: str = "whitehead") -> str:
        """Byte-stable DOT text: vertices in letter order, edges sorted."""
        lines = [f'graph "{name}" {{']
        lines += [f"  {vertex_label(v)};" for v in self.vertices]
        lines += [f"  {vertex_label(u)} -- {vertex_label(v)};" for u, v in self.sorted_edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def _pair_edges(t: tuple, wrap: bool) -> set:
    edges = set()
    pairs = list(zip(t, t[1:]))
    if wrap and t:
        pairs.append((t[-1], t[0]))
    for l, m in pairs:
        u, v = letter_key(l), letter_key(-m)
        edges.add((u, v) if u < v else (v, u))
    return edges


def omega(w: Word) -> WhiteheadGraph:
    """Whitehead graph of the cyclic reduction of ``w``, wrap-around edge included.

    The identity gives the edgeless graph.
    """
    _, core = cyclic_reduce(w)
    return WhiteheadGraph(w.rank, frozenset(_pair_edges(core.letters, wrap=True)))


def omega_prime(w: Word) -> WhiteheadGraph:
    """Adjacent-pair graph of ``w`` as written: no cyclic reduction, no wrap edge."""
    return WhiteheadGraph(w.rank, frozenset(_pair_edges(w.letters, wrap=False)))


def has_cut_vertex(g: WhiteheadGraph) -> bool:
    """True if removing some vertex disconnects ``g``; a disconnected graph counts."""
    G = g.to_networkx()
    if not nx.is_connected(G):
        return True
    return any(True for _ in nx.articulation_points(G))


def in_cut(w: Word) -> bool:
    return has_cut_vertex(omega(w))


def in_cut_prime(w: Word) -> bool:
    return has_cut_vertex(omega_prime(w))


# -- automorphisms --------------------------------------------------------

@dataclass(frozen=True)
class WhiteheadAutomorphism:
    """Elementary automorphism of F_n.

    Type I: ``images[i-1]`` is the signed letter that a_i is sent to.
    Type II: ``multiplier`` x and ``subset`` A (a frozenset of letters).
    """

    rank: int
    kind: str
    images: tuple = ()
    multiplier: int = 0
    subset: frozenset = frozenset()

    def __post_init__(self):
        n = self.rank
        if self.kind == "I":
            if sorted(abs(l) for l in self.images) != list(range(1, n + 1)):
                raise InvalidInputError(f"type I images {self.images} are not a signed permutation")
        elif self.kind == "II":
            x, A = self.multiplier, self.subset
            if not all(isinstance(l, int) and l != 0 and abs(l) <= n for l in A | {x}):
                raise InvalidInputError("type II letters out of range")
            if x not in A or -x in A:
                raise InvalidInputError("type II requires x in A and x^-1 not in A")
        else:
            raise InvalidInputError(f"unknown automorphism kind {self.kind!r}")

    @classmethod
    def type_i(cls, images) -> "WhiteheadAutomorphism":
        images = tuple(images)
        return cls(len(images), "I", images=images)

    @classmethod
    def type_ii(cls, rank: int, multiplier: int, subset) -> "WhiteheadAutomorphism":
        return cls(rank, "II", multiplier=multiplier, subset=frozenset(subset))

    @classmethod
    def identity(cls, rank: int) -> "WhiteheadAutomorphism":
        return cls.type_i(range(1, rank + 1))

    def letter_image(self, l: int) -> tuple:
        if self.kind == "I":
            m = self.images[abs(l) - 1]
            return (m,) if l > 0 else (-m,)
        x, A = self.multiplier, self.subset
        if l == x or l == -x:
            return (l,)
        out = (l,)
        if -l in A:
            out = (-x,) + out
        if l in A:
            out = out + (x,)
        return out

    def generator_images(self) -> tuple:
        return tuple(Word._make(self.rank, self.letter_image(i)) for i in range(1, self.rank + 1))

    def inverse(self) -> "WhiteheadAutomorphism":
        if self.kind == "I":
            inv = [0] * self.rank
            for i, m in enumerate(self.images, start=1):
                inv[abs(m) - 1] = i if m > 0 else -i
            return WhiteheadAutomorphism(self.rank, "I", images=tuple(inv))
        x = self.multiplier
        return WhiteheadAutomorphism(
            self.rank, "II", multiplier=-x, subset=(self.subset - {x}) | {-x}
        )

    def apply_letters(self, t: tuple) -> tuple:
        return tuple(_free_reduce(m for l in t for m in self.letter_image(l)))

    def __call__(self, w: Word) -> Word:
        return apply_whitehead_automorphism(self, w)

    def describe(self) -> dict:
        if self.kind == "I":
            return {"kind": "I", "images": list(self.images)}
        return {
            "kind": "II",
            "multiplier": self.multiplier,
            "subset": sorted(self.subset, key=letter_key),
        }


def apply_whitehead_automorphism(phi: WhiteheadAutomorphism, w: Word) -> Word:
    if phi.rank != w.rank:
        raise InvalidInputError(f"rank mismatch: automorphism {phi.rank}, word {w.rank}")
    return Word._make(w.rank, phi.apply_letters(w.letters))


def apply_chain(chain, w: Word) -> Word:
    for phi in chain:
        w = apply_whitehead_automorphism(phi, w)
    return w


def apply_chain_inverse(chain, w: Word) -> Word:
    for phi in reversed(chain):
        w = apply_whitehead_automorphism(phi.inverse(), w)
    return w


@lru_cache(maxsize=None)
def type_ii_table(rank: int) -> tuple:
    """All non-trivial, non-inner type II moves in enumeration order.

    Entries are ``(x_key, a_mask, automorphism)``; ``a_mask`` is a bitmask
    over letter keys.
    """
    out = []
    nv = 2 * rank
    for xk in range(nv):
        x = key_letter(xk)
        xbar = letter_key(-x)
        others = [k for k in range(nv) if k != xk and k != xbar]
        for bits in range(1, 2 ** len(others) - 1):
            mask = 1 << xk
            members = [x]
            for j, k in enumerate(others):
                if bits >> j & 1:
                    mask |= 1 << k
                    members.append(key_letter(k))
            out.append((xk, mask, WhiteheadAutomorphism.type_ii(rank, x, members)))
    return tuple(out)


def type_i_all(rank: int):
    """Every signed permutation of the generators (n! 2^n of them)."""
    for perm in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            yield WhiteheadAutomorphism.type_i(p * s for p, s in zip(perm, signs))


def _multigraph(t: tuple, nv: int) -> list:
    c = [[0] * nv for _ in range(nv)]
    k = len(t)
    for i in range(k):
        u = letter_key(t[i])
        v = letter_key(-t[(i + 1) % k])
        c[u][v] += 1
        c[v][u] += 1
    return c


def _cut_rows(c: list, nv: int):
    # per vertex: degree and neighbour row as (mask, count) pairs
    rows = []
    for u in range(nv):
        rows.append([(v, c[u][v]) for v in range(nv) if c[u][v]])
    deg = [sum(cnt for _, cnt in r) for r in rows]
    return rows, deg


def _length_changes(t: tuple, rank: int):
    """Yield ``(delta, automorphism)`` for every table entry on cyclic word ``t``.

    delta = (edges of the cyclic multigraph crossing A) - deg(x).
    """
    nv = 2 * rank
    rows, deg = _cut_rows(_multigraph(t, nv), nv)
    for xk, mask, phi in type_ii_table(rank):
        cut = 0
        for u in range(nv):
            if mask >> u & 1:
                for v, cnt in rows[u]:
                    if not mask >> v & 1:
                        cut += cnt
        yield cut - deg[xk], phi


def cyclic_length_change(phi: WhiteheadAutomorphism, t: tuple) -> int:
    """Change in cyclic length of ``t`` under a type II move, from the graph alone."""
    nv = 2 * phi.rank
    rows, deg = _cut_rows(_multigraph(t, nv), nv)
    A = {letter_key(l) for l in phi.subset}
    cut = sum(cnt for u in A for v, cnt in rows[u] if v not in A)
    return cut - deg[letter_key(phi.multiplier)]


def apply_cyclic(phi: WhiteheadAutomorphism, t: tuple) -> tuple:
    """Image of the cyclic word ``t``, cyclically reduced (not rotated)."""
    r = phi.apply_letters(t)
    i, j = 0, len(r) - 1
    while i < j and r[i] == -r[j]:
        i += 1
        j -= 1
    return r[i: j + 1]


def whitehead_minimize(w: Word) -> tuple:
    """Greedy descent to a minimal-length element of the Aut(F_n)-orbit.

    Returns ``(minimal, chain)`` with ``chain`` the applied moves in order.
    """
    if w.is_identity():
        raise PreconditionError("cannot minimize the identity")
    _, core = cyclic_reduce(w)
    t, chain = _minimize_letters(core.letters, w.rank)
    return CyclicWord(w.rank, min_rotation(t)), chain


def _minimize_letters(t: tuple, rank: int) -> tuple:
    chain = []
    while True:
        for delta, phi in _length_changes(t, rank):
            if delta < 0:
                t2 = apply_cyclic(phi, t)
                assert len(t2) == len(t) + delta
                t = t2
                chain.append(phi)
                break
        else:
            return t, chain


def _missing_generator(t: tuple, rank: int) -> Optional[int]:
    used = {abs(l) for l in t}
    for i in range(1, rank + 1):
        if i not in used:
            return i
    return None


@dataclass(frozen=True)
class SeparabilityCertificate:
    automorphism_chain: tuple
    final_word: CyclicWord
    missing_generator: Optional[int]
    explored: int = 1

    def to_dict(self) -> dict:
        return {
            "chain": [phi.describe() for phi in self.automorphism_chain],
            "final_word": str(self.final_word),
            "missing_generator": self.missing_generator,
            "explored": self.explored,
        }


def _decide(t: tuple, rank: int, node_cap: int) -> tuple:
    t, chain = _minimize_letters(t, rank)
    start = min_rotation(t)
    j = _missing_generator(start, rank)
    if j is not None:
        return True, SeparabilityCertificate(tuple(chain), CyclicWord(rank, start), j)
    parent = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for delta, phi in _length_changes(cur, rank):
            if delta:
                continue
            nxt = min_rotation(apply_cyclic(phi, cur))
            if nxt in parent:
                continue
            parent[nxt] = (cur, phi)
            j = _missing_generator(nxt, rank)
            if j is not None:
                path = []
                node = nxt
                while parent[node] is not None:
                    node, move = parent[node]
                    path.append(move)
                full = tuple(chain) + tuple(reversed(path))
                return True, SeparabilityCertificate(full, CyclicWord(rank, nxt), j, len(parent))
            if len(parent) >= node_cap:
                raise UndecidedError(
                    f"minimal level set exceeded {node_cap} nodes", explored=len(parent)
                )
            queue.append(nxt)
    return False, SeparabilityCertificate(tuple(chain), CyclicWord(rank, start), None, len(parent))


@lru_cache(maxsize=1 << 16)
def _decide_cached(key: tuple, rank: int, node_cap: int) -> tuple:
    return _decide(key, rank, node_cap)


def is_separable(w: Word, node_cap: int = DEFAULT_NODE_CAP, use_cache: bool = True) -> tuple:
    """Decide whether ``w`` lies in a proper free factor.

    Returns ``(answer, certificate)``.  For a True answer the certificate's
    chain carries ``w`` to a conjugate of ``final_word``, which omits
    ``missing_generator`` entirely.  Raises :class:`UndecidedError` when the
    minimal level set grows past ``node_cap``.
    """
    if w.is_identity():
        raise PreconditionError("separability of the identity is not defined here")
    _, core = cyclic_reduce(w)
    if use_cache:
        return _decide_cached(min_rotation(core.letters), w.rank, node_cap)
    return _decide(core.letters, w.rank, node_cap)


def is_primitive(w: Word) -> bool:
    if w.is_identity():
        raise PreconditionError("primitivity of the identity is not defined here")
    minimal, _ = whitehead_minimize(w)
    return len(minimal) == 1


def complementary_basis(w: Word, certificate: SeparabilityCertificate) -> tuple:
    """Basis ``(y_1, ..., y_n)`` of F_n with ``w`` in ``<y_1, ..., y_{n-1}>``.

    Pulls the standard basis back through the certificate chain.
    """
    if certificate.missing_generator is None:
        raise PreconditionError("certificate does not witness separability")
    n = w.rank
    chain = certificate.automorphism_chain
    image = apply_chain(chain, w)
    conj, core = cyclic_reduce(image)
    j = _missing_generator(core.letters, n)
    if j is None:
        raise PreconditionError("certificate chain does not reach a word omitting a generator")
    order = [i for i in range(1, n + 1) if i != j] + [j]
    basis = []
    for i in order:
        g = multiply(multiply(conj, Word._make(n, (i,))), invert(conj))
        basis.append(apply_chain_inverse(chain, g))
    return tuple(basis)


def primitive_pair_factorization(w: Word) -> tuple:
    """Write a separable ``w`` as ``p * q`` with both factors primitive."""
    ok, cert = is_separable(w)
    if not ok:
        raise PreconditionError(f"{w} is not separable")
    y_last = complementary_basis(w, cert)[-1]
    return multiply(w, y_last), invert(y_last)
