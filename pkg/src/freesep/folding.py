"""
Stallings folding of finitely generated subgroups of F_n.

Used for basis recognition and subgroup equality of explicit generating
tuples.  A tuple of n words is a basis of F_n exactly when it generates
F_n (free groups of finite rank are Hopfian), and it generates F_n exactly
when the folded graph has a loop for every generator at the base vertex.
"""

from __future__ import annotations

from .words import Word


class FoldedGraph:
    """Folded core graph of ``<words>`` with base vertex 0."""

    def __init__(self, rank: int, words):
        self.rank = rank
        parent = [0]
        edges = []

        def new_vertex():
            parent.append(len(parent))
            return len(parent) - 1

        for w in words:
            if w.rank != rank:
                raise ValueError(f"rank mismatch: {rank} vs {w.rank}")
            t = w.letters
            if not t:
                continue
            prev = 0
            for i, l in enumerate(t):
                nxt = 0 if i == len(t) - 1 else new_vertex()
                if l > 0:
                    edges.append((prev, l, nxt))
                else:
                    edges.append((nxt, -l, prev))
                prev = nxt

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        changed = True
        while changed:
            changed = False
            out, into = {}, {}
            for u, l, v in edges:
                u, v = find(u), find(v)
                for table, key, target in ((out, (u, l), v), (into, (v, l), u)):
                    seen = table.get(key)
                    if seen is None:
                        table[key] = target
                    else:
                        a, b = find(seen), find(target)
                        if a != b:
                            # keep the base vertex as its own root
                            if b == find(0):
                                a, b = b, a
                            parent[b] = a
                            changed = True
        self._find = find
        self.out = {}
        for u, l, v in edges:
            u, v = find(u), find(v)
            self.out[(u, l)] = v
            self.out[(v, -l)] = u
        self.base = find(0)

    def read(self, w: Word):
        """End vertex of the path spelling ``w`` from the base, or None."""
        v = self.base
        for l in w.letters:
            v = self.out.get((v, l))
            if v is None:
                return None
        return v

    def contains(self, w: Word) -> bool:
        return self.read(w) == self.base

    def is_whole_group(self) -> bool:
        return all(self.out.get((self.base, i)) == self.base for i in range(1, self.rank + 1))


def generates(rank: int, words) -> bool:
    return FoldedGraph(rank, words).is_whole_group()


def is_basis(rank: int, words) -> bool:
    words = list(words)
    return len(words) == rank and all(words) and generates(rank, words)


def same_subgroup(rank: int, gens1, gens2) -> bool:
    g1, g2 = FoldedGraph(rank, gens1), FoldedGraph(rank, gens2)
    return all(g1.contains(w) for w in gens2) and all(g2.contains(w) for w in gens1)
