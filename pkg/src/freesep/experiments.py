"""
End-to-end checks, one per acceptance criterion.

Each ``run_*`` function returns a :class:`CriterionResult` holding the
measured values alongside the verdict.  Sizes default to the published
acceptance parameters; the tests shrink some of them for speed.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .geometry import (
    FlatSpec,
    default_defect,
    flat_certificate,
    quotient_dist_lower,
    sep_norm_bfs,
    sep_norm_lower,
    sep_norm_upper,
)
from .quasimorphism import (
    CountingQuasimorphism,
    brooks_eval,
    homogenized_eval,
    make_pk,
    pk_quasimorphism,
)
from .splitting import SplittingTHw, project_r
from .whitehead import in_cut, is_separable, omega
from .words import (
    Word,
    canonical_conjugacy_rep,
    conjugate,
    cyclic_reduce,
    enumerate_cyclically_reduced,
    enumerate_reduced,
    format_word,
    parse,
    power,
    random_reduced,
)


@dataclass
class CriterionResult:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)
    runtime: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name} ({self.runtime:.2f}s) {self.measured}"

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "measured": self.measured,
                "runtime": round(self.runtime, 3)}


def _timed(name):
    def wrap(fn):
        def run(**kw):
            t0 = time.perf_counter()
            passed, measured = fn(**kw)
            return CriterionResult(name, passed, measured, time.perf_counter() - t0)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


@_timed("delta-identity")
def run_delta_identity(ranks=(2, 3), ks=range(1, 6), rs=range(1, 51)):
    """``q_{p_k}(p_j^r) == r * delta_kj`` exactly."""
    failures = []
    checks = 0
    for n in ranks:
        qs = {k: pk_quasimorphism(n, k) for k in ks}
        for j in ks:
            p = make_pk(n, j)
            for r in rs:
                x = power(p, r)
                for k in ks:
                    checks += 1
                    v = brooks_eval(qs[k], x)
                    if v != (r if k == j else 0):
                        failures.append((n, k, j, r, v))
    return not failures, {"checks": checks, "failures": len(failures), "first": failures[:5]}


@_timed("cut-vertex-lemma")
def run_cut_vertex_lemma(max_len=10):
    """Every separable cyclically reduced word of F_2 has a cut vertex in its Whitehead graph."""
    words = separable = exceptions = 0
    first = []
    seen = {}
    for w in enumerate_cyclically_reduced(2, max_len):
        words += 1
        key = canonical_conjugacy_rep(w)
        if key not in seen:
            sep = is_separable(w)[0]
            seen[key] = (sep, in_cut(w) if sep else None)
        sep, cut = seen[key]
        if sep:
            separable += 1
            if not cut:
                exceptions += 1
                first.append(format_word(w))
    return exceptions == 0, {"words": words, "classes": len(seen), "separable": separable,
                             "exceptions": exceptions, "first": first[:5]}


@_timed("lemma-qmsep0")
def run_lemma_qmsep0(max_len=10, ks=(1, 2, 3, 4)):
    """``q~_{p_k}`` vanishes on every word whose Whitehead graph has a cut vertex.

    Both sides depend only on the cyclic core, so the cyclically reduced
    enumeration covers every reduced word of the same length.
    """
    qs = [pk_quasimorphism(2, k) for k in ks]
    words = in_cut_count = failures = 0
    first = []
    seen = set()
    for w in enumerate_cyclically_reduced(2, max_len):
        words += 1
        key = canonical_conjugacy_rep(w)
        if key in seen:
            in_cut_count += 1
            continue
        if not in_cut(w):
            continue
        seen.add(key)
        in_cut_count += 1
        for k, q in zip(ks, qs):
            v = homogenized_eval(q, w)
            if v != 0:
                failures += 1
                first.append((format_word(w), k, str(v)))
    return failures == 0, {"words": words, "in_cut": in_cut_count, "failures": failures,
                           "first": first[:5]}


@_timed("quasi-flat")
def run_quasi_flat(m=3, n=2, range_=25, samples=1000, seed=7):
    """Both sides of the quasi-flat; the additive error must not grow with the range."""
    spec = FlatSpec(m, n)
    cert = flat_certificate(spec, range_, samples, seed)
    cert2 = flat_certificate(spec, 2 * range_, samples, seed)
    bounded = cert2.max_additive_error <= cert.max_additive_error
    measured = {
        "max_additive_error": str(cert.max_additive_error),
        "max_additive_error_doubled_range": str(cert2.max_additive_error),
        "error_bounded": bounded,
        "factors_separable": cert.factors_separable,
        "lipschitz_constant": cert.lipschitz_constant,
        "upper_le_lipschitz_l1": cert.lipschitz_upper_verified,
        "upper_eq_l1": cert.upper_within_l1,
        "lower_bound_verified": cert.lower_bound_verified,
    }
    passed = (bounded and cert.factors_separable and cert.upper_within_l1
              and cert.lower_bound_verified)
    return passed, measured


@_timed("section-identity")
def run_section_identity(count=500, max_len=12, ranks=(3, 4), seed=0):
    """``r(T_{H,w}) == w`` for random ``w`` in H."""
    rng = random.Random(seed)
    failures = []
    checks = 0
    for n in ranks:
        for _ in range(count):
            h = random_reduced(n - 1, rng.randint(0, max_len), rng)
            w = Word(n, h.letters)
            checks += 1
            r = project_r(SplittingTHw(n, w))
            if format_word(r) != format_word(w):
                failures.append((n, format_word(w), format_word(r)))
    return not failures, {"checks": checks, "failures": len(failures), "first": failures[:5]}


@_timed("homogenization-limit")
def run_homogenization_limit(pairs=200, r=200, seed=0):
    """Closed-form homogenization against ``q(s^r)/r``."""
    rng = random.Random(seed)
    worst = Fraction(0)
    failures = []
    for _ in range(pairs):
        n = rng.choice((2, 3))
        pattern = random_reduced(n, rng.randint(1, 5), rng)
        s = random_reduced(n, rng.randint(1, 12), rng)
        q = CountingQuasimorphism(pattern)
        conj, _ = cyclic_reduce(s)
        exact = homogenized_eval(q, s)
        approx = Fraction(brooks_eval(q, power(s, r)), r)
        tol = Fraction(2 * (len(pattern) - 1) + 2 * len(conj), r)
        gap = abs(exact - approx)
        worst = max(worst, gap)
        if gap > tol:
            failures.append((format_word(pattern), format_word(s), str(gap), str(tol)))
    return not failures, {"pairs": pairs, "worst_gap": str(worst), "failures": len(failures),
                          "first": failures[:5]}


@_timed("norm-sandwich")
def run_norm_sandwich(max_len=6, gen_len=5, radius=4):
    """``lower <= bfs <= upper`` on every F_2 word, plus the pinned value for a^2 b^2 a."""
    checked = not_found = 0
    failures = []
    for w in enumerate_reduced(2, max_len):
        lo, up = sep_norm_lower(w), sep_norm_upper(w)[0]
        b = sep_norm_bfs(w, gen_len, radius)
        if not b.found:
            not_found += 1
            continue
        checked += 1
        if not lo <= b.distance <= up:
            failures.append((format_word(w), lo, b.distance, up))
    p1 = parse("aabba", 2)
    pinned = (sep_norm_lower(p1), sep_norm_bfs(p1, 5, 3).distance, sep_norm_upper(p1)[0])
    ok = not failures and pinned == (2, 2, 2)
    return ok, {"checked": checked, "not_found": not_found, "failures": len(failures),
                "first": failures[:5], "p1_lower_bfs_upper": list(pinned)}


@_timed("conjugation-invariance")
def run_conjugation_invariance(triples=1000, seed=0, max_r=40):
    """``q~(k s k^-1) == q~(s)``, and the quotient lower bound grows like ``r / D``."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(triples):
        n = rng.choice((2, 3))
        q = pk_quasimorphism(n, rng.randint(1, 3))
        s = random_reduced(n, rng.randint(1, 12), rng)
        k = random_reduced(n, rng.randint(0, 8), rng)
        if homogenized_eval(q, conjugate(s, k)) != homogenized_eval(q, s):
            failures += 1
    D = default_defect(2, 1).homogeneous_bound
    p1, e = make_pk(2, 1), Word.identity(2)
    values = [quotient_dist_lower(power(p1, r), e, ks=(1,)) for r in range(1, max_r + 1)]
    linear = all(v == math.ceil(Fraction(r) / D) for r, v in enumerate(values, 1))
    half = max_r // 2
    slope = Fraction(values[max_r - 1] - values[half - 1], max_r - half)
    return failures == 0 and linear and slope == 1 / D, {
        "triples": triples, "failures": failures, "defect": str(D),
        "quotient_lower": values[:10], "slope": str(slope), "expected_slope": str(1 / D),
        "matches_ceil_r_over_D": linear,
    }


def _parse_dot(text: str) -> nx.Graph:
    g = nx.Graph()
    for line in text.splitlines()[1:-1]:
        line = line.strip().rstrip(";")
        if "--" in line:
            u, v = (s.strip() for s in line.split("--"))
            g.add_edge(u, v)
        elif line:
            g.add_node(line)
    return g


def _brute_cut_vertex(g: nx.Graph) -> bool:
    if not nx.is_connected(g):
        return True
    return any(not nx.is_connected(g.subgraph(set(g) - {v})) for v in g)


@_timed("whitehead-figure")
def run_whitehead_figure(ranks=(2, 3, 4), ks=(1, 2)):
    """The DOT graph of every ``p_k`` is connected without cut vertices."""
    rows = []
    ok = True
    for n in ranks:
        for k in ks:
            g = _parse_dot(omega(make_pk(n, k)).to_dot(f"p{k}_F{n}"))
            connected = nx.is_connected(g)
            cut = _brute_cut_vertex(g)
            ok &= connected and not cut
            rows.append({"n": n, "k": k, "edges": g.number_of_edges(),
                         "connected": connected, "cut_vertex": cut})
    return ok, {"graphs": rows}


SUITES = {
    "delta-identity": run_delta_identity,
    "cut-vertex-lemma": run_cut_vertex_lemma,
    "lemma-qmsep0": run_lemma_qmsep0,
    "quasi-flat": run_quasi_flat,
    "section-identity": run_section_identity,
    "homogenization-limit": run_homogenization_limit,
    "norm-sandwich": run_norm_sandwich,
    "conjugation-invariance": run_conjugation_invariance,
    "whitehead-figure": run_whitehead_figure,
}
