"""
Command line interface.

Every command prints one JSON document (schema 1) carrying the result and
a run manifest whose digest covers everything except wall-clock timings.
Exit codes: 0 success, 1 a suite criterion failed, 2 usage or invalid
input, 3 precondition violated, 4 undecided within budget.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import random
import sys

from . import __version__
from .errors import InvalidInputError, PreconditionError, UndecidedError
from .experiments import SUITES
from .geometry import (
    FlatSpec,
    flat_certificate,
    quotient_dist_lower,
    quotient_dist_upper,
    sep_norm_bfs,
    sep_norm_bounds,
)
from .quasimorphism import (
    CountingQuasimorphism,
    brooks_eval,
    defect_search,
    homogenized_eval,
    homogenized_limit_estimate,
    make_pk,
)
from .splitting import (
    SplittingTHw,
    axis_entry_exit,
    basis_rewrite,
    es_common_neighbor,
    es_vertex,
    project_r,
)
from .whitehead import (
    DEFAULT_NODE_CAP,
    in_cut,
    in_cut_prime,
    is_primitive,
    is_separable,
    omega,
    omega_prime,
    primitive_pair_factorization,
    whitehead_minimize,
)
from .words import (
    Word,
    canonical_conjugacy_rep,
    cyclic_reduce,
    invert,
    multiply,
    parse,
    power,
    random_reduced,
)

SCHEMA = 1
EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION, EXIT_UNDECIDED = 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _w(args, text, name="word"):
    if text is None:
        raise UsageError(f"missing --{name}")
    return parse(text, args.n)


def _digest(result) -> str:
    blob = json.dumps(result, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# -- word ---------------------------------------------------------------------

def cmd_word(args):
    op = args.op
    if op == "reduce":
        return {"word": str(_w(args, args.word))}
    if op == "mul":
        return {"word": str(multiply(_w(args, args.u, "u"), _w(args, args.v, "v")))}
    if op == "inv":
        return {"word": str(invert(_w(args, args.word)))}
    if op == "pow":
        return {"word": str(power(_w(args, args.word), args.r))}
    if op == "cycred":
        conj, core = cyclic_reduce(_w(args, args.word))
        return {"conjugator": str(conj), "core": str(core)}
    if op == "conjclass":
        return {"representative": str(canonical_conjugacy_rep(_w(args, args.word)))}
    raise UsageError(f"unknown word operation {op!r}")


# -- whitehead ----------------------------------------------------------------

def cmd_whitehead(args):
    w = _w(args, args.word)
    op = args.op
    if op == "graph":
        g = omega_prime(w) if args.prime else omega(w)
        if args.format == "dot":
            return g.to_dot(args.name)
        if args.format == "csv":
            buf = io.StringIO()
            out = csv.writer(buf, lineterminator="\n")
            out.writerow(["u", "v"])
            out.writerows(g.edge_labels())
            return buf.getvalue()
        return {"edges": [list(e) for e in g.edge_labels()], "prime": args.prime}
    if op == "cut":
        return {"in_cut": in_cut(w), "in_cut_prime": in_cut_prime(w)}
    if op == "minimize":
        minimal, chain = whitehead_minimize(w)
        return {"minimal": str(minimal), "length": len(minimal),
                "chain": [phi.describe() for phi in chain]}
    if op == "separable":
        ok, cert = is_separable(w, node_cap=args.node_cap)
        return {"separable": ok, "certificate": cert.to_dict()}
    if op == "primitive":
        return {"primitive": is_primitive(w)}
    if op == "primpair":
        p, q = primitive_pair_factorization(w)
        return {"factors": [str(p), str(q)]}
    raise UsageError(f"unknown whitehead operation {op!r}")


# -- qm -----------------------------------------------------------------------

def cmd_qm(args):
    op = args.op
    if op == "pk":
        if args.k is None:
            raise UsageError("missing --k")
        p = make_pk(args.n, args.k)
        return {"value": str(p), "method": "make_pk", "parameters": {"n": args.n, "k": args.k}}
    q = CountingQuasimorphism(_w(args, args.pattern, "pattern"))
    params = {"n": args.n, "pattern": str(q.pattern)}
    if op == "eval":
        x = _w(args, args.word)
        params["word"] = str(x)
        return {"value": brooks_eval(q, x), "method": "brooks", "parameters": params}
    if op == "homog":
        s = _w(args, args.word)
        params["word"] = str(s)
        out = {"value": str(homogenized_eval(q, s)), "method": "cyclic-count", "parameters": params}
        if args.r:
            out["limit_estimate"] = str(homogenized_limit_estimate(q, s, args.r))
            params["r"] = args.r
        return out
    if op == "defect":
        if args.len is None:
            raise UsageError("missing --len")
        d = defect_search(q, args.len, method=args.method, samples=args.samples,
                          seed=args.seed, homogenized=args.homogenized)
        params.update(len=args.len, samples=args.samples, seed=args.seed)
        return {"value": str(d.bound), "method": args.method, "parameters": params,
                "defect": d.to_dict()}
    raise UsageError(f"unknown qm operation {op!r}")


# -- norm / flat / whc ----------------------------------------------------------

def _ks_arg(text):
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad --ks {text!r}")


def cmd_norm(args):
    g = _w(args, args.word)
    if args.op == "bounds":
        return sep_norm_bounds(g, ks=_ks_arg(args.ks), bfs_genlen=args.bfs_genlen,
                               bfs_radius=args.bfs_radius).to_dict()
    if args.op == "bfs":
        r = sep_norm_bfs(g, args.bfs_genlen or 5, args.bfs_radius or 4)
        return {"distance": r.distance if r.found else "not found", "frontier": r.frontier}
    raise UsageError(f"unknown norm operation {args.op!r}")


def cmd_flat(args):
    cert = flat_certificate(FlatSpec(args.m, args.n), args.range, args.samples, args.seed)
    if args.format == "csv":
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["i", "i_prime", "upper", "lower", "l1", "error", "error_raw"])
        for i, i2, up, lo, l1, e, er in cert.report_rows:
            out.writerow([" ".join(map(str, i)), " ".join(map(str, i2)), up, lo, l1, e, er])
        return buf.getvalue()
    return cert.to_dict()


def cmd_whc(args):
    g, h = _w(args, args.g, "g"), _w(args, args.h, "h")
    return {"lower": quotient_dist_lower(g, h, ks=_ks_arg(args.ks)),
            "upper": quotient_dist_upper(g, h, args.conj_len)}


# -- split / es -----------------------------------------------------------------

def cmd_split(args):
    if args.op == "project":
        T = SplittingTHw(args.n, _w(args, args.w, "w"))
        ax = axis_entry_exit(T)
        out = {"r": str(project_r(T)), "b": str(T.b),
               "syllables_a_n": basis_rewrite(Word.generator(args.n, args.n), T).to_list()}
        if isinstance(ax, str):
            out["axis"] = ax
        else:
            out["entry"], out["exit"] = str(ax[0]), str(ax[1])
        return out
    if args.op == "verify-section":
        rng = random.Random(args.seed)
        failures = []
        for _ in range(args.count):
            h = random_reduced(args.n - 1, rng.randint(0, args.maxlen), rng)
            w = Word(args.n, h.letters)
            r = project_r(SplittingTHw(args.n, w))
            if r != w:
                failures.append({"w": str(w), "r": str(r)})
        return {"checked": args.count, "failures": failures, "passed": not failures}
    raise UsageError(f"unknown split operation {args.op!r}")


def cmd_es(args):
    w = _w(args, args.w, "w")
    if args.op == "vertex":
        return es_vertex(w, args.n).to_dict()
    if args.op == "neighbor":
        u = _w(args, args.u, "u")
        c = es_common_neighbor(w, u, args.n)
        return {"vertex": c.vertex.to_dict(), "h1": [str(x) for x in c.h1],
                "h2": [str(x) for x in c.h2], "adjacent_to_w": c.adjacent_to_w,
                "adjacent_to_uw": c.adjacent_to_uw}
    raise UsageError(f"unknown es operation {args.op!r}")


# -- suite ----------------------------------------------------------------------

def cmd_suite(args):
    names = list(SUITES) if args.name == "all" else [args.name]
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    results = [SUITES[name]() for name in names]
    for r in results:
        print(r.line(), file=sys.stderr)
    return {
        "criteria": [{"name": r.name, "passed": r.passed, "measured": r.measured} for r in results],
        "passed": all(r.passed for r in results),
        "_timing": {r.name: round(r.runtime, 3) for r in results},
    }


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="freesep", description="Separable elements and the sep-norm on free groups.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def group(name, ops, fn, help_):
        g = sub.add_parser(name, help=help_)
        g.add_argument("op", choices=ops)
        g.add_argument("--n", type=int, default=2, help="rank (default 2)")
        g.set_defaults(fn=fn)
        return g

    g = group("word", ["reduce", "mul", "inv", "pow", "cycred", "conjclass"], cmd_word,
              "word arithmetic")
    g.add_argument("--word")
    g.add_argument("--u")
    g.add_argument("--v")
    g.add_argument("--r", type=int, default=1)

    g = group("whitehead", ["graph", "cut", "minimize", "separable", "primitive", "primpair"],
              cmd_whitehead, "Whitehead graphs and algorithm")
    g.add_argument("--word")
    g.add_argument("--prime", action="store_true", help="adjacent pairs only, no wrap edge")
    g.add_argument("--format", choices=["json", "dot", "csv"], default="json")
    g.add_argument("--name", default="whitehead", help="DOT graph name")
    g.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)

    g = group("qm", ["eval", "homog", "pk", "defect"], cmd_qm, "counting quasimorphisms")
    g.add_argument("--pattern")
    g.add_argument("--word")
    g.add_argument("--k", type=int)
    g.add_argument("--r", type=int, help="also report q(s^r)/r")
    g.add_argument("--len", type=int)
    g.add_argument("--method", choices=["exhaustive", "sampled"], default="exhaustive")
    g.add_argument("--samples", type=int, default=10000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--homogenized", action="store_true")

    g = group("norm", ["bounds", "bfs"], cmd_norm, "sep-norm bounds")
    g.add_argument("--word")
    g.add_argument("--ks", help="comma separated quasimorphism indices")
    g.add_argument("--bfs-genlen", type=int)
    g.add_argument("--bfs-radius", type=int)

    g = group("flat", ["certify"], cmd_flat, "quasi-flat certificate")
    g.add_argument("--m", type=int, default=3)
    g.add_argument("--range", type=int, default=25)
    g.add_argument("--samples", type=int, default=1000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=["json", "csv"], default="json")

    g = group("whc", ["dist"], cmd_whc, "distance bounds modulo conjugation")
    g.add_argument("--g")
    g.add_argument("--h")
    g.add_argument("--ks")
    g.add_argument("--conj-len", type=int, default=1)

    g = group("split", ["project", "verify-section"], cmd_split, "one-edge splittings")
    g.add_argument("--w", default="1")
    g.add_argument("--count", type=int, default=100)
    g.add_argument("--maxlen", type=int, default=12)
    g.add_argument("--seed", type=int, default=0)

    g = group("es", ["vertex", "neighbor"], cmd_es, "edge-splitting graph")
    g.add_argument("--w", default="1")
    g.add_argument("--u")

    g = sub.add_parser("suite", help="acceptance criteria")
    g.add_argument("name", help=f"one of {', '.join(SUITES)}, or all")
    g.set_defaults(fn=cmd_suite)
    return p


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _error(code: int, kind: str, message: str) -> int:
    _emit({"schema": SCHEMA, "error": {"code": code, "type": kind, "message": message}})
    return code


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        return _error(EXIT_USAGE, "usage", str(e))
    try:
        result = args.fn(args)
    except UsageError as e:
        return _error(EXIT_USAGE, "usage", str(e))
    except InvalidInputError as e:
        return _error(EXIT_USAGE, "invalid-input", str(e))
    except PreconditionError as e:
        return _error(EXIT_PRECONDITION, "precondition", str(e))
    except UndecidedError as e:
        return _error(EXIT_UNDECIDED, "undecided", f"{e} (explored {e.explored})")
    if isinstance(result, str):
        sys.stdout.write(result)
        return 0
    timing = result.pop("_timing", None)
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("fn", "group", "op")}
    manifest = {
        "command": " ".join(x for x in (args.group, getattr(args, "op", None)) if x),
        "parameters": params,
        "seed": params.get("seed", 0),
        "tool_version": __version__,
        "results_digest": _digest(result),
    }
    doc = {"schema": SCHEMA, "result": result, "manifest": manifest}
    if timing is not None:
        doc["timing"] = timing
    _emit(doc)
    if args.group == "suite" and not result["passed"]:
        return EXIT_FAIL
    return 0


def main() -> None:
    sys.exit(run())
