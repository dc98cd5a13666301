import json
import subprocess
import sys
from pathlib import Path

import pytest

from freesep.cli import run

GOLDEN = Path(__file__).parent / "golden"


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def call_json(capsys, *argv):
    code, out = call(capsys, *argv)
    return code, json.loads(out)


def test_whitehead_dot_matches_golden(capsys):
    code, out = call(capsys, "whitehead", "graph", "--n", "2", "--word", "aabba",
                     "--format", "dot", "--name", "p1")
    assert code == 0
    assert out == (GOLDEN / "p1_F2.dot").read_text()


def test_whitehead_csv(capsys):
    code, out = call(capsys, "whitehead", "graph", "--word", "ab", "--prime", "--format", "csv")
    assert code == 0
    assert out == "u,v\na1,A2\n"


def test_split_project(capsys):
    code, doc = call_json(capsys, "split", "project", "--n", "3", "--w", "ab")
    assert code == 0 and doc["schema"] == 1
    assert doc["result"]["r"] == "ab"
    assert (doc["result"]["entry"], doc["result"]["exit"]) == ("E.ab", "E.1")
    code, doc = call_json(capsys, "split", "project", "--n", "3", "--w", "1")
    assert doc["result"]["axis"] == "elliptic" and doc["result"]["r"] == "1"


def test_split_verify_section(capsys):
    code, doc = call_json(capsys, "split", "verify-section", "--n", "4", "--count", "50",
                          "--maxlen", "8", "--seed", "3")
    assert code == 0 and doc["result"]["passed"]


def test_word_commands(capsys):
    assert call_json(capsys, "word", "reduce", "--word", "abBa")[1]["result"] == {"word": "aa"}
    assert call_json(capsys, "word", "mul", "--u", "ab", "--v", "BA")[1]["result"] == {"word": "1"}
    assert call_json(capsys, "word", "inv", "--word", "ab")[1]["result"] == {"word": "BA"}
    assert call_json(capsys, "word", "pow", "--word", "ab", "--r", "3")[1]["result"] == {"word": "ababab"}
    doc = call_json(capsys, "word", "cycred", "--word", "bbaBB")[1]
    assert doc["result"] == {"conjugator": "bb", "core": "a"}
    doc = call_json(capsys, "word", "conjclass", "--word", "baB")[1]
    assert doc["result"] == {"representative": "a"}


def test_whitehead_commands(capsys):
    doc = call_json(capsys, "whitehead", "separable", "--word", "abab")[1]
    assert doc["result"]["separable"] is True
    assert doc["result"]["certificate"]["missing_generator"] is not None
    assert call_json(capsys, "whitehead", "primitive", "--word", "bba")[1]["result"] == {"primitive": True}
    doc = call_json(capsys, "whitehead", "cut", "--word", "aabba")[1]
    assert doc["result"] == {"in_cut": False, "in_cut_prime": False}
    doc = call_json(capsys, "whitehead", "minimize", "--word", "abab")[1]
    assert doc["result"]["length"] == 2
    doc = call_json(capsys, "whitehead", "primpair", "--word", "aa")[1]
    assert doc["result"]["factors"] == ["aab", "B"]


def test_qm_commands(capsys):
    doc = call_json(capsys, "qm", "eval", "--pattern", "aa", "--word", "aaa")[1]
    assert doc["result"]["value"] == 2 and doc["result"]["method"] == "brooks"
    doc = call_json(capsys, "qm", "homog", "--pattern", "aabba", "--word", "aabba", "--r", "50")[1]
    assert doc["result"]["value"] == "1" and doc["result"]["limit_estimate"] == "1"
    doc = call_json(capsys, "qm", "pk", "--n", "3", "--k", "1")[1]
    assert doc["result"]["value"] == "aabbcca"
    doc = call_json(capsys, "qm", "defect", "--pattern", "aabba", "--len", "3")[1]
    assert doc["result"]["value"] == "1"


def test_norm_and_whc(capsys):
    doc = call_json(capsys, "norm", "bounds", "--word", "aabba", "--bfs-genlen", "5", "--bfs-radius", "3")[1]
    r = doc["result"]
    assert (r["lower"], r["upper"], r["bfs"]["distance"], r["exact"]) == (2, 2, 2, True)
    doc = call_json(capsys, "norm", "bfs", "--word", "abab")[1]
    assert doc["result"]["distance"] == 1
    doc = call_json(capsys, "whc", "dist", "--g", "baB", "--h", "a", "--conj-len", "1")[1]
    assert doc["result"] == {"lower": 0, "upper": 0}


def test_flat_certify_json_and_csv(capsys):
    code, doc = call_json(capsys, "flat", "certify", "--m", "3", "--n", "2", "--range", "5",
                          "--samples", "20", "--seed", "7")
    assert code == 0
    assert len(doc["result"]["rows"]) == 20 and doc["manifest"]["seed"] == 7
    code, out = call(capsys, "flat", "certify", "--m", "2", "--range", "3", "--samples", "4",
                     "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "i,i_prime,upper,lower,l1,error,error_raw" and len(lines) == 5


def test_es_commands(capsys):
    doc = call_json(capsys, "es", "vertex", "--n", "3", "--w", "ab")[1]
    assert doc["result"]["B"] == ["abc"]
    doc = call_json(capsys, "es", "neighbor", "--n", "3", "--w", "b", "--u", "a")[1]
    assert doc["result"]["adjacent_to_w"] and doc["result"]["adjacent_to_uw"]


def test_manifest_is_reproducible(capsys):
    argv = ("flat", "certify", "--m", "2", "--range", "6", "--samples", "30", "--seed", "5")
    _, first = call(capsys, *argv)
    _, second = call(capsys, *argv)
    assert first == second
    doc = json.loads(first)
    assert doc["manifest"]["command"] == "flat certify"
    assert doc["manifest"]["tool_version"] == "0.1.0"
    assert len(doc["manifest"]["results_digest"]) == 64


@pytest.mark.parametrize("argv, code, kind", [
    (("bogus",), 2, "usage"),
    (("word", "reduce", "--word", "a?"), 2, "invalid-input"),
    (("word", "reduce"), 2, "usage"),
    (("whitehead", "primpair", "--word", "abAB"), 3, "precondition"),
    (("whitehead", "separable", "--word", "bbabbaaa", "--node-cap", "3"), 4, "undecided"),
    (("suite", "nope"), 2, "usage"),
    (("split", "project", "--n", "3", "--w", "c"), 2, "invalid-input"),
])
def test_error_codes(capsys, argv, code, kind):
    got, doc = call_json(capsys, *argv)
    assert got == code
    assert doc["schema"] == 1 and doc["error"]["code"] == code and doc["error"]["type"] == kind


def test_suite_runner(capsys):
    code, doc = call_json(capsys, "suite", "whitehead-figure")
    assert code == 0
    assert doc["result"]["passed"] and doc["result"]["criteria"][0]["name"] == "whitehead-figure"
    assert "whitehead-figure" in doc["timing"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "freesep", "word", "inv", "--word", "ab"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["word"] == "BA"
