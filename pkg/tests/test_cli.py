import json
from pathlib import Path

import pytest

from gentlecones.cli import main

ALG = Path(__file__).resolve().parent.parent / "algebras"
KRON = str(ALG / "kron2.json")
FINAL = str(ALG / "final_example.json")
GOLDEN = ["--algebra", KRON, "--source", "band: d ~c d ~c ~a b @ 1",
          "--target", "band: d ~c ~a b d ~c d ~c ~a b @ 1"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cone_compute_golden(capsys):
    code, out, _ = run(capsys, "cone", "compute", *GOLDEN)
    assert code == 0
    assert out.strip().endswith("B(d ~c ~a b; -1)")


def test_cone_verify_golden(capsys):
    code, out, _ = run(capsys, "cone", "verify", *GOLDEN)
    assert code == 0 and "iso: true" in out


def test_verify_json_and_jobs_agree(capsys):
    argv = ["cone", "verify", "--algebra", FINAL, "--source", "band: ~a b*c ~a b ~e d*b*c @ 36",
            "--target", "band: e ~b ~d @ 4 ; deg=-2", "--kind", "single", "--json"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv, "--jobs", "2")
    assert code1 == code2 == 0 and out1 == out2
    rows = json.loads(out1)
    assert rows and all(r["iso"] for r in rows)


def test_output_is_deterministic(capsys):
    a = run(capsys, "hom", "list", *GOLDEN, "--json")
    b = run(capsys, "hom", "list", *GOLDEN, "--json")
    assert a == b and a[0] == 0
    assert json.loads(a[1])[0]["kind"] == "graph"


def test_word_check(capsys):
    code, out, _ = run(capsys, "word", "check", "--algebra", KRON, "--string", "")
    assert code == 0 and "valid: trivial string" in out
    code, out, _ = run(capsys, "word", "check", "--algebra", KRON, "--band", "d ~c ~a b", "--scalar", "-1")
    assert code == 0 and "band of length 4" in out


def test_domain_errors_exit_one(capsys):
    code, _, err = run(capsys, "word", "check", "--algebra", KRON, "--string", "a*c")
    assert code == 1 and "IllegalJunction" in err
    code, _, err = run(capsys, "cone", "compute", "--algebra", KRON, "--source", "band: q @ 1",
                       "--target", "band: d ~c ~a b @ 1")
    assert code == 1 and "--source" in err


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["cone", "compute", "--algebra", KRON])
    assert info.value.code == 2
    code, _, _ = run(capsys, "word", "check", "--algebra", KRON, "--string", "a", "--band", "a ~b")
    assert code == 2
    code, _, _ = run(capsys, "cone", "compute", *GOLDEN, "--index", "7")
    assert code == 2


def test_algebra_validate(capsys, tmp_path):
    code, out, _ = run(capsys, "algebra", "validate", "--algebra", FINAL)
    assert code == 0 and out.startswith("valid: 4 vertices")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vertices": ["1", "2"], "arrows": [
        {"name": "a", "from": "1", "to": "2"}, {"name": "b", "from": "2", "to": "1"}]}))
    code, out, _ = run(capsys, "algebra", "validate", "--algebra", str(bad), "--json")
    assert code == 1 and json.loads(out)["violations"][0]["kind"] == "InfiniteDimensional"


def test_complex_and_diagram(capsys, tmp_path):
    code, out, _ = run(capsys, "complex", "show", "--algebra", KRON, "--word", "band: d ~c ~a b @ -1")
    assert code == 0 and "-1*d" in out
    code, out, _ = run(capsys, "complex", "show", "--algebra", KRON, "--word", "band: d ~c ~a b @ -1",
                       "--field", "cyclo", "--json")
    assert code == 0 and json.loads(out)["degrees"] == [-1, 0, 1]
    tex = tmp_path / "d.tex"
    code, out, _ = run(capsys, "diagram", "emit", "--algebra", KRON, "--word", "band: d ~c ~a b @ -1",
                       "--tikz", str(tex))
    assert code == 0 and tex.read_text().startswith(r"\begin{tikzpicture}")
