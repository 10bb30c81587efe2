from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import pytest

from alcfit.cli import main
from alcfit.data import load_sample

DIMACS_SOLVER = (f"{sys.executable} "
                 f"{Path(__file__).parent.parent / 'scripts' / 'dimacs_solve.py'}")


@pytest.fixture
def contra_manifest(tmp_path):
    (tmp_path / "contra.facts").write_text("element e1\nelement e2\n",
                                           encoding="utf-8")
    manifest = tmp_path / "contra.manifest"
    manifest.write_text("facts = contra.facts\npositive = e1\nnegative = e2\n",
                        encoding="utf-8")
    return manifest


def test_fit_running_example(fig1_manifest, capsys):
    assert main(["fit", str(fig1_manifest)]) == 0
    out = capsys.readouterr().out
    assert "status: fitted" in out
    assert "size: 4" in out
    assert "coverage: 3/3" in out
    assert re.search(r"k=1 unsat vars=\d+ clauses=\d+ time=", out)
    assert re.search(r"k=4 sat", out)


def test_fit_no_fit_within_bound(fig1_manifest, capsys):
    code = main(["fit", str(fig1_manifest), "--ops", "exists,and",
                 "--max-size", "10"])
    assert code == 20
    out = capsys.readouterr().out
    assert "status: no_fit_within_bound" in out
    assert "concept:" not in out


def test_fit_approx_on_contradiction(contra_manifest, capsys):
    code = main(["fit", str(contra_manifest), "--mode", "approx",
                 "--max-size", "3"])
    assert code == 10
    out = capsys.readouterr().out
    assert "status: approximate" in out
    assert "coverage: 1/2" in out
    assert "best-coverage=1" in out


def test_fit_timeout(tmp_path, capsys):
    assert main(["gen", "hitting-set", "--sets", "1;2;3,4,5", "--k", "3",
                 "--out", str(tmp_path)]) == 0
    manifest = tmp_path / "hitting_set.manifest"
    code = main(["fit", str(manifest), "--timeout", "0.0001"])
    assert code == 30
    assert "status: timed_out" in capsys.readouterr().out


def test_fit_report_sidecar(fig1_manifest, tmp_path, capsys):
    report = tmp_path / "report.json"
    assert main(["fit", str(fig1_manifest), "--report", str(report)]) == 0
    capsys.readouterr()
    payload = json.loads(report.read_text(encoding="utf-8"))
    assert payload["status"] == "fitted"
    assert payload["size"] == 4
    assert payload["coverage"] == 3
    assert isinstance(payload["concept"], str)
    assert len(payload["per_k"]) == 4
    assert {"k", "num_vars", "num_clauses", "status", "time", "best_m"} \
        <= set(payload["per_k"][0])


def test_fit_encoding_toggles(fig1_manifest, capsys):
    code = main(["fit", str(fig1_manifest), "--no-typed", "--no-templates"])
    assert code == 0
    assert "size: 4" in capsys.readouterr().out


def test_fit_subprocess_backend(fig1_manifest, capsys):
    code = main(["fit", str(fig1_manifest), "--max-size", "5",
                 "--backend", f"dimacs:{DIMACS_SOLVER}"])
    assert code == 0
    assert "size: 4" in capsys.readouterr().out


def test_cross_validation(tmp_path, capsys):
    assert main(["gen", "random", "--out", str(tmp_path), "--elements", "8",
                 "--pos", "2", "--neg", "2", "--seed", "5"]) == 0
    manifest = tmp_path / "random.manifest"
    capsys.readouterr()
    assert main(["fit", str(manifest), "--folds", "2", "--max-size", "4"]) == 0
    out = capsys.readouterr().out
    assert out.count("fold ") == 2
    assert "folds: 2" in out
    match = re.search(r"accuracy: (\d\.\d{3})", out)
    assert match and 0.0 <= float(match.group(1)) <= 1.0


def test_cross_validation_guards(fig1_manifest, capsys):
    assert main(["fit", str(fig1_manifest), "--folds", "1"]) == 65
    assert main(["fit", str(fig1_manifest), "--folds", "5"]) == 65


def test_usage_errors(fig1_manifest):
    for argv in ([], ["frobnicate"], ["fit"],
                 ["fit", str(fig1_manifest), "--bogus"],
                 ["fit", str(fig1_manifest), "--ops", "maybe"],
                 ["fit", str(fig1_manifest), "--mode", "fast"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 64


def test_data_errors(tmp_path, capsys):
    assert main(["fit", str(tmp_path / "missing.manifest")]) == 65
    bad = tmp_path / "bad.manifest"
    bad.write_text("positive = e1\n", encoding="utf-8")
    assert main(["fit", str(bad)]) == 65
    assert "alcfit: error:" in capsys.readouterr().err


def test_verify_outputs(fig1_manifest, capsys):
    assert main(["verify", str(fig1_manifest), "forall r.(A or B)"]) == 0
    out = capsys.readouterr().out
    assert "fits: true" in out and "coverage: 3/3" in out
    assert main(["verify", str(fig1_manifest), "top"]) == 0
    out = capsys.readouterr().out
    assert "fits: false" in out
    assert "coverage: 2/3" in out
    assert "misclassified: f2:b" in out
    assert main(["verify", str(fig1_manifest), "forall r.(A or"]) == 65


def test_dualize_concept(capsys):
    assert main(["dualize", "--concept", "forall r.(A or B)"]) == 0
    assert capsys.readouterr().out.strip() == "exists r.(A and B)"
    assert main(["dualize", "--concept", "exists r.(A and B)"]) == 0
    assert capsys.readouterr().out.strip() == "forall r.(A or B)"


def test_dualize_sample(fig1_manifest, tmp_path, capsys):
    out_dir = tmp_path / "dual"
    assert main(["dualize", str(fig1_manifest), "--out", str(out_dir)]) == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("wrote ")
    original = load_sample(fig1_manifest)
    dual = load_sample(out_dir / "dual.manifest")
    assert dual.positives == original.negatives
    assert dual.negatives == original.positives
    # occurring names are complemented by default
    assert dual.interp.concept_ext["A"] == \
        original.interp.domain_set - original.interp.concept_ext["A"]


def test_dualize_signature_override(fig1_manifest, tmp_path, capsys):
    out_dir = tmp_path / "dual"
    assert main(["dualize", str(fig1_manifest), "--out", str(out_dir),
                 "--names", "A", "--stem", "partial"]) == 0
    capsys.readouterr()
    original = load_sample(fig1_manifest)
    dual = load_sample(out_dir / "partial.manifest")
    assert dual.interp.concept_ext["A"] == \
        original.interp.domain_set - original.interp.concept_ext["A"]
    assert dual.interp.concept_ext["B"] == original.interp.concept_ext["B"]


def test_dualize_argument_exclusivity(fig1_manifest, capsys):
    assert main(["dualize"]) == 65
    assert main(["dualize", str(fig1_manifest), "--concept", "top"]) == 65


def test_encode_to_file(fig1_manifest, tmp_path, capsys):
    out = tmp_path / "fig1_k4.cnf"
    code = main(["encode", str(fig1_manifest), "--max-size", "4",
                 "--emit-dimacs", str(out)])
    assert code == 0
    assert capsys.readouterr().out.startswith(f"wrote {out}:")
    text = out.read_text(encoding="utf-8")
    assert text.startswith("c 1 = x[1,")
    assert re.search(r"^p cnf \d+ \d+$", text, re.MULTILINE)


def test_encode_to_stdout(fig1_manifest, capsys):
    assert main(["encode", str(fig1_manifest), "--max-size", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("c 1 = x[1,")
    assert "\np cnf " in out
    assert main(["encode", str(fig1_manifest), "--max-size", "0"]) == 65


def test_gen_families(tmp_path, capsys):
    cases = [
        (["gen", "hitting-set", "--sets", "1,3;2,4", "--k", "2"],
         "hitting_set", 46),
        (["gen", "depth", "--n", "1"], "depth", 12),
        (["gen", "mostgeneral", "--n", "2", "--paths", "rr,ss"],
         "mostgeneral", 11),
        (["gen", "random", "--elements", "6", "--pos", "1", "--neg", "1",
          "--seed", "3"], "random", 6),
    ]
    for argv, stem, domain_size in cases:
        target = tmp_path / stem
        assert main(argv + ["--out", str(target)]) == 0
        line = capsys.readouterr().out.strip()
        manifest = target / f"{stem}.manifest"
        assert line == f"wrote {manifest}"
        sample = load_sample(manifest)
        assert len(sample.interp.domain) == domain_size
        assert json.loads(
            (target / f"{stem}.json").read_text(encoding="utf-8"))


def test_gen_depth_example_count(tmp_path, capsys):
    assert main(["gen", "depth", "--n", "1", "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    sample = load_sample(tmp_path / "depth.manifest")
    assert sample.num_examples == 4


def test_gen_is_deterministic(tmp_path, capsys):
    argv = ["gen", "random", "--elements", "7", "--seed", "11"]
    for sub in ("one", "two"):
        assert main(argv + ["--out", str(tmp_path / sub)]) == 0
    capsys.readouterr()
    for name in ("random.manifest", "random_facts.facts", "random.json"):
        assert (tmp_path / "one" / name).read_bytes() == \
            (tmp_path / "two" / name).read_bytes()


def test_gen_validation(tmp_path, capsys):
    assert main(["gen", "hitting-set", "--out", str(tmp_path)]) == 65
    assert main(["gen", "hitting-set", "--sets", "1,x", "--out",
                 str(tmp_path)]) == 65
    assert main(["gen", "mostgeneral", "--n", "1", "--out",
                 str(tmp_path)]) == 65
