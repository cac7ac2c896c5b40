import io
import json

import pytest

from prym_census.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write_matrix(tmp_path, rows, name="m.json"):
    p = tmp_path / name
    p.write_text(json.dumps({"rows": len(rows), "cols": len(rows[0]) if rows else 0,
                             "entries": rows}))
    return str(p)


@pytest.fixture(autouse=True)
def _no_env_seed(monkeypatch):
    monkeypatch.delenv("PRYM_CENSUS_SEED", raising=False)


def test_components_sign1(tmp_path):
    code, out, _ = run("components", "--matrix", write_matrix(tmp_path, [[-1]]))
    doc = json.loads(out)
    assert code == 0
    assert doc["schema_version"] == 1 and doc["command"] == "components"
    assert doc["component_count"] == 2
    assert (doc["n_trivial"], doc["n_sign"], doc["n_perm"]) == (0, 1, 0)
    assert doc["representatives"][0] == {"numerator": [0], "denominator": 2}


def test_components_witness_and_oracle(tmp_path):
    path = write_matrix(tmp_path, [[0, 1, 0], [1, 0, 0], [0, 0, -1]])
    code, out, _ = run("components", "--matrix", path, "--witness", "--oracle")
    doc = json.loads(out)
    assert code == 0
    assert doc["oracle_count"] == doc["component_count"] == 2
    assert doc["witness"]["rows"] == 3


def test_components_not_involution(tmp_path):
    code, out, err = run("components", "--matrix", write_matrix(tmp_path, [[2]]))
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "NotAnInvolution"


def test_float_entry_rejected_with_offset(tmp_path):
    p = tmp_path / "f.json"
    text = '{"rows": 1, "cols": 1, "entries": [[1.5]]}'
    p.write_text(text)
    code, _, err = run("components", "--matrix", str(p))
    doc = json.loads(err)
    assert code == 2 and doc["error"] == "MalformedInput"
    assert doc["offset"] == text.index("1.5")


def test_broken_json(tmp_path):
    p = tmp_path / "b.json"
    p.write_text('{"rows": 1,')
    code, _, err = run("components", "--matrix", str(p))
    assert code == 2 and json.loads(err)["offset"] is not None


def test_missing_file(tmp_path):
    code, _, err = run("components", "--matrix", str(tmp_path / "nope.json"))
    assert code == 2


def test_shape_mismatch(tmp_path):
    p = tmp_path / "s.json"
    p.write_text('{"rows": 2, "cols": 2, "entries": [[1, 0]]}')
    assert run("components", "--matrix", str(p))[0] == 2


def test_pairing_standard(tmp_path):
    path = write_matrix(tmp_path, [[-1, 0], [0, -1]])
    code, out, _ = run("pairing", "--matrix", path)
    doc = json.loads(out)
    assert code == 0 and doc["perfect"]
    assert doc["gram_mod2"] == [[1, 0], [0, 1]]
    assert doc["rank_L"] == doc["rank_dual"] == 2
    assert doc["unpaired_class"] is None


def test_pairing_contragredient(tmp_path):
    T = write_matrix(tmp_path, [[0, 1], [1, 0]], "t.json")
    P = write_matrix(tmp_path, [[1, 1], [0, 1]], "p.json")
    code, out, _ = run("pairing", "--matrix", T, "--pairing", P)
    assert code == 0 and json.loads(out)["perfect"]


def test_pairing_adjointness_violation(tmp_path):
    T = write_matrix(tmp_path, [[0, 1], [1, 0]], "t.json")
    D = write_matrix(tmp_path, [[1, 0], [0, -1]], "d.json")
    code, _, err = run("pairing", "--matrix", T, "--dual", D)
    assert code == 1 and json.loads(err)["error"] == "AdjointnessViolation"


def test_spectral(tmp_path):
    emit = tmp_path / "mats.json"
    code, out, _ = run("spectral", "--g", "3", "--k", "2", "--ell", "1",
                       "--emit-matrices", str(emit))
    doc = json.loads(out)
    assert code == 0
    assert doc["rank"] == 18 and doc["jacobian"] == 2
    assert doc["closed_forms"] == {"jacobian": 2, "sl2": 4, "pgl2": 4}
    # the constructed lattice gives 2^(k-1)
    assert doc["sl2"] == doc["pgl2"] == 2
    assert doc["closed_forms_match"] is False
    assert all(doc["checks"].values())
    mats = json.loads(emit.read_text())
    assert len(mats["basis_labels"]) == 18 and mats["basis_labels"][0] == "alpha(1,id)"
    assert mats["I"]["rows"] == mats["Tau"]["cols"] == 18


def test_spectral_invalid_curve():
    code, _, err = run("spectral", "--g", "3", "--k", "1", "--ell", "1")
    assert code == 1 and json.loads(err)["error"] == "InvalidCurveData"


def test_rank_guard():
    code, _, err = run("spectral", "--g", "9", "--k", "2", "--ell", "1",
                       "--rank-guard", "10")
    assert code == 1 and json.loads(err)["error"] == "RankGuardExceeded"


def test_census_k2():
    code, out, _ = run("census", "--k", "2")
    doc = json.loads(out)
    assert code == 0
    assert (doc["sl2"], doc["pgl2"]) == (3, 5)
    assert doc["pgl2_routes"] == {"enumeration": 5, "recursion": 5, "closed_form": 5}
    assert doc["recursion_trace"] == [2, 5]
    assert "sl2_note" in doc and "discrepancy_note" in doc


def test_census_paradox():
    code, out, _ = run("census", "--k", "2", "--ell", "1", "--g", "3")
    doc = json.loads(out)
    assert doc["fiber_compatible"]["pre_parity"] == 4
    assert doc["paradox"]["pgl2_global_exceeds_fiber"] is True


def test_census_table():
    code, out, _ = run("census", "--max-k", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0].split() == ["k", "sl2", "pgl2", "recursion_trace"]
    assert lines[4].split() == ["4", "9", "41", "2,5,14,41"]


def test_census_sweep_json():
    code, out, _ = run("census", "--max-k", "3", "--format", "json")
    assert [r["pgl2"] for r in json.loads(out)["rows"]] == [2, 5, 14]


def test_census_k_guard():
    code, _, err = run("census", "--k", "25")
    assert code == 1 and json.loads(err)["error"] == "RankGuardExceeded"


def test_census_needs_k():
    assert run("census")[0] == 2


def test_sweep_jobs_match_serial():
    a = run("sweep", "--g-min", "3", "--g-max", "4")
    b = run("sweep", "--g-min", "3", "--g-max", "4", "--jobs", "2")
    assert a[0] == b[0] == 0 and a[1] == b[1]
    rows = json.loads(a[1])["rows"]
    assert [(r["g"], r["k"], r["ell"]) for r in rows][:2] == [(3, 2, 1), (3, 4, 1)]


def test_output_file(tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run("census", "--k", "1", "--output", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["pgl2"] == 2


def test_env_seed(monkeypatch):
    monkeypatch.setenv("PRYM_CENSUS_SEED", "7")
    code, out, _ = run("selftest", "--g-max", "3", "--k-guard", "4")
    assert json.loads(out)["seed"] == 7
    monkeypatch.setenv("PRYM_CENSUS_SEED", "x")
    assert run("selftest")[0] == 2


def test_selftest_report_shape():
    code, out, _ = run("selftest", "--g-max", "4", "--k-guard", "6", "--seed", "3")
    doc = json.loads(out)
    names = [s["suite"] for s in doc["suites"]]
    assert names == ["exact-linalg", "involution-lattice", "duality",
                     "spectral-homology", "spectral-closed-forms", "moduli-census"]
    status = {s["suite"]: s["passed"] for s in doc["suites"]}
    assert not status.pop("spectral-closed-forms")
    assert all(status.values())
    assert code == 1 and doc["passed"] is False


def test_selftest_byte_identical():
    a = run("selftest", "--g-max", "4", "--k-guard", "6")
    b = run("selftest", "--g-max", "4", "--k-guard", "6")
    assert a == b


def test_selftest_injected_fault():
    code, out, _ = run("selftest", "--g-max", "3", "--k-guard", "3", "--inject-fault")
    fault = json.loads(out)["suites"][-1]
    assert fault["suite"] == "injected-fault" and not fault["passed"]
    assert fault["first_failure"]["invariant"].startswith("NotAnInvolution")
    assert fault["first_failure"]["matrix"] == [[2]]


def test_bad_subcommand():
    with pytest.raises(SystemExit) as exc:
        run("frobnicate")
    assert exc.value.code == 2
