import json

import jsonschema
import pytest

from entropic_turan.cli import EXIT_GUARD, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, SCHEMAS, load_schema, main
from entropic_turan.hypergraph import Hypergraph, make_complete, make_cycle, write_hypergraph


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    try:
        data = json.loads(out.out) if out.out.strip() else None
    except json.JSONDecodeError:
        data = out.out
    return code, data, out.err


def conforms(data, command):
    jsonschema.validate(data, load_schema(SCHEMAS[command]))


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, G in {"c5": make_cycle(5), "k4": make_complete(4, 3), "k3": make_complete(3, 2),
                    "edge3": Hypergraph(3, 3, [(0, 1, 2)])}.items():
        paths[name] = tmp_path / f"{name}.hg"
        write_hypergraph(G, paths[name])
    return paths


def test_every_schema_loads():
    for name in set(SCHEMAS.values()) | {"manifest", "precondition", "check-report"}:
        jsonschema.Draft202012Validator.check_schema(load_schema(name))


def test_gen_and_homcheck(capsys, tmp_path, files):
    tent = tmp_path / "tent.hg"
    assert run(capsys, "gen", "tent", "--lambda", "2,1", "-o", tent)[0] == EXIT_OK
    code, data, _ = run(capsys, "homcheck", tent, files["k4"])
    assert code == EXIT_OK and data["hom_exists"] and len(data["map"]) == 5
    conforms(data, "homcheck")
    code, data, _ = run(capsys, "homcheck", tent, files["edge3"])
    assert code == EXIT_NEGATIVE and not data["hom_exists"]
    conforms(data, "homcheck")


def test_partial_tent_file(capsys, tmp_path, files):
    p = tmp_path / "ptent.json"
    assert run(capsys, "gen", "tent", "--lambda", "2,1", "--partial", "-o", p)[0] == EXIT_OK
    assert "faces" in json.loads(p.read_text())
    assert run(capsys, "homcheck", p, files["edge3"])[0] == EXIT_NEGATIVE


def test_lagrangian_and_pspectral(capsys, files):
    code, data, _ = run(capsys, "lagrangian", files["c5"])
    assert code == EXIT_OK and float(data["value"]) == pytest.approx(0.5)
    conforms(data, "lagrangian")
    code, data, _ = run(capsys, "pspectral", files["c5"], "--p", "2")
    assert float(data["value"]) == pytest.approx(2.0, abs=1e-8)
    conforms(data, "pspectral")


def test_entropy_and_ratio(capsys, files):
    code, data, _ = run(capsys, "entropy", files["k4"], "--p", "1")
    assert code == EXIT_OK
    conforms(data, "entropy")
    code, data, _ = run(capsys, "ratio", files["c5"])
    assert code == EXIT_OK and data["x"][0] == pytest.approx(0.4)
    conforms(data, "ratio")


def test_forest_commands(capsys, tmp_path, files):
    code, data, _ = run(capsys, "forest", "derive", "--family", "lemma75", "--i", "1", "--k", "3")
    assert code == EXIT_OK
    conforms(data, "forest derive")
    code, data, _ = run(capsys, "forest", "certify", "--family", "thm81", "--k", "3", "--r", "4", "--i", "1")
    assert code == EXIT_OK and data["certified_a"] == 2
    conforms(data, "forest certify")
    forest = tmp_path / "path.json"
    forest.write_text(json.dumps({"k": 2, "n": 3, "faces": [[0, 1], [1, 2]]}))
    code, data, _ = run(capsys, "forest", "sample", "--forest", forest, "--graph", files["c5"])
    assert code == EXIT_OK
    conforms(data, "forest sample")
    assert run(capsys, "forest", "derive", "--family", "nope")[0] == EXIT_USAGE


def test_not_a_forest_is_a_usage_error(capsys, tmp_path, files):
    tri = tmp_path / "tri.json"
    tri.write_text(json.dumps({"k": 2, "n": 3, "faces": [[0, 1], [1, 2], [0, 2]]}))
    code, _, err = run(capsys, "forest", "sample", "--forest", tri, "--graph", files["c5"])
    assert code == EXIT_USAGE and "error" in err


def test_verify_single_claims(capsys, files):
    code, data, _ = run(capsys, "verify", "entropic-turan", files["c5"], "--r", "2")
    assert code == EXIT_OK
    conforms(data, "verify")
    code, data, _ = run(capsys, "verify", "tent-density", files["k4"], "--mode", "fks", "--r", "4", "--s", "2")
    assert code == EXIT_OK


def test_precondition_failure_prints_witness(capsys, files):
    code, data, _ = run(capsys, "verify", "entropic-turan", files["k3"], "--r", "2")
    assert code == EXIT_NEGATIVE
    jsonschema.validate(data, load_schema("precondition"))
    assert sorted(data["witness"]) == [0, 1, 2]


def test_parse_error_position(capsys, tmp_path):
    bad = tmp_path / "bad.hg"
    bad.write_text("k 2 n 3\n0 1\n0 7\n")
    code, _, err = run(capsys, "lagrangian", bad)
    assert code == EXIT_USAGE
    assert str(bad) in err and "line 3" in err


def test_guard_exit(capsys):
    assert run(capsys, "construct", "intersection", "--k", "12", "--alpha", "0.8")[0] == EXIT_GUARD


def test_construct(capsys):
    code, data, _ = run(capsys, "construct", "g1")
    assert code == EXIT_OK and len(data["hypergraph"]["edges"]) == 10
    conforms(data, "construct g1")
    code, data, _ = run(capsys, "construct", "g1-density", "--m", "3", "--normalization", "power")
    assert code == EXIT_OK
    conforms(data, "construct g1-density")


def test_verify_all_quick_with_manifest(capsys, tmp_path):
    code, data, err = run(capsys, "verify", "all", "--scale", "quick", "--only", "1,2", "--jobs", "1",
                          "--out-dir", tmp_path)
    assert code == EXIT_OK and "[PASS]" in err
    conforms(data, "verify all")
    manifests = list(tmp_path.rglob("manifest.json"))
    assert len(manifests) == 1
    man = json.loads(manifests[0].read_text())
    jsonschema.validate(man, load_schema("manifest"))
    assert man["seed"] == 0


def test_report(capsys, tmp_path, files):
    out = tmp_path / "lag.json"
    assert main(["lagrangian", str(files["c5"])]) == EXIT_OK
    out.write_text(capsys.readouterr().out)
    code, data, _ = run(capsys, "report", out, "--format", "csv")
    assert code == EXIT_OK and "," in data


def test_bad_arguments_exit_two(capsys):
    assert run(capsys, "lagrangian")[0] == EXIT_USAGE
    assert run(capsys, "gen", "tent")[0] == EXIT_USAGE
