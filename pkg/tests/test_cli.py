import json
from pathlib import Path

import jsonschema
import pytest
from click.testing import CliRunner

from gradalg.cli import RunConfig, InputError, main, run

SCHEMAS = Path(__file__).resolve().parent.parent / "schemas"
EXAMPLE = ["--k", "2", "--r", "1", "--m", "4", "--lambda", "1;1", "--kappa", "z(4,1)"]


def schema(name: str) -> dict:
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


@pytest.fixture
def cli(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("GRADALG_OUTPUT_DIR", raising=False)
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


@pytest.fixture
def catalog(cli):
    res = cli("enumerate", *EXAMPLE, "--json", "cat.json")
    assert res.exit_code == 0
    data = json.loads(Path("cat.json").read_text())
    for i, row in enumerate(data["catalog"]):
        Path(f"spec{i}.json").write_text(json.dumps(row["spec"]))
    return data


def test_algebra_command(cli):
    res = cli("algebra", *EXAMPLE, "--json", "alg.json")
    assert res.exit_code == 0
    data = json.loads(Path("alg.json").read_text())
    jsonschema.validate(data, schema("algebra"))
    assert len(data["algebra"]["basis"]) == 10


def test_enumerate_emits_six_rows(catalog, cli):
    jsonschema.validate(catalog, schema("catalog"))
    assert catalog["count"] == 6
    assert sum(row["toral"] for row in catalog["catalog"]) == 1
    res = cli("enumerate", *EXAMPLE, "--markdown")
    lines = [l for l in res.output.splitlines() if l.startswith("| ") and not l.startswith("| #")]
    assert len(lines) == 6


def test_build_check_universal_round_trip(catalog, cli):
    res = cli("grading", "build", "--spec", "spec0.json", "--json", "g.json")
    assert res.exit_code == 0
    jsonschema.validate(json.loads(Path("g.json").read_text()), schema("grading"))
    assert cli("grading", "check", "g.json").exit_code == 0
    res = cli("grading", "universal-group", "g.json")
    assert res.exit_code == 0
    assert json.loads(res.output)["universal_group"] == catalog["catalog"][0]["universal_group"]
    # a built grading also works where a spec is expected
    assert cli("equiv", "g.json", "spec0.json").exit_code == 0


def test_corrupted_degree_file_names_the_bracket(catalog, cli):
    cli("grading", "build", "--spec", "spec2.json", "--json", "g.json")
    data = json.loads(Path("g.json").read_text())
    basis = data["grading"]["basis"]
    i = basis.index("x1.1")
    data["grading"]["degrees"][i]["free"][0] += 5
    Path("bad.json").write_text(json.dumps(data))
    res = cli("grading", "check", "bad.json")
    assert res.exit_code == 2
    err = json.loads(res.output)
    jsonschema.validate(err, schema("error"))
    assert err["error"] == "incompatible-bracket"
    assert "x1.1" in (err["x"], err["y"])


def test_equiv_exit_codes(catalog, cli):
    assert cli("equiv", "spec0.json", "spec0.json").exit_code == 0
    res = cli("equiv", "spec2.json", "spec3.json", "--oracle", "--dim-cap", "10")
    assert res.exit_code == 1
    out = json.loads(res.output)
    assert out == {"agree": True, "equivalent": False, "oracle": False}


def test_oracle_beyond_cap_is_an_error(catalog, cli):
    res = cli("equiv", "spec2.json", "spec3.json", "--oracle")
    assert res.exit_code == 2
    assert json.loads(res.output)["error"] == "invalid-input"


def test_weyl_commands(catalog, cli):
    res = cli("weyl", "order", "--spec", "spec2.json", "--oracle", "--dim-cap", "10")
    assert res.exit_code == 0
    out = json.loads(res.output)
    jsonschema.validate(out, schema("weyl-order"))
    assert out["order"] == out["formula"] == out["oracle"] == catalog["catalog"][2]["weyl_order"]
    res = cli("weyl", "generators", "--spec", "spec2.json", "--json", "gen.json")
    assert res.exit_code == 0
    gen = json.loads(Path("gen.json").read_text())
    jsonschema.validate(gen, schema("weyl-generators"))
    n = len(gen["basis"])
    for g in gen["generators"]:
        assert sorted(g["permutation"]) == list(range(n))


def test_output_is_deterministic(cli):
    for name in ("a.json", "b.json"):
        cli("enumerate", *EXAMPLE, "--json", name)
    assert Path("a.json").read_bytes() == Path("b.json").read_bytes()


def test_output_directory_variable(cli, tmp_path, monkeypatch):
    monkeypatch.setenv("GRADALG_OUTPUT_DIR", str(tmp_path / "out"))
    assert cli("algebra", "--k", "1", "--lambda", "2", "--json", "alg.json").exit_code == 0
    assert (tmp_path / "out" / "alg.json").exists()


def test_bad_scalar_is_reported(cli):
    res = cli("algebra", "--k", "1", "--lambda", "2 z(4,1)")
    assert res.exit_code == 2
    assert "error" in json.loads(res.output)


def test_selfcheck(cli):
    res = cli("selfcheck", "--seed", "3", "--count", "20")
    assert res.exit_code == 0
    assert json.loads(res.output)["failures"] == []


def test_run_config_validation(tmp_path):
    with pytest.raises(InputError):
        RunConfig("equiv", inputs=("a.json", "b.json"), output="a.json")
    with pytest.raises(InputError):
        RunConfig("weyl-order", inputs=("a.json",), dim_cap=0)
    with pytest.raises(InputError):
        RunConfig("nonsense")


def test_missing_spec_file_is_an_error(tmp_path):
    status, text = run(RunConfig("grading-build", inputs=(str(tmp_path / "missing.json"),)))
    assert status == 2
    assert "error" in json.loads(text)
