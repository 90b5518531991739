import json

from nice_einstein.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_validate_catalog_name(capsys):
    code, out = run_cli(capsys, "validate", "631:6")
    assert code == 0
    assert "valid nice Lie algebra" in out


def test_validate_bad_structure(capsys):
    code, out = run_cli(capsys, "validate", "(0,0,e^{12},e^{12})")
    assert code == 1
    assert "invalid" in out


def test_validate_family_needs_params(capsys):
    code, out = run_cli(capsys, "validate", "741:6")
    assert code == 1
    code, out = run_cli(capsys, "validate", "741:6", "--param", "lambda=2")
    assert code == 0


def test_info_output(capsys):
    code, out = run_cli(capsys, "info", "631:6")
    assert code == 0
    assert "rank over Q: 3" in out
    assert "(23)(45)" in out
    assert "fundamental domain" in out


def test_einstein_exit_codes(capsys):
    code, _ = run_cli(capsys, "einstein", "631:6", "--k", "0")
    assert code == 0
    code, _ = run_cli(capsys, "einstein", "75421:4", "--k", "0")
    assert code == 2
    code, _ = run_cli(capsys, "einstein", "754321:9", "--param", "lambda=2", "--k", "0")
    assert code == 2  # exact failure verdict


def test_einstein_json_schema(capsys):
    import jsonschema
    from importlib import resources

    schema = json.loads(resources.files("nice_einstein")
                        .joinpath("docs/result-schema.json").read_text())

    code, out = run_cli(capsys, "einstein", "631:6", "--k", "0", "--out", "json")
    assert code == 0
    rec = json.loads(out)
    jsonschema.validate(rec, schema)
    assert rec["half_S"] == ["4", "5", "12", "13", "26", "36", "146", "156"]
    assert rec["exact"] is True

    code, out = run_cli(capsys, "einstein", "741:6", "--param", "lambda=1/2",
                        "--mode", "sigma", "--sigma", "(23)(45)", "--out", "json")
    assert code == 0
    rec = json.loads(out)
    jsonschema.validate(rec, schema)
    assert rec["signatures"]["4,3"] == ["1", "237", "457", "12345"]

    code, out = run_cli(capsys, "einstein", "754321:9", "--param", "lambda=2",
                        "--k", "0", "--out", "json")
    assert code == 2
    rec = json.loads(out)
    jsonschema.validate(rec, schema)
    assert rec["outcome"] == "fails" and rec["failed_at"] == "L"


def test_einstein_numeric_grade_exit_code(capsys):
    # 8654321:25 fails (P) only at Newton grade: exit 3, not 2
    code, out = run_cli(capsys, "einstein", "8654321:25", "--k", "0")
    assert code == 3
    assert "numeric-grade" in out


def test_einstein_output_deterministic(capsys):
    _, out1 = run_cli(capsys, "einstein", "741:6", "--param", "lambda=1/2",
                      "--mode", "sigma", "--sigma", "(23)(45)", "--out", "json")
    _, out2 = run_cli(capsys, "einstein", "741:6", "--param", "lambda=1/2",
                      "--mode", "sigma", "--sigma", "(23)(45)", "--out", "json")
    assert out1 == out2


def test_einstein_csv_columns(capsys):
    code, out = run_cli(capsys, "einstein", "741:6", "--param", "lambda=1/2",
                        "--mode", "sigma", "--sigma", "(23)(45)", "--out", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "name,mode,k,outcome,half_S,sigma,p,q"
    assert any(line.endswith("4,3") for line in lines[1:])
    assert any(line.endswith("3,4") for line in lines[1:])


def test_einstein_solve_param(capsys):
    code, out = run_cli(capsys, "einstein", "93:86", "--k", "0",
                        "--solve-param", "a")
    assert code == 0
    assert "-1/8" in out and "1/8" in out


def test_einstein_sigma_all_involutions(capsys):
    code, out = run_cli(capsys, "einstein", "731:15", "--k", "0", "--mode", "sigma")
    assert code == 2


def test_verify_certificate(capsys):
    code, out = run_cli(capsys, "verify", "631:6",
                        "--metric", "1,1,1,1,-1,1", "--lambda", "0")
    assert code == 0
    assert "PASS" in out


def test_verify_failure(capsys):
    code, out = run_cli(capsys, "verify", "631:6",
                        "--metric", "1,1,1,1,1,1", "--lambda", "0")
    assert code == 1
    assert "FAIL" in out


def test_verify_sigma_metric(capsys):
    # the delta=1 certificate of the sigma classification
    code, out = run_cli(capsys, "verify", "741:6", "--param", "lambda=1/2",
                        "--sigma", "(23)(45)",
                        "--metric=-1/4,1,1,1,1,2,1", "--lambda", "0")
    assert code == 0


def test_curvature_command(capsys):
    code, out = run_cli(capsys, "curvature", "75432:3",
                        "--metric", "1,1,1,1,-1,1,1")
    assert code == 0
    assert "g(R,R)   = 5/2" in out
    assert "g(R',R') = -3/8" in out
    assert "scalar curvature = 0" in out
    assert "ad-invariant: no" in out


def test_catalog_list(capsys):
    code, out = run_cli(capsys, "catalog", "list", "--filter", "63*")
    assert code == 0
    assert "631:6" in out


def test_catalog_run_subset(capsys):
    code, out = run_cli(capsys, "catalog", "run", "--filter", "62:4a")
    assert code == 0
    assert "checks match" in out


def test_catalog_run_dim7_zero_diffs(capsys):
    code, out = run_cli(capsys, "catalog", "run", "--filter", "7*")
    assert code == 0
    assert "DIFF" not in out


def test_catalog_run_subset_csv_deterministic(capsys):
    _, out1 = run_cli(capsys, "catalog", "run", "--filter", "631:6", "--out", "csv")
    _, out2 = run_cli(capsys, "catalog", "run", "--filter", "631:6", "--out", "csv")
    assert out1 == out2
    assert out1.splitlines()[0] == "name,mode,k,outcome,half_S,sigma,p,q"


def test_tolerance_env_override(capsys, monkeypatch):
    monkeypatch.setenv("NICE_EINSTEIN_TOL", "1e-3")
    code, out = run_cli(capsys, "verify", "631:6",
                        "--metric", "1,1,1,1,-1,1", "--lambda", "0")
    assert code == 0
    assert "tolerance 0.001" in out
