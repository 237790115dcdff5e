import json

import pytest

from faithlab import cli


@pytest.fixture(autouse=True)
def _restore_env(monkeypatch):
    # the CLI exports its order cap for the builders; keep that local to each test
    monkeypatch.setenv("FAITHLAB_MAX_ORDER", "50000")
    monkeypatch.delenv("FAITHLAB_THREADS", raising=False)
    monkeypatch.delenv("FAITHLAB_SEED", raising=False)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_gqm(capsys):
    code, out, _ = run(capsys, "analyze", "--builder", "gqm", "--q", "3", "--m", "1")
    assert code == 0 and "P-threshold: 4" in out


def test_analyze_cyclic_is_faithful(capsys):
    code, out, _ = run(capsys, "analyze", "--builder", "cyclic", "--n", "7")
    assert code == 0 and "P-threshold: inf" in out and "Q-threshold: inf" in out


def test_analyze_central_product_with_oracle(capsys, tmp_path):
    code, out, _ = run(capsys, "--cache", str(tmp_path), "analyze", "--builder", "d8_central_product", "--oracle",
                       "--json", "-")
    data = json.loads(out)
    assert code == 0
    assert data["characters"] == {"degrees": {"1": 64, "4": 12}, "abelian_kernels": 0}
    assert data["p_threshold"] == 3 and data["oracle"]["p_threshold"] == 3
    assert list(tmp_path.glob("chartab-*.json"))


def test_report_json_roundtrip(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, _, _ = run(capsys, "analyze", "--builder", "gqm", "--q", "2", "--m", "2", "--q-oracle", "--json", str(path))
    assert code == 0
    text = path.read_text()
    assert json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n" == text
    data = json.loads(text)
    assert data["p_threshold"] == 7 and data["oracle"]["q_threshold"] == 5


def test_spec_file(capsys, tmp_path):
    spec = tmp_path / "s4.json"
    spec.write_text(json.dumps({"perm": {"degree": 4, "gens": [[1, 2, 3, 0], [1, 0, 2, 3]]}}))
    code, out, _ = run(capsys, "chartab", "--spec", str(spec))
    data = json.loads(out)
    assert code == 0 and data["order"] == 24 and data["degrees"] == [1, 1, 2, 3, 3]


def test_alpha(capsys):
    code, out, _ = run(capsys, "alpha", "--q", "5", "--json", "-")
    data = json.loads(out)
    assert code == 0 and data["alpha"] == 4 and data["witness"][0] == [0, 0]
    code, out, _ = run(capsys, "alpha", "--q", "3", "--witness")
    assert code == 0 and out.startswith("alpha(3,1) = 4")


def test_alpha_threads_deterministic(capsys):
    _, a, _ = run(capsys, "--threads", "1", "alpha", "--q", "7", "--json", "-")
    _, b, _ = run(capsys, "--threads", "2", "alpha", "--q", "7", "--json", "-")
    assert json.loads(a)["witness"] == json.loads(b)["witness"]


def test_seq(capsys):
    code, out, _ = run(capsys, "seq", "--limit", "40", "--gaps", "--json", "-")
    data = json.loads(out)
    assert code == 0 and len(data["terms"]) == 25
    code, out, _ = run(capsys, "seq", "--limit", "100", "--goormaghtigh")
    assert code == 0 and "8191" in out and "largest gap" not in out


def test_qthreshold(capsys):
    code, out, _ = run(capsys, "qthreshold", "--builder", "gqm", "--q", "2", "--m", "2", "--max-n", "6")
    assert code == 0 and "Q-threshold: 5" in out


@pytest.mark.parametrize("argv", [
    ["analyze", "--builder", "monster"],
    ["analyze", "--builder", "gqm"],
    ["analyze", "--builder", "gqm", "--q", "6"],
    ["analyze"],
    ["analyze", "--spec", "/nonexistent/file.json"],
    ["frobnicate"],
    ["alpha"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == cli.EXIT_USAGE


def test_bad_env(capsys, monkeypatch):
    monkeypatch.setenv("FAITHLAB_SEED", "nope")
    assert run(capsys, "seq", "--limit", "10")[0] == cli.EXIT_USAGE


def test_malformed_spec(capsys, tmp_path):
    spec = tmp_path / "bad.json"
    spec.write_text('{"perm": {"degree": 3, "gens": [[0, 0, 1]]}}')
    assert run(capsys, "analyze", "--spec", str(spec))[0] == cli.EXIT_USAGE
    spec.write_text("{not json")
    assert run(capsys, "analyze", "--spec", str(spec))[0] == cli.EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["analyze", "--builder", "gqm", "--q", "3", "--m", "2"],
    ["--max-order", "100", "analyze", "--builder", "gqm", "--q", "7"],
    ["alpha", "--q", "7", "--node-limit", "5"],
    ["seq", "--limit", "100000000"],
    ["analyze", "--builder", "symmetric", "--n", "7"],
])
def test_resource_errors(capsys, argv):
    assert run(capsys, *argv)[0] == cli.EXIT_RESOURCE


def test_mismatch_exit_code(capsys, monkeypatch):
    from faithlab import faith

    monkeypatch.setattr(faith, "p_threshold_oracle", lambda G: faith.OracleResult(99, []))
    assert run(capsys, "analyze", "--builder", "gqm", "--q", "2", "--oracle")[0] == cli.EXIT_MISMATCH


def test_env_config(monkeypatch):
    monkeypatch.setenv("FAITHLAB_THREADS", "3")
    monkeypatch.setenv("FAITHLAB_SEED", "0x10")
    args = cli.make_parser().parse_args(["seq"])
    cfg = cli.run_config(args)
    assert cfg.threads == 3 and cfg.seed == 16 and cfg.max_order == 50000
    args = cli.make_parser().parse_args(["--threads", "2", "seq"])
    assert cli.run_config(args).threads == 2


def test_verify_quick_json(capsys, tmp_path):
    path = tmp_path / "verify.json"
    code, out, _ = run(capsys, "verify", "--quick", "--json", str(path))
    data = json.loads(path.read_text())
    assert code == 0 and data["all_ok"] and len(data["results"]) == 10
    assert out.count("[PASS]") == 10
