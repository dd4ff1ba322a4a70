import json
import os

import pytest

from hallq.cli import RunConfig, main
from hallq.quiver import builtin_quiver


@pytest.fixture()
def cache(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("HALLQ_CACHE_DIR", str(d))
    return d


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_a2(cache, capsys):
    code, out, _ = run_cli(capsys, "classify", "--quiver", "a2", "--dim", "1,1", "-p", "2")
    assert code == 0
    data = json.loads(out)
    assert len(data["classes"]) == 2
    assert all(c["orbit_size"] == 1 for c in data["classes"])


def test_classify_zero_dim(cache, capsys):
    code, out, _ = run_cli(capsys, "classify", "--quiver", "a2", "--dim", "0,0", "-p", "2")
    assert code == 0
    assert len(json.loads(out)["classes"]) == 1


def test_classify_quiver_file(cache, capsys, tmp_path):
    qf = tmp_path / "my.quiver"
    qf.write_text("# two vertices\nvertices: a b\narrow: a -> b\n")
    code, out, _ = run_cli(capsys, "classify", "--quiver", str(qf), "--dim", "1,1", "-p", "3")
    assert code == 0
    assert len(json.loads(out)["classes"]) == 2


def test_classify_budget_refusal(cache, capsys):
    code, _, err = run_cli(capsys, "classify", "--quiver", "kronecker", "--dim", "3,3",
                           "-p", "3", "--budget", "100")
    assert code == 2
    assert "refused" in err and "budget" in err


def test_classify_cache_round_trip(cache, capsys):
    code, out1, _ = run_cli(capsys, "classify", "--quiver", "a2", "--dim", "2,1", "-p", "3")
    assert code == 0
    files = list(cache.glob("*.json"))
    assert files, "classification was not cached"
    code, out2, _ = run_cli(capsys, "classify", "--quiver", "a2", "--dim", "2,1", "-p", "3")
    assert out1 == out2


def test_classify_determinism_without_cache(cache, capsys):
    args = ("classify", "--quiver", "kronecker", "--dim", "1,1", "-p", "3", "--no-cache")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_op_mul_matches_known_product(cache, capsys):
    code, out, _ = run_cli(capsys, "op", "mul", "1,0:0", "0,1:0", "--quiver", "a2", "-p", "2")
    assert code == 0
    data = json.loads(out)
    assert data["dim"] == [1, 1]
    assert sorted(t["laurent"] for t in data["terms"]) == ["1*v^1", "1*v^1"]


def test_op_dsub_m0_echoes_input(cache, capsys):
    code, out, _ = run_cli(capsys, "op", "dsub", "1,1:1", "--vertex", "1", "-m", "0",
                           "--quiver", "a2", "-p", "2")
    assert code == 0
    data = json.loads(out)
    assert data["terms"] == [{"class": "1,1:1", "laurent": "1*v^0"}]


def test_op_dsub_example(cache, capsys):
    code, out, _ = run_cli(capsys, "op", "dsub", "1,1:1", "--vertex", "1", "-m", "1",
                           "--quiver", "a2", "-p", "2")
    data = json.loads(out)
    assert data["dim"] == [0, 1]
    assert data["terms"][0]["laurent"] == "1*v^1"


def test_op_res_and_split(cache, capsys):
    code, out, _ = run_cli(capsys, "op", "res", "1,1:1", "--split", "1,0",
                           "--quiver", "a2", "-p", "2")
    data = json.loads(out)
    assert data["dims"] == [[1, 0], [0, 1]]


def test_op_pair_specialized(cache, capsys):
    code, out, _ = run_cli(capsys, "op", "pair", "1,0:0", "1,0:0", "--quiver", "a2",
                           "-p", "3", "--sign", "+")
    data = json.loads(out)
    assert data["pairing"] == {"even": "1/2", "odd": "0"}


def test_op_unknown_class(cache, capsys):
    code, _, err = run_cli(capsys, "op", "mul", "1,0:7", "0,1:0", "--quiver", "a2", "-p", "2")
    assert code == 2
    assert "error" in err


def test_verify_subset_passes(cache, capsys):
    code, out, _ = run_cli(capsys, "verify", "--only", "serre_generators",
                           "--quiver", "a2", "-p", "2,3")
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines() if l.startswith("{")]
    assert any(l["identity"] == "serre_generators" and l["status"] == "pass" for l in lines)
    assert any(l["identity"] == "convention_table" for l in lines)


def test_verify_rejects_unknown_identity(cache, capsys):
    code, _, err = run_cli(capsys, "verify", "--only", "nonsense", "--quiver", "a2", "-p", "2")
    assert code == 2
    assert "unknown identity" in err


def test_verify_corrupt_fixture_exits_one(cache, capsys):
    code, out, _ = run_cli(capsys, "verify", "--only", "associativity", "--quiver", "a2",
                           "-p", "2", "--maxdim", "2", "--corrupt-fixture")
    assert code == 1
    lines = [json.loads(l) for l in out.splitlines() if l.startswith("{")]
    failing = [l for l in lines if l["status"] == "fail"]
    assert failing and failing[0]["witness"]


def test_verify_output_deterministic(cache, capsys):
    args = ("verify", "--only", "associativity", "--quiver", "a2", "-p", "2", "--maxdim", "2")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)

    def strip(text):
        rows = []
        for line in text.splitlines():
            if line.startswith("{"):
                d = json.loads(line)
                d.pop("elapsed", None)
                rows.append(json.dumps(d, sort_keys=True))
            else:
                rows.append(line)
        return rows

    assert strip(out1) == strip(out2)


def test_run_config_validation():
    q = builtin_quiver("a2")
    with pytest.raises(ValueError):
        RunConfig(q, (4,), "auto", 10**6, 4, "json", None)
    with pytest.raises(ValueError):
        RunConfig(q, (2,), "auto", 0, 4, "json", None)
    with pytest.raises(ValueError):
        RunConfig(q, (2,), "auto", 10**6, 4, "json", ("bogus",))


def test_csv_format(cache, capsys):
    code, out, _ = run_cli(capsys, "classify", "--quiver", "a2", "--dim", "1,1",
                           "-p", "2", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "label,orbit_size,aut_count"
    assert len(lines) == 3


def test_verify_user_quiver_file(cache, capsys, tmp_path):
    qf = tmp_path / "sink.quiver"
    qf.write_text("vertices: x y z\narrow: x -> y\narrow: z -> y\n")
    code, out, _ = run_cli(capsys, "verify", "--only", "green,serre_generators",
                           "--quiver", str(qf), "-p", "2", "--maxdim", "3")
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines() if l.startswith("{")]
    assert sum(1 for l in lines if l["identity"] == "green") > 0
    assert all(l["status"] != "fail" for l in lines)
