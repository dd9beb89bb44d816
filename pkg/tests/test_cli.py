import json
import subprocess
import sys

import numpy as np
import pytest

from framekit.analysis import analyze
from framekit.cli import config_from_args, main, run_checks
from framekit.framegen import Frame, drop_basis_vectors, picket_ogf, singer_ogf


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def construct(tmp_path, name, *args):
    path = tmp_path / name
    assert main(["construct", *args, "--out", str(path)]) == 0
    return str(path)


def test_construct_singer_ogf(capsys):
    code, out, _ = run(["construct", "singer-ogf", "--q", "2"], capsys)
    d = json.loads(out)
    assert code == 0 and d["dim"] == 3 and len(d["vectors"]) == 10


def test_construct_picket_weighted(capsys):
    code, out, _ = run(["construct", "picket-ogf", "--q", "3", "--weighted"], capsys)
    d = json.loads(out)
    assert code == 0 and len(d["vectors"]) == 11
    assert d["weights"][:3] == [1 / 12] * 3
    assert d["weights"][3] == 3 / 32


def test_construct_chirps_and_sets(capsys):
    code, out, _ = run(["construct", "chirps", "--k", "5"], capsys)
    assert code == 0 and len(json.loads(out)["vectors"]) == 30
    code, out, _ = run(["construct", "singer", "--q", "2", "--format", "text"], capsys)
    assert code == 0 and out.startswith("Z_7")
    code, out, _ = run(["construct", "rds", "--q", "3"], capsys)
    assert json.loads(out)["kind"] == {"relative": {"N": 4, "L": 2, "K": 3, "lambda": 1}}


def test_construct_csv(capsys):
    code, out, _ = run(["construct", "example-5-2", "--format", "csv"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "re_1,im_1,re_2,im_2" and len(lines) == 6


@pytest.mark.parametrize("argv", [
    ["construct", "singer", "--q", "6"],
    ["construct", "singer-ogf"],
    ["construct", "chirps", "--k", "4"],
    ["verify", "/nonexistent.json"],
    ["report", "/nonexistent.json"],
    ["search", "ds"],
])
def test_input_errors_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert err.startswith("error: ") and len(err.strip().splitlines()) == 1


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["construct", "nosuchfamily"])
    assert info.value.code == 2


def test_verify_singer_all_checks(tmp_path, capsys):
    path = construct(tmp_path, "s.json", "singer-ogf", "--q", "2")
    code, out, _ = run(["verify", path, "--checks", "orthoplex,tight,design2"], capsys)
    d = json.loads(out)
    assert code == 0 and d["all_pass"]
    assert d["design"]["verdict"] is True
    checks = "coherence,welch,orthoplex,tight,modulation,fourier,design2,projector-sum"
    code, out, _ = run(["verify", path, "--checks", checks], capsys)
    assert code == 0


def test_verify_picket_all_checks(tmp_path, capsys):
    path = construct(tmp_path, "p.json", "picket-ogf", "--q", "3", "--weighted")
    checks = "coherence,welch,orthoplex,tight,mub,modulation,fourier,picket-values,design2,projector-sum"
    code, out, _ = run(["verify", path, "--checks", checks, "--format", "text"], capsys)
    assert code == 0
    assert all(line.split()[1] == "PASS" for line in out.splitlines())


def test_verify_dropped_basis_fails_tight(tmp_path, capsys):
    path = tmp_path / "d.json"
    path.write_text(json.dumps(drop_basis_vectors(picket_ogf(3), 1).to_dict()))
    code, out, _ = run(["verify", str(path), "--checks", "tight"], capsys)
    assert code == 1
    assert json.loads(out)["checks"][0]["status"] == "fail"


def test_verify_random_frame_orthoplex_na(tmp_path, capsys):
    rng = np.random.default_rng(0)
    V = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    path = tmp_path / "r.json"
    path.write_text(json.dumps(Frame(V, tuple(("custom", i) for i in range(6))).to_dict()))
    code, out, _ = run(["verify", str(path), "--checks", "orthoplex"], capsys)
    assert code == 0
    assert json.loads(out)["checks"][0]["status"] == "n/a"


def test_verify_malformed_json(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(["verify", str(path)], capsys)[0] == 2
    path.write_text(json.dumps({"dim": 2, "vectors": [[[1, 0]]], "labels": [["custom", 0]]}))
    assert run(["verify", str(path)], capsys)[0] == 2


def test_unknown_check(tmp_path, capsys):
    path = construct(tmp_path, "s.json", "singer-ogf", "--q", "2")
    assert run(["verify", path, "--checks", "bogus"], capsys)[0] == 2


def test_round_trip_matches_in_memory(tmp_path, capsys):
    path = construct(tmp_path, "s.json", "singer-ogf", "--q", "3")
    checks = ("coherence", "welch", "orthoplex", "tight", "design2")
    code, out, _ = run(["verify", path, "--checks", ",".join(checks)], capsys)
    from framekit.config import DEFAULT_TOLERANCES

    _, cert, rows = run_checks(singer_ogf(3), checks, DEFAULT_TOLERANCES)
    d = json.loads(out)
    assert d["checks"] == json.loads(json.dumps(rows))
    assert d["design"] == cert.to_dict()
    assert d["report"] == json.loads(json.dumps(analyze(singer_ogf(3)).to_dict()))


def test_serialisation_lossless(tmp_path):
    path = construct(tmp_path, "p.json", "picket-ogf", "--q", "5")
    f = Frame.from_dict(json.loads(open(path).read()))
    assert np.array_equal(f.vectors, picket_ogf(5).vectors)


def test_output_is_deterministic(tmp_path):
    path = construct(tmp_path, "s.json", "picket-ogf", "--q", "4", "--weighted")
    outs = []
    for i in range(2):
        out = tmp_path / f"v{i}.json"
        main(["verify", path, "--checks", "coherence,tight,design2,projector-sum,fourier", "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_search_ds_text(capsys):
    code, out, _ = run(["search", "ds", "--k", "7"], capsys)
    assert code == 0
    assert out.splitlines()[1].split("|")[2].strip() == "DNE"


def test_search_picket_rows(capsys):
    code, out, _ = run(["search", "picket", "--k-min", "2", "--k-max", "6", "--format", "json"], capsys)
    rows = json.loads(out)["rows"]
    assert [r["status"] for r in rows] == ["found", "found", "found", "found", "DNE"]
    assert rows[0]["sets"] == [[0, 1]] and rows[0]["M"] == 3
    assert rows[1]["sets"] == [[0, 1, 3]]


def test_search_inconclusive(capsys):
    code, out, _ = run(["search", "ds", "--k", "7", "--budget", "10", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["rows"][0]["status"] == "inconclusive"


def test_search_threads_env(monkeypatch):
    monkeypatch.setenv("FRAMEKIT_THREADS", "3")
    assert config_from_args(["search", "ds", "--k", "3"]).threads == 3
    assert config_from_args(["search", "ds", "--k", "3", "--threads", "2"]).threads == 2


def test_report_table(tmp_path, capsys):
    a = construct(tmp_path, "ogf.json", "singer-ogf", "--q", "2")
    b = construct(tmp_path, "etf.json", "singer-etf", "--q", "2")
    c = construct(tmp_path, "basis.json", "basis", "--k", "3")
    code, out, _ = run(["report", a, b, c], capsys)
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split() == ["input", "N", "K", "coherence", "welch_bound", "orthoplex_bound", "ETF", "OGF", "tight"]
    ogf, etf, basis = (line.split() for line in lines[1:])
    assert ogf[3] == "0.577350" and ogf[5] == "0.577350" and ogf[7] == "yes"
    assert etf[3] == "0.471405" == etf[4] and etf[6] == "yes"
    assert basis[3] == "0.000000" and basis[5] == "n/a"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "framekit", "construct", "example-5-2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["dim"] == 2


def test_bad_tolerance_exit_2(capsys):
    assert run(["construct", "basis", "--k", "2", "--tol-tight", "-1"], capsys)[0] == 2
