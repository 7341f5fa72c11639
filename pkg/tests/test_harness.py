import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linecode.cli import main
from linecode.codefile import (
    code_from_dict,
    code_to_dict,
    format_vector,
    load_code,
    make_code,
    parse_vector,
    save_code,
)
from linecode.errors import ParameterError, ShapeError
from linecode.evalcode import build_code, encode
from linecode.experiments import CSV_HEADER, corrupt, curve_csv, simulate, verify_code


# --- code files -----------------------------------------------------------------

def test_code_file_round_trip(tmp_path, grid_4x5, code_3x3_f5):
    for code in (grid_4x5, code_3x3_f5):
        path = tmp_path / "c.json"
        save_code(code, path)
        again = load_code(path)
        assert again.E == code.E == build_code(again.config, again.d).E
        assert code_to_dict(again) == code_to_dict(code)


def test_code_file_is_plain_integers(grid_4x5):
    doc = json.loads(save_code(grid_4x5, None))
    assert set(doc) == {"q", "n", "m", "d", "construction", "seed", "lines", "grid_lines", "points"}
    assert len(doc["points"]) == 4 and all(len(r) == 5 for r in doc["points"])


@pytest.mark.parametrize("mutate", [
    lambda d: d["points"][0][0].__setitem__(0, -1),
    lambda d: d["points"][0][0].__setitem__(0, d["q"] + d["points"][0][0][0]),
    lambda d: d["points"][0][0].__setitem__(1, (d["points"][0][0][1] + 1) % d["q"]),
    lambda d: d["lines"].pop(),
    lambda d: d.pop("lines"),
    lambda d: d.__setitem__("q", 6),
    lambda d: d.__setitem__("d", 4),
    lambda d: d.__setitem__("construction", "magic"),
    lambda d: d["lines"][0].__setitem__(2, "1"),
    lambda d: d["grid_lines"].pop(),
])
def test_code_file_rejects_corruption(grid_4x5, mutate):
    doc = json.loads(json.dumps(code_to_dict(grid_4x5)))
    mutate(doc)
    with pytest.raises(ParameterError):
        code_from_dict(doc)


def test_vector_parsing():
    assert parse_vector("1,2,3\n", 5, 3) == (1, 2, 3)
    assert format_vector((0, 4)) == "0,4\n"
    with pytest.raises(ParameterError):
        parse_vector("1,5", 5)
    with pytest.raises(ParameterError):
        parse_vector("1,-1", 5)
    with pytest.raises(ParameterError):
        parse_vector("1,x", 5)
    with pytest.raises(ParameterError):
        parse_vector("1\n2\n", 5)
    with pytest.raises(ShapeError):
        parse_vector("1,2", 5, 3)


# --- channel and simulation ---------------------------------------------------

@settings(max_examples=50, deadline=None)
@given(st.integers(0, 20), st.integers(0, 2**32 - 1))
def test_corrupt_has_exact_weight(t, seed):
    word = tuple(np.random.default_rng(seed).integers(0, 101, size=20).tolist())
    received, error = corrupt(word, t, 101, np.random.default_rng(seed))
    assert sum(a != b for a, b in zip(word, received)) == t
    assert sum(e != 0 for e in error) == t
    assert all((w + e) % 101 == r for w, e, r in zip(word, error, received))


def test_corrupt_rejects_bad_weight():
    with pytest.raises(ParameterError):
        corrupt((0, 0), 3, 5, np.random.default_rng(0))


def test_simulate_deterministic_and_parallel_safe(grid_4x5):
    serial = curve_csv(simulate(grid_4x5, [0, 3, 12], 10, seed=3))
    again = curve_csv(simulate(grid_4x5, [0, 3, 12], 10, seed=3))
    parallel = curve_csv(simulate(grid_4x5, [0, 3, 12], 10, seed=3, jobs=2))
    assert serial == again == parallel
    rows = serial.splitlines()
    assert rows[0] == CSV_HEADER
    assert rows[1] == "0,10,10,0,0,0,1.0000"


def test_simulate_everything_corrupted(grid_4x5):
    (point,) = simulate(grid_4x5, [20], 10, seed=0)
    assert point.decoded == 0 and point.failed + point.ambiguous + point.wrong == 10


def test_verify_code_passes_on_fresh_codes(grid_4x5, code_3x3_f5):
    for code in (grid_4x5, code_3x3_f5):
        checks = verify_code(code)
        assert all(c.ok for c in checks), [c for c in checks if not c.ok]


# --- command line -------------------------------------------------------------

@pytest.fixture
def grid_file(tmp_path, grid_4x5):
    path = tmp_path / "grid.json"
    save_code(grid_4x5, path)
    return path


def test_cli_mkcode_report(tmp_path, capsys):
    out = tmp_path / "c.json"
    rc = main(["mkcode", "--q", "101", "--n", "4", "--m", "5", "--d", "2",
               "--construction", "grid", "--seed", "7", "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "dimension=6" in text and "effective_sets=12000" in text
    assert "length=20" in text and "distance_lower_bound=10" in text
    assert load_code(out).E == make_code(101, 4, 5, 2, "grid", 7).E


def test_cli_mkcode_json_to_stdout(capsys):
    assert main(["mkcode", "--q", "7", "--n", "3", "--m", "3", "--d", "1", "--construction", "random"]) == 0
    captured = capsys.readouterr()
    assert code_from_dict(json.loads(captured.out)).n == 3
    assert "dimension=3" in captured.err


@pytest.mark.parametrize("argv, needle", [
    (["--q", "5", "--n", "3", "--m", "4", "--d", "1", "--construction", "grid"], "q + 1"),
    (["--q", "6", "--n", "3", "--m", "3", "--d", "1"], "prime"),
    (["--q", "7", "--n", "3", "--m", "3", "--d", "3"], "d"),
])
def test_cli_mkcode_bad_parameters(capsys, argv, needle):
    assert main(["mkcode", *argv]) == 1
    assert needle in capsys.readouterr().err


def test_cli_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["mkcode", "--q", "5"])
    assert exc.value.code == 1


def test_cli_encode_decode_round_trip(tmp_path, grid_file, grid_4x5, capsys):
    msg, word, recv, rep = (tmp_path / f for f in ("msg", "word", "recv", "rep"))
    msg.write_text("1,2,3,4,5,6\n")
    assert main(["encode", "--code", str(grid_file), "--message", str(msg), "--out", str(word)]) == 0
    assert word.read_text() == format_vector(encode(grid_4x5, (1, 2, 3, 4, 5, 6)))
    assert main(["corrupt", "--code", str(grid_file), "--input", str(word), "--t", "0",
                 "--out", str(recv)]) == 0
    assert recv.read_text() == word.read_text()
    assert main(["decode", "--code", str(grid_file), "--input", str(recv), "--out", str(rep)]) == 0
    report = json.loads(rep.read_text())
    assert report["outcome"] == "decoded"
    assert report["candidate"] == [1, 2, 3, 4, 5, 6]
    assert report["multiplicity"] == 12000


def test_cli_corrupt_then_decode(tmp_path, grid_file, capsys):
    word, recv = tmp_path / "word", tmp_path / "recv"
    assert main(["encode", "--code", str(grid_file), "--seed", "4", "--message-out",
                 str(tmp_path / "msg"), "--out", str(word)]) == 0
    assert main(["corrupt", "--code", str(grid_file), "--input", str(word), "--t", "3",
                 "--seed", "4", "--out", str(recv)]) == 0
    a, b = word.read_text().strip().split(","), recv.read_text().strip().split(",")
    assert sum(x != y for x, y in zip(a, b)) == 3
    assert main(["decode", "--code", str(grid_file), "--input", str(recv)]) == 0
    report = json.loads(capsys.readouterr().out)
    expected = [int(v) for v in (tmp_path / "msg").read_text().strip().split(",")]
    assert report["outcome"] == "decoded" and report["candidate"] == expected


def test_cli_decode_rejects_wrong_length(tmp_path, grid_file, capsys):
    bad = tmp_path / "bad"
    bad.write_text("1,2,3\n")
    assert main(["decode", "--code", str(grid_file), "--input", str(bad)]) == 1
    assert main(["decode", "--code", str(tmp_path / "missing.json"), "--input", str(bad)]) == 1


def test_cli_decode_sampled(tmp_path, grid_file, grid_4x5, capsys):
    word = tmp_path / "w"
    word.write_text(format_vector(encode(grid_4x5, (0, 0, 0, 0, 0, 1))))
    assert main(["decode", "--code", str(grid_file), "--input", str(word),
                 "--strategy", "sampled", "--samples", "50"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["multiplicity"] == 50 and report["sets_examined"] == 50


def test_cli_mindist(capsys):
    assert main(["mindist", "--q", "5", "--n", "2", "--m", "3", "--d", "1"]) == 0
    assert capsys.readouterr().out.strip() == "d_min=3 bound=3"
    assert main(["mindist", "--q", "5", "--n", "3", "--m", "3", "--d", "1",
                 "--construction", "random"]) == 0
    assert capsys.readouterr().out.strip() == "d_min=6 bound=6"


def test_cli_mindist_guard(grid_file, capsys):
    assert main(["mindist", "--code", str(grid_file)]) == 1
    assert "smaller parameters" in capsys.readouterr().err


def test_cli_analyze(capsys, grid_file):
    assert main(["analyze", "--q", "53", "--n", "4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["config_points"] == 206 and report["weil_bound"] == pytest.approx(97.68, abs=0.01)
    assert report["exceeds_weil_bound"] is True
    assert main(["analyze", "--code", str(grid_file)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["f"] == {"1": 8, "2": 8, "3": 10}
    assert report["distance_lower_bound"] == 10 and report["effective_sets"] == 12000


def test_cli_analyze_collisions(tmp_path, capsys):
    path = tmp_path / "c.json"
    save_code(make_code(5, 3, 3, 1, "random", 0), path)
    assert main(["analyze", "--code", str(path), "--collisions", "2", "--trials", "2000"]) == 0
    rows = json.loads(capsys.readouterr().out)["collisions"]
    assert len(rows) == 2 and all(r["rank"] <= 3 for r in rows)


def test_cli_simulate(tmp_path, grid_file):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["simulate", "--code", str(grid_file), "--t-min", "0", "--t-max", "2", "--trials", "5"]
    assert main([*argv, "--out", str(a)]) == 0
    assert main([*argv, "--jobs", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[1] == "0,5,5,0,0,0,1.0000"


def test_cli_verify(tmp_path, grid_file, capsys):
    assert main(["verify", "--code", str(grid_file), "--lemmas"]) == 0
    assert "FAIL" not in capsys.readouterr().out
    doc = json.loads(grid_file.read_text())
    doc["points"][0][0] = doc["points"][1][0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["verify", "--code", str(bad)]) != 0
