import json
import subprocess
import sys

import pytest

from uniholder.cli import EXIT_DEGENERATE, EXIT_OK, EXIT_USAGE, int_expr, main, order_arg, window_arg


@pytest.fixture
def weier_file(tmp_path):
    path = tmp_path / "w.f64"
    assert main(["gen", "weierstrass", "--a", str(2**-0.5), "--n", "2^12", "-o", str(path)]) == EXIT_OK
    return path


def test_argument_types():
    assert int_expr("2^16") == 65536
    assert int_expr("1024") == 1024
    assert order_arg("auto") == "auto" and order_arg("3") == 3
    assert window_arg("4:12") == (4, 12)
    for bad, fn in [("x", int_expr), ("0", order_arg), ("9", order_arg), ("12:4", window_arg)]:
        with pytest.raises(Exception):
            fn(bad)


def test_gen_and_analyze(weier_file, capsys):
    capsys.readouterr()
    assert main(["analyze", str(weier_file)]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] == "ok"
    for e in doc["estimates"].values():
        assert abs(e["value"] - 0.5) < 0.08


def test_analyze_csv_and_many_inputs(weier_file, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HOLDER_THREADS", "2")
    out = tmp_path / "r.csv"
    assert main(["analyze", str(weier_file), str(weier_file), "--format", "csv", "--M", "1",
                 "-o", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "input,estimate,value,j_min,j_max,M"
    assert len(lines) == 1 + 2 * 4


def test_analyze_without_provenance(weier_file, capsys):
    capsys.readouterr()
    main(["analyze", str(weier_file), "--M", "1", "--no-provenance", "--alpha", "0.5"])
    doc = json.loads(capsys.readouterr().out)
    assert "provenance" not in doc
    assert doc["witness"][0]["alpha"] == 0.5


def test_gap_pyramid_pipeline(tmp_path, capsys):
    path = tmp_path / "gap.json"
    assert main(["gen", "gap-pyramid", "--alpha", "0.5", "--M", "1", "-o", str(path)]) == EXIT_OK
    capsys.readouterr()
    assert main(["analyze", str(path), "--M", "1"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["criterion"]["exponent"] - 0.5) <= 0.03
    assert doc["naive_upper"]["divergent"] is True
    assert main(["criterion", str(path), "--M", "1", "--format", "csv", "--window", "2:5"]) == EXIT_OK
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "j,tail_sup,head_sup,value" and len(rows) == 5


def test_custom_pattern(tmp_path):
    path = tmp_path / "p.json"
    assert main(["gen", "gap-pyramid", "--alpha", "0.5", "--pattern", "1101", "--jmax", "4",
                 "-o", str(path)]) == EXIT_OK
    assert main(["gen", "gap-pyramid", "--alpha", "0.5", "--pattern", "1x", "-o", str(path)]) == EXIT_USAGE


def test_zero_signal_exit_code(tmp_path):
    import numpy as np

    from uniholder.io import SignalFile
    from uniholder.smoothness import SampledSignal

    path = tmp_path / "z.f64"
    SignalFile(SampledSignal(np.zeros(2**12), dx=2.0**-11)).write(path)
    assert main(["analyze", str(path), "--M", "1"]) == EXIT_DEGENERATE


def test_cex1_truncation_is_a_usage_error(tmp_path, capsys):
    path = tmp_path / "c.f64"
    assert main(["gen", "cex1", "--alpha", "0.5", "--eps", "0.5", "--truncation", "3", "--n", "1024",
                 "-o", str(path)]) == EXIT_USAGE
    assert "feasible n = 2" in capsys.readouterr().err
    assert main(["gen", "cex1", "--alpha", "0.5", "--eps", "0.5", "--n", "1024", "-o", str(path)]) == EXIT_OK


def test_fabe_meyer(tmp_path, capsys):
    path = tmp_path / "f.f64"
    assert main(["gen", "fabe", "--alpha", "0.5", "--eps", "0.5", "--nmax", "3", "--n", "2^12",
                 "-o", str(path)]) == EXIT_OK
    head = json.loads((tmp_path / "f.f64.json").read_text())
    assert head["provenance"]["j_n"] == [2, 4, 8, 16]
    capsys.readouterr()
    assert main(["analyze", str(path), "--wavelet", "meyer", "--M", "1"]) in (EXIT_OK, EXIT_DEGENERATE)
    assert main(["criterion", str(path), "--wavelet", "meyer"]) == EXIT_USAGE


def test_missing_input(tmp_path):
    assert main(["analyze", str(tmp_path / "nope.f64")]) == EXIT_USAGE


def test_bad_suite_is_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == EXIT_USAGE


def test_verify_fast_suite(capsys):
    assert main(["verify", "gap", "--format", "csv"]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out.startswith("suite,check,passed")
    assert "PASS gap:" in captured.err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "uniholder", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("uniholder ")
