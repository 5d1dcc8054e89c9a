"""Command-line interface, exercised through main() with argv lists."""

import json

import pytest

from tenqec import read_points
from tenqec.cli import main


def test_build_code_builtin(tmp_path, capsys):
    out = tmp_path / "six.json"
    assert main(["build-code", "--builtin", "six_qubit", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["n"] == 6 and data["k"] == 1
    assert data["stabilizers"][0] == "ZIZIII"


def test_build_code_holographic_with_sidecar(tmp_path):
    out = tmp_path / "r2.json"
    assert main(
        ["build-code", "--holographic", "--radius", "2", "--out", str(out)]
    ) == 0
    code = json.loads(out.read_text())
    assert code["n"] == 36
    sidecar = json.loads((tmp_path / "r2.layout.json").read_text())
    assert sidecar["radius"] == 2
    assert len(sidecar["boundary"]) == 36
    assert len(sidecar["nodes"]) == 7


def test_build_code_needs_a_source(capsys):
    with pytest.raises(SystemExit) as info:
        main(["build-code"])
    assert info.value.code == 1


def test_unknown_subcommand_exits_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_decode_prints_table(tmp_path, capsys):
    out = tmp_path / "six.json"
    main(["build-code", "--builtin", "six_qubit", "--out", str(out)])
    capsys.readouterr()
    code = main(
        ["decode", "--code", str(out), "--syndrome", "+-+++", "--p", "0.1"]
    )
    assert code == 0
    text = capsys.readouterr().out
    assert "argmax" in text
    assert "correction" in text
    # a leading minus sign needs the equals spelling
    assert main(
        ["decode", "--code", str(out), "--syndrome=-++++", "--p", "0.1"]
    ) == 0


def test_decode_holographic(capsys):
    assert main(
        ["decode", "--holographic", "--radius", "2", "--syndrome", "1",
         "--p", "0.15"]
    ) == 0
    text = capsys.readouterr().out
    assert "class I" in text


def test_decode_rejects_wrong_syndrome_length(tmp_path, capsys):
    out = tmp_path / "six.json"
    main(["build-code", "--builtin", "six_qubit", "--out", str(out)])
    assert main(
        ["decode", "--code", str(out), "--syndrome", "++", "--p", "0.1"]
    ) == 1


def test_mc_run_writes_csv(tmp_path, capsys):
    out = tmp_path / "mc.csv"
    assert main(
        ["mc-run", "--radius", "2", "--p", "0.16,0.2", "--trials", "50",
         "--seed", "7", "--out", str(out)]
    ) == 0
    points = read_points(str(out))
    assert [pt.p for pt in points] == [0.16, 0.2]
    assert all(pt.trials == 50 for pt in points)


def test_mc_run_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("radius=2\np=0.18\ntrials=40\nseed=3\n")
    out = tmp_path / "mc.csv"
    assert main(
        ["mc-run", "--config", str(cfg), "--trials", "25", "--out", str(out)]
    ) == 0
    points = read_points(str(out))
    assert len(points) == 1
    assert points[0].trials == 25  # the flag wins over the config value
    assert points[0].p == 0.18


def test_fit_threshold_from_csv(tmp_path, capsys):
    # synthetic curves with a known collapse; the fit must find it
    from tenqec import McPoint, write_points

    rows = []
    for radius, n in ((2, 36), (3, 174), (4, 834)):
        for i in range(21):
            p = 0.14 + 0.005 * i
            x = (p - 0.188) * n ** (1 / 2.97)
            rows.append(
                McPoint(radius, n, p, 2000, 0, 0.12 + 0.9 * x + 1.4 * x * x, 0.01)
            )
    path = tmp_path / "synth.csv"
    write_points(str(path), rows)
    out = tmp_path / "fit.json"
    assert main(["fit-threshold", str(path), "--out", str(out)]) == 0
    fit = json.loads(out.read_text())
    assert fit["p_th"] == pytest.approx(0.188, abs=2e-3)
    assert fit["nu"] == pytest.approx(2.97, abs=2e-2)
    assert len(fit["coeffs"]) == 3


def test_fit_threshold_single_radius_fails(tmp_path, capsys):
    from tenqec import McPoint, write_points

    rows = [McPoint(2, 36, 0.1 + 0.02 * i, 100, i, 0.01 * i, 0.01)
            for i in range(5)]
    path = tmp_path / "one.csv"
    write_points(str(path), rows)
    assert main(["fit-threshold", str(path)]) == 1


def test_missing_file_is_reported(capsys):
    assert main(["decode", "--code", "/nonexistent.json", "--syndrome", "+",
                 "--p", "0.1"]) == 1


def test_verify_passes(capsys):
    assert main(["verify"]) == 0
    text = capsys.readouterr().out
    assert text.count("ok") >= 4
