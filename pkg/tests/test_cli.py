import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_stack
from monodromy import ConfigError, GeometryError, LayerStack, SquareBarrier
from monodromy.cli import CSV_COLUMNS, main, parse_stack_config, serialize_stack


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_single_barrier():
    stack = parse_stack_config("kind=barrier width_mm=3.0 kappa0_per_mm=1.0\n")
    assert stack.layers == (SquareBarrier(1.5, 1.0),)
    assert stack.width == 3.0


def test_parse_double_barrier_with_comments():
    text = """
    # two 1 mm barriers
    kind=barrier width_mm=1 kappa0_per_mm=2.5
    kind=gap width_mm=1   # cavity
    kind=barrier width_mm=1 kappa0_per_mm=2.5
    """
    assert parse_stack_config(text).width == 3.0


def test_parse_origin_and_all_kinds():
    text = "origin_mm=-2\nkind=delta lambda_per_mm=5\nkind=dielectric width_mm=5 n=1.61\n"
    stack = parse_stack_config(text)
    assert stack.origin == -2.0 and stack.width == 5.0


@pytest.mark.parametrize(
    "text, exc, line",
    [
        ("kind=gap width_mm=1\nkind=gap width_mm=-1\n", GeometryError, 2),
        ("kind=barrier width_mm=-3 kappa0_per_mm=1\n", GeometryError, 1),
        ("kind=wall width_mm=1\n", ConfigError, 1),
        ("kind=gap width_mm=1 colour=red\n", ConfigError, 1),
        ("\nkind=barrier width_mm=1\n", ConfigError, 2),
        ("kind=gap width_mm=abc\n", ConfigError, 1),
        ("kind=gap width_mm\n", ConfigError, 1),
        ("width_mm=1\n", ConfigError, 1),
    ],
)
def test_parse_errors_name_the_line(text, exc, line):
    with pytest.raises(exc) as info:
        parse_stack_config(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), origin=st.floats(-10, 10))
def test_serialize_round_trip(seed, origin):
    stack = random_stack(np.random.default_rng(seed))
    stack = LayerStack(stack.layers, origin=origin)
    assert parse_stack_config(serialize_stack(stack)) == stack


def test_presets_command(capsys):
    code, out, _ = run(["presets"], capsys)
    assert code == 0
    assert "Kiang10Delta" in out and len(out.splitlines()) == 7


def test_sweep_columns_and_kiang_bands(capsys):
    code, out, _ = run(["sweep", "--preset", "Kiang10Delta"], capsys)
    assert code == 0
    rows = read_csv(out)
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert len(rows) == 1000
    assert all(r["f_GHz"] == "" for r in rows)
    forbidden = [r for r in rows if r["band_flag"] == "forbidden"]
    assert forbidden and all(float(r["speed_ratio"]) > 1 for r in forbidden)


def test_sweep_empty_stack(tmp_path, capsys):
    cfg = tmp_path / "empty.cfg"
    cfg.write_text("# nothing\n")
    code, out, _ = run(["sweep", "--config", str(cfg), "--kmin", "0.1", "--kmax", "1",
                        "--points", "11"], capsys)
    assert code == 0
    assert all(r["abs_T"] == "1" for r in read_csv(out))


def test_sweep_fig4_phase_rises_above_barrier(capsys):
    code, out, _ = run(["sweep", "--preset", "Fig4SingleBarrier"], capsys)
    rows = read_csv(out)
    k = np.array([float(r["k_per_mm"]) for r in rows])
    ph = np.array([float(r["arg_T_unwrapped_rad"]) for r in rows])
    assert np.all(np.diff(ph[k > 2.5]) >= 0)


def test_sweep_twelve_digits(capsys):
    _, out, _ = run(["sweep", "--preset", "NimtzSetupB_TwoBarrier", "--points", "5"], capsys)
    row = read_csv(out)[1]
    assert row["k_per_mm"] == f"{0.1 + 0.15 / 4:.12g}"
    assert float(row["f_GHz"]) == pytest.approx(299.792458 * (0.1375) / (2 * math.pi), rel=1e-11)


def test_sweep_to_file_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--preset", "Fig6DoubleBarrier", "--out", str(a)]) == 0
    assert main(["sweep", "--preset", "Fig6DoubleBarrier", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_dispersion_override(capsys):
    _, out, _ = run(["sweep", "--preset", "Fig6DoubleBarrier", "--dispersion", "particle",
                     "--points", "5"], capsys)
    assert read_csv(out)[0]["f_GHz"] == ""


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("kind=gap width_mm=-1\n")
    code, _, err = run(["sweep", "--config", str(bad), "--kmin", "0.1", "--kmax", "1"], capsys)
    assert code == 3 and "line 1" in err
    bad.write_text("kind=hole\n")
    code, _, err = run(["sweep", "--config", str(bad), "--kmin", "0.1", "--kmax", "1"], capsys)
    assert code == 2
    code, _, _ = run(["sweep", "--preset", "Nope"], capsys)
    assert code == 2
    code, _, _ = run(["sweep", "--config", str(tmp_path / "missing.cfg"), "--kmin", "1",
                      "--kmax", "2"], capsys)
    assert code == 2
    code, _, _ = run(["sweep", "--preset", "Kiang10Delta", "--out",
                      str(tmp_path / "no" / "dir.csv")], capsys)
    assert code == 2
    code, _, _ = run(["sweep", "--preset", "Kiang10Delta", "--kmin", "2", "--kmax", "1"], capsys)
    assert code == 2
    code, _, _ = run(["sweep", "--preset", "Kiang10Delta", "--config", str(bad)], capsys)
    assert code == 2


def test_resonances_setup_a(capsys):
    code, out, _ = run(["resonances", "--preset", "NimtzSetupA"], capsys)
    assert code == 0
    assert "c/(2 d_cav)   = 1.15304791538" in out
    assert "c/(2 d_total)" in out
    spacing = float(out.split("mode spacing")[1].split(":")[1].split()[0])
    assert spacing == pytest.approx(1.097, rel=0.03)


def test_resonances_empty(tmp_path, capsys):
    cfg = tmp_path / "e.cfg"
    cfg.write_text("")
    code, out, _ = run(["resonances", "--config", str(cfg), "--kmin", "0.1", "--kmax", "1"], capsys)
    assert code == 0
    assert out.startswith("# 0 resonance(s)")


@pytest.mark.parametrize("name", ["Fig4SingleBarrier", "NimtzSetupB_EightBarrier", "Kiang10Delta"])
def test_verify_passes(name, capsys):
    code, out, _ = run(["verify", "--preset", name], capsys)
    assert code == 0 and "PASS" in out


def test_verify_single_barrier_includes_phase_check(capsys):
    _, out, _ = run(["verify", "--preset", "Fig5NimtzSingle"], capsys)
    assert "closed-form phase" in out


def test_verify_negative_control(capsys):
    code, out, _ = run(["verify", "--preset", "Fig6DoubleBarrier", "--corrupt", "1e-6"], capsys)
    assert code == 4 and "FAIL" in out
