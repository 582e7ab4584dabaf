import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from stragglesim.cli import main
from stragglesim.experiments import read_csv

ROOT = Path(__file__).resolve().parents[1]


def write(tmp_path, obj, name="c.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def test_sweep_row_count(tmp_path):
    cfg = write(tmp_path, {"N": [8, 16, 32], "K": 4, "p": [0.1, 0.2], "trials": 2})
    out = tmp_path / "o.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    assert len(read_csv(out).rows) == 2 * 3 * 2


def test_sweep_bad_config(tmp_path, capsys):
    cfg = write(tmp_path, {"N": [8], "trails": 3})
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o.csv")]) == 2
    assert "trails" in capsys.readouterr().err
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == 2


def test_sweep_failed_cells_exit_zero(tmp_path):
    cfg = write(tmp_path, {"schemes": ["LeTCC"], "N": [4], "K": 2, "mode": "s", "S": [4], "trials": 1})
    out = tmp_path / "o.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    assert "failed" in out.read_text()


def test_golden_config_byte_identical(tmp_path):
    golden = (ROOT / "tests" / "golden" / "golden_sweep.csv").read_bytes()
    for threads in ("1", "8"):
        out = tmp_path / f"g{threads}.csv"
        assert main(["sweep", "--config", str(ROOT / "configs" / "golden_sweep.json"),
                     "--out", str(out), "--threads", threads]) == 0
        assert out.read_bytes() == golden


def test_plot(tmp_path):
    cfg = write(tmp_path, {"N": [8, 16, 32], "K": 4, "p": [0.1], "trials": 2})
    csv_path, svg = tmp_path / "o.csv", tmp_path / "o.svg"
    main(["sweep", "--config", str(cfg), "--out", str(csv_path)])
    assert main(["plot", "--csv", str(csv_path), "--out", str(svg), "--overlay"]) == 0
    root = ET.parse(svg).getroot()
    ns = "{http://www.w3.org/2000/svg}"
    assert len(root.findall(f".//{ns}polyline")) == 2
    assert len(root.findall(f".//{ns}path")) == 2


def test_plot_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("hello,world\n1,2\n")
    assert main(["plot", "--csv", str(bad), "--out", str(tmp_path / "x.svg")]) == 2
    empty = tmp_path / "empty.csv"
    empty.write_text((ROOT / "tests" / "golden" / "golden_sweep.csv").read_text().splitlines()[0] + "\n")
    assert main(["plot", "--csv", str(empty), "--out", str(tmp_path / "x.svg")]) == 2
    assert main(["plot", "--csv", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "x.svg")]) == 2


def test_longest_run(capsys):
    assert main(["longest-run", "--n", "3", "--p", "0.5", "--trials", "200", "--seed", "1"]) == 0
    first = capsys.readouterr().out
    mean = first.splitlines()[1].split(",")
    assert mean[0] == "mean" and float(mean[5]) == 1.375
    main(["longest-run", "--n", "3", "--p", "0.5", "--trials", "200", "--seed", "1"])
    assert capsys.readouterr().out == first


def test_longest_run_p_zero(capsys):
    assert main(["longest-run", "--n", "40", "--p", "0", "--trials", "50"]) == 0
    for line in capsys.readouterr().out.splitlines()[1:]:
        f = line.split(",")
        assert float(f[5]) == 0.0 and float(f[6]) == 0.0


def test_longest_run_bad_args():
    assert main(["longest-run", "--n", "0", "--p", "0.5"]) == 2
    assert main(["longest-run", "--n", "5", "--p", "1.0"]) == 2


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_validate(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 10 and all(line.startswith("PASS") for line in out)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stragglesim", "longest-run", "--n", "4", "--p", "0.5",
                           "--trials", "10"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("statistic,")


valid_configs = st.fixed_dictionaries(
    {
        "schemes": st.lists(st.sampled_from(["BACC", "LeTCC"]), min_size=1, max_size=2, unique=True),
        "N": st.lists(st.integers(4, 24), min_size=1, max_size=4, unique=True),
        "K": st.integers(1, 6),
        "trials": st.integers(1, 3),
        "seed": st.integers(0, 1000),
        "function": st.sampled_from(["xsinx", "poly"]),
        "alpha_points": st.sampled_from(["uniform", "chebyshev1"]),
        "beta_points": st.sampled_from(["uniform", "chebyshev1", "chebyshev2"]),
        "lambda_enc": st.sampled_from([0.0, 1e-3]),
        "lambda_dec": st.sampled_from([0.0, 1e-3]),
    },
    optional={"p": st.lists(st.sampled_from([0.0, 0.1, 0.3]), min_size=1, max_size=2, unique=True)},
)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(valid_configs)
def test_sweep_then_plot_round_trip(tmp_path, raw):
    if raw["function"] == "poly":
        raw = raw | {"function_params": {"coeffs": [0.1, 1.0, -2.0, 0.5]}}
    cfg = write(tmp_path, raw)
    csv_path, svg = tmp_path / "r.csv", tmp_path / "r.svg"
    assert main(["sweep", "--config", str(cfg), "--out", str(csv_path)]) == 0
    assert main(["plot", "--csv", str(csv_path), "--out", str(svg), "--overlay"]) == 0
    ET.parse(svg)
