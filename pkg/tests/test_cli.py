import subprocess
import sys

import numpy as np
import pytest
import yaml

from wtbc.cli import emit_plot_data, parse_union, run
from wtbc.probability import bsc_triple, channel_from_marginals, save_channel
from wtbc.regions import polytope_equal, template_symbols
from wtbc.search import BoundaryPoint


@pytest.fixture()
def bsc_file(tmp_path):
    path = tmp_path / "bsc.yaml"
    save_channel(bsc_triple(0.1, 0.2, 0.3), path)
    return str(path)


@pytest.fixture()
def noiseless_file(tmp_path):
    eye = np.eye(2)
    path = tmp_path / "noiseless.yaml"
    save_channel(channel_from_marginals(eye, eye, eye), path)
    return str(path)


def test_order_report(bsc_file, capsys):
    code = run(["order", "--channel", bsc_file, "--relation", "less-noisy",
                "--strong", "Y1", "--weak", "Z"])
    out = capsys.readouterr().out
    assert code == 0
    assert "less_noisy: Y1 >= Z" in out
    assert "holds: true" in out


def test_order_malformed_channel_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    t = np.full((2, 2, 2, 2), 1 / 8)
    t[0, 0, 0, 0] += 0.01
    yaml.safe_dump({"alphabets": {"X": 2, "Y1": 2, "Y2": 2, "Z": 2},
                    "transitions": t.tolist()}, open(bad, "w"))
    code = run(["order", "--channel", str(bad), "--relation", "degraded"])
    err = capsys.readouterr().err
    assert code == 2
    assert "1e-09" in err


def test_missing_channel_file_exits_3(capsys):
    code = run(["order", "--channel", "/nonexistent/ch.yaml", "--relation", "degraded"])
    assert code == 3


def test_region_fme_compare_pipeline(tmp_path, capsys):
    rng = np.random.default_rng(0)
    vals = {s: float(rng.uniform(0, 2)) for s in sorted(template_symbols("prop1_raw"))}
    vf = tmp_path / "vals.yaml"
    yaml.safe_dump(vals, open(vf, "w"))
    fme_out = tmp_path / "fme.txt"
    printed_out = tmp_path / "printed.txt"
    assert run(["region", "fme", "--template", "prop1_raw", "--values", str(vf),
                "--out", str(fme_out)]) == 0
    assert run(["region", "instantiate", "--template", "prop1_region",
                "--values", str(vf), "--out", str(printed_out)]) == 0
    assert run(["region", "compare", "--a", str(fme_out), "--b", str(printed_out)]) == 0
    out = capsys.readouterr().out
    assert "equal: true" in out


def test_region_union_file_roundtrip(tmp_path):
    rng = np.random.default_rng(1)
    vals = {s: float(rng.uniform(0, 2)) for s in sorted(template_symbols("thm6"))}
    vf = tmp_path / "vals.yaml"
    yaml.safe_dump(vals, open(vf, "w"))
    out = tmp_path / "thm6.txt"
    assert run(["region", "instantiate", "--template", "thm6", "--values", str(vf),
                "--out", str(out)]) == 0
    union = parse_union(open(out).read())
    assert len(union.pieces) == 3


def test_search_emits_boundary_csv(bsc_file, tmp_path, capsys):
    out = tmp_path / "pt.csv"
    code = run(["search", "--channel", bsc_file, "--template", "thm5",
                "--weights", "0,0,1,0", "--grid", "1/32", "--layers", "1,1",
                "--out", str(out)])
    assert code == 0
    lines = open(out).read().splitlines()
    assert lines[0].startswith("Rc,R0,R1,R2,w_Rc")
    assert len(lines) == 2


def test_simulate_xor_csv(noiseless_file, tmp_path):
    out = tmp_path / "rep.csv"
    code = run(["simulate", "--channel", noiseless_file, "--scheme", "xor",
                "--n", "1", "--layout", "m1=2,m2=2,m12=2,m21=2",
                "--seed", "0", "--out", str(out)])
    assert code == 0
    text = open(out).read()
    assert "I(M1;Z^n),0,exact,0" in text
    assert text.splitlines()[0] == "quantity,value,method,samples"


def test_cli_outputs_are_byte_identical(noiseless_file, tmp_path):
    blobs = []
    for k in range(3):
        out = tmp_path / f"rep{k}.csv"
        assert run(["simulate", "--channel", noiseless_file, "--scheme", "xor",
                    "--n", "1", "--layout", "m1=2,m2=2,m12=2,m21=2",
                    "--seed", "0", "--out", str(out)]) == 0
        blobs.append(open(out, "rb").read())
    assert blobs[0] == blobs[1] == blobs[2]


def test_help_exits_zero():
    for args in (["--help"], ["order", "--help"], ["region", "--help"],
                 ["search", "--help"], ["simulate", "--help"]):
        proc = subprocess.run([sys.executable, "-m", "wtbc.cli"] + args,
                              capture_output=True)
        assert proc.returncode == 0
        assert b"usage" in proc.stdout.lower()


def test_emit_plot_data_two_line_csv(tmp_path):
    bp = BoundaryPoint(rates={"R1": 0.25, "R2": 0.0}, weights={"R1": 1.0, "R2": 0.0},
                       distribution=None, template="thm3_joint", value=0.25)
    path = tmp_path / "pt.csv"
    emit_plot_data([bp], path)
    lines = open(path).read().splitlines()
    assert lines == ["R1,R2,w_R1,w_R2", "0.25,0,1,0"]


def test_simulate_invalid_layout_exits_2(noiseless_file, capsys):
    code = run(["simulate", "--channel", noiseless_file, "--scheme", "xor",
                "--n", "1", "--layout", "m1=2,m2=3"])
    assert code == 2
