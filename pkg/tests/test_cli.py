import csv
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from ratedist import datasets
from ratedist.cli import run

GOLDEN = {
    "f1_entropy": "p,H_bits",
    "f3_ba_convergence": "s_nats,iteration,D,R_bits,R_gap",
    "f4_ba_vs_closed": "s_nats,D_ba,R_ba,R_closed,abs_err",
    "f5_code_example": "word,weight,prob,codeword,distortion,avg_distortion,rate,shannon_rate",
    "f6_dispersion": "p,D,j0_bits,j1_bits,V_bits2",
    "f7_fbl_bounds": "n,converse_rate,normal_approx_rate,achievability_rate,shannon_rate,"
    "converse_log2M,achievability_log2M",
    "f8_rate_vs_n": "eps,n,normal_approx_rate,shannon_rate",
    "f9_clt_pmf": "D,kind,k,x,y",
    "f10_comprehensive": "D,R_shannon,R_n100,R_n500,R_n2000",
}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def table(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], np.array(rows[1:], dtype=float)


@pytest.fixture(scope="module")
def figure_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("figs")
    code, _, err = call("figures", "--all", "--out-dir", str(out))
    assert code == 0, err
    return out


def test_rd_curve():
    code, text, _ = call("rd-curve", "--p", "0.3")
    assert code == 0
    header, data = table(text)
    assert header == ["D", "R_bits"]
    assert data.shape == (200, 2)
    assert data[0, 0] == 0.0 and data[-1, 0] == pytest.approx(0.3)
    assert np.interp(0.081, data[:, 0], data[:, 1]) == pytest.approx(0.4756, abs=5e-3)


def test_domain_error_exit_code():
    code, out, err = call("rd-curve", "--p", "1.5")
    assert code == 2
    assert out == ""
    assert "--p" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("rd-curve", "--bogus"),
        ("nope",),
        ("figures",),
        ("figures", "--figure", "f2_missing"),
        ("fbl", "--p", "0.3", "--D", "0.1", "--eps", "0.1"),
        ("ba", "--p", "0.3", "--s", "-1"),
        ("fbl", "--p", "0.5", "--D", "0.1", "--eps", "0.1", "--n", "100"),
    ],
)
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_capacity_exit_code():
    code, _, err = call("code-search", "--p", "0.3", "--n", "6", "--M", "20")
    assert code == 3
    assert "capacity" in err


def test_code_search_and_eval():
    code, text, _ = call("code-search", "--p", "0.3", "--n", "3", "--M", "4")
    assert code == 0
    assert "000 001 010 100" in text
    code, text, _ = call("code-eval", "--p", "0.5", "--codewords", "00,11")
    assert code == 0
    _, data = table(text)
    assert data[0, 5] == 0.25


def test_json_output_and_out_file(tmp_path):
    target = tmp_path / "sub" / "fbl.json"
    code, text, _ = call(
        "fbl", "--p", "0.5", "--D", "0.25", "--eps", "0.5", "--n", "2", "--format", "json", "--out", str(target)
    )
    assert code == 0 and text == ""
    payload = json.loads(target.read_text())
    assert payload["columns"][0] == "n"
    assert oct(os.stat(target).st_mode & 0o777) == "0o644"


@pytest.mark.parametrize(
    "argv",
    [
        ("entropy-curve", "--points", "11"),
        ("ba", "--p", "0.3", "--s", "2.1972245773"),
        ("ba-sweep", "--p", "0.3", "--points", "5"),
        ("tilted", "--p", "0.3", "--points", "4"),
        ("dispersion", "--p", "0.3", "--points", "4"),
        ("fbl-curve", "--p", "0.3", "--D", "0.1", "--eps", "0.1", "--n", "50,100"),
        ("clt-pmf", "--p", "0.3", "--D", "0.1", "--n", "6"),
        ("mc-sim", "--p", "0.3", "--D", "0.1", "--n", "10", "--M", "8", "--trials", "2000", "--seed", "1"),
    ],
)
def test_subcommands_run(argv):
    code, text, err = call(*argv)
    assert code == 0, err
    header, data = table(text)
    assert data.size and np.all(np.isfinite(data))
    assert call(*argv)[1] == text


def test_figures_manifest(figure_dir):
    names = sorted(os.listdir(figure_dir))
    assert names == sorted(f"{fid}.csv" for fid in datasets.FIGURE_IDS)
    assert len(names) == 9
    for fid, header in GOLDEN.items():
        lines = (figure_dir / f"{fid}.csv").read_text().splitlines()
        assert [ln for ln in lines if not ln.startswith("#")][0] == header


def test_figures_byte_identical(figure_dir, tmp_path):
    assert call("figures", "--all", "--out-dir", str(tmp_path))[0] == 0
    for fid in datasets.FIGURE_IDS:
        a = (figure_dir / f"{fid}.csv").read_bytes()
        b = (tmp_path / f"{fid}.csv").read_bytes()
        assert a == b, fid


def test_figure_contents(figure_dir):
    _, f4 = table((figure_dir / "f4_ba_vs_closed.csv").read_text())
    assert f4[:, 4].max() <= 1e-6
    _, f6 = table((figure_dir / "f6_dispersion.csv").read_text())
    assert np.all(f6[f6[:, 0] == 0.5, 4] == 0.0)
    v03 = f6[f6[:, 0] == 0.3, 4]
    assert np.ptp(v03) <= 1e-11
    _, f7 = table((figure_dir / "f7_fbl_bounds.csv").read_text())
    assert np.all(f7[:, 1] <= f7[:, 3])
    text9 = (figure_dir / "f9_clt_pmf.csv").read_text()
    _, f9 = table(text9)
    for D in (0.1, 0.2):
        atoms = f9[(f9[:, 0] == D) & (f9[:, 1] == 0)]
        assert len(atoms) == 7
        assert atoms[:, 4].sum() == pytest.approx(1.0, abs=1e-11)


def test_clt_atoms_sum_exactly():
    ds = datasets.build_figure("f9_clt_pmf")
    for D in (0.1, 0.2):
        total = sum(r[4] for r in ds.rows if r[0] == D and r[1] == 0)
        assert abs(total - 1.0) <= 1e-12


def test_csv_json_round_trip(tmp_path):
    for fid in ("f1_entropy", "f5_code_example", "f7_fbl_bounds"):
        code, _, _ = call("figures", "--figure", fid, "--out-dir", str(tmp_path))
        assert code == 0
        code, _, _ = call("figures", "--figure", fid, "--out-dir", str(tmp_path), "--format", "json")
        assert code == 0
        header, data = table((tmp_path / f"{fid}.csv").read_text())
        payload = json.loads((tmp_path / f"{fid}.json").read_text())
        assert payload["figure_id"] == fid
        assert payload["columns"] == header
        np.testing.assert_array_equal(np.array(payload["rows"], dtype=float), data)


def test_no_partial_files_on_failure(tmp_path):
    code, _, _ = call(
        "figures", "--figure", "f1_entropy", "--figure", "f7_fbl_bounds", "--D", "0.5",
        "--out-dir", str(tmp_path),
    )
    assert code == 2
    assert os.listdir(tmp_path) == []


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ratedist", "dispersion", "--p", "0.3", "--D", "0.1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("p,D")
