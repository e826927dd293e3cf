import io
import json

import numpy as np
import pytest

from aqc_entangle.cli import main, parse_amplitudes
from aqc_entangle.output import csv_to_trace, trace_to_csv


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_run_default_grid():
    code, out, _ = run("run", "--algorithm", "search", "--qubits", "2", "--initial", "green", "--epsilon", "0.01")
    assert code == 0
    lines = out.split("\n")
    assert lines[0].startswith("s,t_opt,e_minus,e_plus,gap,m_abs,entropy_q0,entropy_q1,entropy_max")
    assert lines[-1] == "" and len(lines) == 20001 + 2
    assert lines[1].split(",")[0] == "0"
    assert "\r" not in out


def test_csv_round_trip_byte_identical():
    code, out, _ = run("run", "--algorithm", "dj", "--qubits", "2", "--initial", "cyan", "--grid-points", "2001")
    assert code == 0
    header, data = csv_to_trace(out)
    assert trace_to_csv(header, data) == out


def test_fraction_list_equals_preset():
    a = run("run", "--algorithm", "search", "--qubits", "2", "--initial", "1,3/2,1,3/2", "--grid-points", "2001")
    b = run("run", "--algorithm", "search", "--qubits", "2", "--initial", "red", "--grid-points", "2001")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]
    assert "normalized on ingest" in a[2]


def test_dj_final_entropy(tmp_path):
    path = tmp_path / "dj.csv"
    svg = tmp_path / "dj.svg"
    code, out, _ = run("run", "--algorithm", "dj", "--qubits", "3", "--alpha", "0", "--initial", "magenta",
                       "--grid-points", "2001", "-o", str(path), "--svg", str(svg))
    assert code == 0 and out == ""
    header, data = csv_to_trace(path.read_text())
    assert data[-1, header.index("entropy_max")] > 0.1
    assert svg.read_text().startswith("<svg")


def test_run_json():
    code, out, _ = run("run", "--algorithm", "ctdj", "--qubits", "2", "--grid-points", "1001", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["schema_version"] == "1" and len(rec["columns"]["s"]) == 1001


def test_run_deterministic_bytes():
    args = ("run", "--algorithm", "search", "--qubits", "3", "--initial", "cyan", "--grid-points", "2001")
    assert run(*args)[1] == run(*args)[1]


@pytest.mark.parametrize("argv", [
    ("run", "--algorithm", "search", "--qubits", "2", "--grid-points", "10"),
    ("run", "--algorithm", "search", "--qubits", "2", "--epsilon", "0"),
    ("run", "--algorithm", "search", "--qubits", "2", "--initial", "orange"),
    ("run", "--algorithm", "search", "--qubits", "2", "--initial", "1,2,3"),
    ("run", "--algorithm", "search", "--qubits", "2", "--marked-index", "9"),
    ("run", "--algorithm", "grover", "--qubits", "2"),
    ("run", "--qubits", "2"),
    ("runtimes", "--algorithm", "search", "--qubits", "2", "--presets", "red,orange"),
    ("closest-product", "--amps", "1,0,0"),
    ("closest-product", "--amps", "1,0"),
    ("closest-product", "--amps", "0,0,0,0"),
    ("closest-product", "--amps", "a,b,c,d"),
    (),
])
def test_config_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_numerical_failure_exit_3():
    # initial state orthogonal to the marked state: ground level crosses at s = 1/2
    code, _, err = run("run", "--algorithm", "search", "--qubits", "2", "--initial", "0,1,0,0", "--grid-points", "1001")
    assert code == 3 and "degenerate" in err


def test_runtimes_check_search3():
    code, out, err = run("runtimes", "--algorithm", "search", "--qubits", "3", "--check")
    assert code == 0, err
    assert "check: PASS" in err
    assert out.split("\n")[2].startswith("red")


def test_runtimes_check_ctdj_json():
    code, out, err = run("runtimes", "--algorithm", "ctdj", "--qubits", "2", "--check", "--json")
    assert code == 0 and "check: PASS" in err
    rec = json.loads(out)
    assert rec["schema_version"] == "1"
    assert [r["preset"] for r in rec["rows"]] == ["cyan", "blue", "yellow"]


def test_runtimes_check_skipped_off_reference_eps():
    code, _, err = run("runtimes", "--algorithm", "search", "--qubits", "2", "--epsilon", "0.02", "--check",
                       "--grid-points", "2001")
    assert code == 0 and "skipped" in err


def test_runtimes_printed_integrand_check_fails():
    code, out, err = run("runtimes", "--algorithm", "ctdj", "--qubits", "2", "--check", "--json", "--printed-trun",
                         "--grid-points", "2001")
    assert code == 1 and "MISMATCH" in err
    assert all(r["t_printed_integrand"] < 1 for r in json.loads(out)["rows"])


def test_closest_product_examples():
    code, out, _ = run("closest-product", "--amps", "0,1,1,0")
    rec = json.loads(out)
    assert code == 0 and rec["schema_version"] == "1"
    assert rec["overlap"] == pytest.approx(0.70711, abs=1e-5)
    code, out, _ = run("closest-product", "--amps", "1,0,0,0,0,0,0,1")
    assert json.loads(out)["d_unnormalized"] == pytest.approx(0.5, abs=1e-6)
    code, out, _ = run("closest-product", "--amps", "1,0,0,0")
    rec = json.loads(out)
    assert rec["overlap"] == 1.0
    assert rec["d_normalized"] == rec["d_unnormalized"] == rec["d_hilbert_schmidt"] == 0.0
    assert list(rec)[:3] == ["schema_version", "n_qubits", "overlap"]


def test_parse_amplitudes():
    assert [float(x) for x in parse_amplitudes("1, 0.5, 3/2, -2")] == [1.0, 0.5, 1.5, -2.0]


def test_selftest_printed_integrand_reports_expected_failures():
    code, out, _ = run("selftest", "--fast", "--printed-trun")
    assert code == 0
    xfail = [line for line in out.splitlines() if line.startswith("XFAIL")]
    assert len(xfail) == 5 and all("optimized" in line for line in xfail)
    assert "GHZ" in out and "alternating vs grid oracle" not in out
