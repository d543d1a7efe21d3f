"""Batch CLI: subcommands, output format, exit codes."""

import io
import math

import numpy as np
import pytest

import tnq
from tnq import channels as cx, cli, tensor as tz

rng = np.random.default_rng(37)


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def parse_kv(text):
    pairs = {}
    for line in text.splitlines():
        name, _, value = line.partition(" = ")
        pairs[name] = value
    return pairs


def test_sat_count(tmp_path):
    p = tmp_path / "f.cnf"
    p.write_text("p cnf 3 2\n1 2 0\n-1 3 0\n")
    code, out, err = run_cli(["sat", "count", str(p)])
    assert code == 0 and err == ""
    assert parse_kv(out)["count"] == "4"


def test_sat_parse_error_exit_code(tmp_path):
    p = tmp_path / "bad.cnf"
    p.write_text("p cnf 2 1\n1 z 0\n")
    code, out, err = run_cli(["sat", "count", str(p)])
    assert code == 2
    assert "bad-token" in err


def test_missing_file_is_usage_error():
    code, _, err = run_cli(["sat", "count", "/nonexistent/f.cnf"])
    assert code == 1


def test_coloring(tmp_path):
    p = tmp_path / "theta.txt"
    p.write_text("0 1\n0 1\n0 1\n")
    code, out, _ = run_cli(["coloring", str(p)])
    assert code == 0
    assert abs(int(parse_kv(out)["K"])) == 6
    code, out, _ = run_cli(["coloring", str(p), "--oracle"])
    assert code == 0
    assert parse_kv(out)["K"] == "6"


def test_coloring_non_cubic_exit_code(tmp_path):
    p = tmp_path / "path.txt"
    p.write_text("0 1\n")
    code, _, err = run_cli(["coloring", str(p)])
    assert code == 2


def test_channel_convert_and_check(tmp_path):
    ch = cx.amplitude_damping_channel(0.3)
    src = tmp_path / "ad.chx"
    dst = tmp_path / "ad_choi.chx"
    src.write_text(cx.write_chx(ch))
    code, out, _ = run_cli(["channel", "convert", "--from", "kraus",
                            "--to", "choi", "--in", str(src),
                            "--out", str(dst)])
    assert code == 0
    assert parse_kv(out)["rep"] == "choi"
    back = cx.read_chx(dst.read_text())
    want = cx.convert(ch, "choi").matrix()
    np.testing.assert_allclose(back.matrix(), want, atol=1e-10)

    code, out, _ = run_cli(["channel", "check", "--in", str(dst)])
    assert code == 0
    kv = parse_kv(out)
    assert kv["CP"] == "true" and kv["TP"] == "true"
    assert kv["unital"] == "false"


def test_channel_convert_rep_mismatch(tmp_path):
    ch = cx.amplitude_damping_channel(0.3)
    src = tmp_path / "ad.chx"
    src.write_text(cx.write_chx(ch))
    code, _, err = run_cli(["channel", "convert", "--from", "choi",
                            "--to", "kraus", "--in", str(src),
                            "--out", str(src) + ".out"])
    assert code == 2


def test_channel_convert_pauli_basis(tmp_path):
    ch = cx.unitary_channel(np.eye(2))
    src = tmp_path / "id.chx"
    dst = tmp_path / "id_chi.chx"
    src.write_text(cx.write_chx(ch))
    code, out, _ = run_cli(["channel", "convert", "--from", "kraus",
                            "--to", "chi", "--in", str(src),
                            "--out", str(dst), "--basis", "pauli"])
    assert code == 0
    chi = cx.read_chx(dst.read_text(), basis=cx.pauli_basis())
    np.testing.assert_allclose(chi.matrix()[0, 0], 2.0, atol=1e-10)


def test_mps_factor(tmp_path):
    ghz = tnq.standard_tensor("GHZ", 4, normalized=True)
    src = tmp_path / "ghz.tntx"
    src.write_text(tz.write_tntx(ghz))
    outdir = tmp_path / "mps"
    code, out, _ = run_cli(["mps", "factor", "--in", str(src),
                            "--out", str(outdir)])
    assert code == 0
    kv = parse_kv(out)
    assert kv["sites"] == "4"
    assert kv["chi_0"] == "2" and kv["chi_1"] == "2" and kv["chi_2"] == "2"
    from tnq import decomp
    back = decomp.mps_contract(decomp.load_mps(outdir))
    np.testing.assert_allclose(back.data, ghz.data, atol=1e-10)


def test_mps_factor_truncate(tmp_path):
    ghz = tnq.standard_tensor("GHZ", 3, normalized=True)
    src = tmp_path / "ghz.tntx"
    src.write_text(tz.write_tntx(ghz))
    code, out, _ = run_cli(["mps", "factor", "--in", str(src),
                            "--out", str(tmp_path / "m"), "--truncate", "1"])
    assert code == 0
    kv = parse_kv(out)
    assert kv["chi_0"] == "1"
    code, _, err = run_cli(["mps", "factor", "--in", str(src),
                            "--out", str(tmp_path / "m2"),
                            "--truncate", "0"])
    assert code == 1


def test_invariants(tmp_path):
    bell = tnq.standard_tensor("BELL", "PHI+", normalized=True)
    src = tmp_path / "bell.tntx"
    src.write_text(tz.write_tntx(bell))
    code, out, _ = run_cli(["invariants", "--in", str(src)])
    assert code == 0
    kv = parse_kv(out)
    assert float(kv["J1"]) == pytest.approx(1.0)
    assert float(kv["J2"]) == pytest.approx(0.5)
    assert float(kv["K1"]) == pytest.approx(1.0)
    assert float(kv["entropy"]) == pytest.approx(math.log(2))
    assert kv["chi"] == "2"


def test_fidelity(tmp_path):
    ch = cx.depolarizing_channel(1.0)
    src = tmp_path / "dep.chx"
    src.write_text(cx.write_chx(ch))
    code, out, _ = run_cli(["fidelity", "--in", str(src)])
    assert code == 0
    assert float(parse_kv(out)["avg_gate_fidelity"]) == pytest.approx(0.5)

    rho = tmp_path / "rho.tntx"
    rho.write_text(tz.write_tntx(tz.operator(np.eye(2) / 2)))
    code, out, _ = run_cli(["fidelity", "--in", str(src),
                            "--state", str(rho)])
    assert code == 0
    assert (float(parse_kv(out)["entanglement_fidelity"])
            == pytest.approx(0.25))


def test_unknown_subcommand_usage_error():
    code, _, err = run_cli(["frobnicate"])
    assert code == 1
    assert err != ""


def test_output_format_significant_digits(tmp_path):
    # values print as plain `name = value` with 12 significant digits
    bell = tnq.standard_tensor("BELL", "PHI+", normalized=True)
    src = tmp_path / "bell.tntx"
    src.write_text(tz.write_tntx(bell))
    _, out, _ = run_cli(["invariants", "--in", str(src)])
    line = [l for l in out.splitlines() if l.startswith("entropy")][0]
    assert line == f"entropy = {math.log(2):.12g}"
