import numpy as np
import pytest

from qdiscord.cli import _load_matrix_file, _png_path, emit_csv, run
from qdiscord.discord import q_discord
from qdiscord.experiments import CsvTable
from qdiscord.states import RngStream, random_mixed, werner

FAST = ["--grid-theta", "16", "--grid-phi", "32", "--refine", "3"]


def read_lines(path):
    return path.read_text(encoding="utf-8").splitlines()


def run_to_file(tmp_path, name, args):
    out = tmp_path / name
    code = run(args + ["--out", str(out)])
    assert code == 0
    return out


def test_emit_csv_stdout(capsys):
    emit_csv(CsvTable(("a", "b"), ((1.0, 2.5),), "prov line"), "-")
    out = capsys.readouterr().out
    assert out == "# prov line\na,b\n1,2.5\n"


def test_emit_csv_file_has_lf_endings(tmp_path):
    path = tmp_path / "t.csv"
    emit_csv(CsvTable(("x",), ((0.1,),), ""), str(path))
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.endswith(b"\n")
    # no provenance -> no comment line
    assert raw.splitlines()[0] == b"x"


def test_emit_csv_floats_round_trip(tmp_path):
    vals = (0.1, 1 / 3, 2.0 ** -40, 12345.678901234567)
    path = tmp_path / "t.csv"
    emit_csv(CsvTable(("a", "b", "c", "d"), (vals,), ""), str(path))
    got = tuple(float(tok) for tok in read_lines(path)[1].split(","))
    assert got == vals


def test_emit_csv_empty_rows(tmp_path):
    path = tmp_path / "t.csv"
    emit_csv(CsvTable(("a", "b"), (), "p"), str(path))
    assert read_lines(path) == ["# p", "a,b"]


def test_compute_werner_stdout(capsys):
    assert run(["compute", "--family", "werner", "--c", "0.5",
                "--q", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# qdiscord compute seed=")
    assert "family=werner" in lines[0]
    assert "c=0.5" in lines[0]
    header = lines[1].split(",")
    assert header == ["q", "i_q", "c_q", "theta_raw", "D_q", "basis_theta",
                      "basis_phi", "optimizer_evals"]
    row = dict(zip(header, (float(v) for v in lines[2].split(","))))
    assert np.isclose(row["D_q"], 0.25, rtol=1e-10)


def test_compute_all_families(tmp_path):
    cases = [
        ["compute", "--family", "bell", "--c1", "0.3", "--c2", "0.2",
         "--c3", "0.1", "--q", "1"],
        ["compute", "--family", "alpha", "--alpha", "0.4", "--q", "2"],
        ["compute", "--family", "alphabeta", "--alpha", "0.3", "--beta",
         "0.2", "--q", "1"],
        ["compute", "--family", "random", "--seed", "7", "--q", "2"],
    ]
    for i, args in enumerate(cases):
        out = run_to_file(tmp_path, f"case{i}.csv", args + FAST)
        assert len(read_lines(out)) == 3


def test_compute_fast2_matches_general(tmp_path):
    base = ["compute", "--family", "werner", "--c", "0.5", "--q", "2"]
    plain = read_lines(run_to_file(tmp_path, "a.csv", base))
    fast = read_lines(run_to_file(tmp_path, "b.csv", base + ["--fast2"]))
    d_plain = float(plain[2].split(",")[4])
    d_fast = float(fast[2].split(",")[4])
    assert np.isclose(d_plain, d_fast, atol=1e-11)
    assert "fast2=1" in fast[0]


def test_compute_missing_family_param_exits_one(capsys):
    assert run(["compute", "--family", "werner", "--q", "1"]) == 2
    assert "requires --c" in capsys.readouterr().err


def test_compute_domain_error_exits_one(capsys):
    assert run(["compute", "--family", "werner", "--c", "1.5",
                "--q", "1"]) == 1
    assert "error" in capsys.readouterr().err


def test_fast2_requires_q_two(capsys):
    assert run(["compute", "--family", "werner", "--c", "0.5", "--q", "1",
                "--fast2"]) == 2
    assert "--fast2" in capsys.readouterr().err


def test_matrix_file_roundtrip(tmp_path):
    rho = random_mixed(4, RngStream(99, 0))
    m = np.asarray(rho)
    path = tmp_path / "state.txt"
    rows = ["dim=4"]
    for r in m:
        rows.append(" ".join(f"{v.real:+.17g}{v.imag:+.17g}i" for v in r))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")

    loaded = _load_matrix_file(str(path))
    assert np.allclose(np.asarray(loaded), m, atol=1e-15)

    out = run_to_file(tmp_path, "m.csv",
                      ["compute", "--family", "matrix-file", "--path",
                       str(path), "--q", "2"] + FAST)
    got = float(read_lines(out)[2].split(",")[4])
    expect = q_discord(rho, 2.0, grid_theta=16, grid_phi=32, refine=3).d_q
    assert np.isclose(got, expect, atol=1e-12)


def test_matrix_file_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("dim=4\n1 0 0\n", encoding="utf-8")
    with pytest.raises(ValueError):
        _load_matrix_file(str(bad))
    bad.write_text("dim=2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        _load_matrix_file(str(bad))


def test_matrix_file_missing_exits_one(tmp_path, capsys):
    assert run(["compute", "--family", "matrix-file", "--path",
                str(tmp_path / "nope.txt"), "--q", "1"]) == 1


def test_experiment_reruns_are_byte_identical(tmp_path):
    args = ["scatter", "--samples", "5", "--q", "2", "--seed", "11"] + FAST
    a = run_to_file(tmp_path, "a.csv", args)
    b = run_to_file(tmp_path, "b.csv", args)
    assert a.read_bytes() == b.read_bytes()


def test_threads_flag_does_not_change_bytes(tmp_path):
    base = ["concavity", "--samples", "8", "--bins", "4", "--q", "1",
            "--seed", "3"]
    a = run_to_file(tmp_path, "a.csv", base + ["--threads", "1"])
    b = run_to_file(tmp_path, "b.csv", base + ["--threads", "3"])
    assert a.read_bytes() == b.read_bytes()


def test_werner_sweep_csv_schema(tmp_path):
    out = run_to_file(tmp_path, "w.csv",
                      ["werner-sweep", "--points", "5", "--q", "1"])
    lines = read_lines(out)
    assert lines[1] == "c,q,D_q,S_L"
    assert len(lines) == 2 + 5
    last = lines[-1].split(",")
    assert float(last[0]) == 1.0
    assert np.isclose(float(last[2]), 1.0, atol=1e-12)


def test_ordering_csv_has_crossing_row(tmp_path):
    out = run_to_file(tmp_path, "o.csv",
                      ["ordering", "--alpha1", "0.4", "--alpha2", "0.5",
                       "--qmin", "0.5", "--qmax", "2.0", "--steps", "12"])
    lines = read_lines(out)
    assert lines[1] == "q,D_diff,is_crossing"
    flags = [float(ln.split(",")[2]) for ln in lines[2:]]
    assert flags.count(1.0) == 1
    assert len(lines) == 2 + 12 + 1


def test_default_q_lists_applied(tmp_path):
    out = run_to_file(tmp_path, "p.csv",
                      ["pdf", "--samples", "4", "--bins", "2"] + FAST)
    prov = read_lines(out)[0]
    assert "q=0.5,1.0,2.0" in prov


def test_seed_random_differs_between_runs(tmp_path):
    args = ["compute", "--family", "random", "--q", "1", "--seed",
            "random"] + FAST
    a = run_to_file(tmp_path, "a.csv", args)
    b = run_to_file(tmp_path, "b.csv", args)
    assert read_lines(a)[2] != read_lines(b)[2]


def test_seed_accepts_hex(tmp_path):
    out = run_to_file(tmp_path, "h.csv",
                      ["compute", "--family", "random", "--q", "1",
                       "--seed", "0x2A"] + FAST)
    assert "seed=42" in read_lines(out)[0]


def test_plot_writes_png(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run(["werner-sweep", "--points", "5", "--q", "1",
                "--out", str(out), "--plot"])
    assert code == 0
    png = tmp_path / "sweep.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_plot_requires_file_output(capsys):
    assert run(["werner-sweep", "--q", "1", "--plot"]) == 2
    assert "--plot" in capsys.readouterr().err


def test_png_path_rules():
    assert _png_path("a.csv") == "a.png"
    assert _png_path("b.dat") == "b.dat.png"


def test_verbose_notes_on_stderr(tmp_path, capsys):
    out = tmp_path / "v.csv"
    assert run(["werner-sweep", "--points", "3", "--q", "1",
                "--out", str(out), "--verbose"]) == 0
    err = capsys.readouterr().err
    assert "wrote" in err
    assert str(out) in err


def test_exit_codes_for_bad_usage():
    assert run(["no-such-subcommand"]) == 2
    assert run([]) == 2
    assert run(["scatter", "--bogus"]) == 2
    assert run(["--help"]) == 0


def test_bad_q_rejected():
    assert run(["compute", "--family", "werner", "--c", "0.5",
                "--q", "0"]) == 2
    assert run(["compute", "--family", "werner", "--c", "0.5",
                "--q", "201"]) == 2
