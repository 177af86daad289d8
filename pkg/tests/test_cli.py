"""Command-line interface tests, run in-process through main(argv)."""

import gzip
import json
import os

import pytest

from mediumband import cli


def _run(*argv) -> int:
    return cli.main(list(argv))


def _read(path: str) -> str:
    if path.endswith(".gz"):
        with gzip.open(path, "rt") as fh:
            return fh.read()
    with open(path) as fh:
        return fh.read()


def test_sir_command_writes_decreasing_rows(tmp_path):
    out = str(tmp_path)
    code = _run("sir", "--pds", "20", "--pds", "60", "--realizations", "2000",
                "--seed", "3", "--threads", "1", "--out-dir", out)
    assert code == cli.EXIT_OK
    lines = _read(os.path.join(out, "sir.csv")).splitlines()
    assert lines[0] == "pds,mean_sir_db,realizations"
    rows = [line.split(",") for line in lines[1:]]
    assert [float(r[0]) for r in rows] == [20.0, 60.0]
    assert float(rows[0][1]) > float(rows[1][1])
    assert all(int(r[2]) == 2000 for r in rows)
    manifest = json.load(open(os.path.join(out, "sir_manifest.json")))
    assert manifest["master_seed"] == 3
    assert manifest["command"].startswith("mediumband sir")
    assert "sir.csv" in manifest["outputs"][0]


def test_invalid_pds_is_config_error(tmp_path):
    assert _run("ber", "--pds", "200", "--out-dir", str(tmp_path)) == cli.EXIT_CONFIG


def test_unknown_scheme_is_config_error(tmp_path):
    code = _run("ber", "--schemes", "phase-lock", "--out-dir", str(tmp_path))
    assert code == cli.EXIT_CONFIG


def test_fit_insufficient_samples_is_runtime_error(tmp_path, capsys):
    src = os.path.join(tmp_path, "pdf.csv")
    with open(src, "w") as fh:
        fh.write("pds,sample_index,re_g,im_g\n")
        for i in range(100):
            fh.write(f"20.0,{i},0.5,0.1\n")
    code = _run("fit", "--input", src, "--out-dir", str(tmp_path))
    assert code == cli.EXIT_RUNTIME
    assert "insufficient samples" in capsys.readouterr().err


def test_fit_missing_input_is_config_error(tmp_path):
    code = _run("fit", "--input", os.path.join(tmp_path, "nope.csv"), "--out-dir", str(tmp_path))
    assert code == cli.EXIT_CONFIG


def test_fit_garbled_input_is_config_error(tmp_path):
    src = os.path.join(tmp_path, "pdf.csv")
    with open(src, "w") as fh:
        fh.write("pds,sample_index,re_g,im_g\n20.0,0,not-a-number,0.0\n")
    code = _run("fit", "--input", src, "--out-dir", str(tmp_path))
    assert code == cli.EXIT_CONFIG


def test_rerun_is_byte_identical(tmp_path):
    a = os.path.join(tmp_path, "a")
    b = os.path.join(tmp_path, "b")
    for out in (a, b):
        code = _run("scatter", "--pds", "20", "--samples", "3000",
                    "--seed", "5", "--threads", "2", "--out-dir", out)
        assert code == cli.EXIT_OK
    bytes_a = open(os.path.join(a, "scatter.csv"), "rb").read()
    bytes_b = open(os.path.join(b, "scatter.csv"), "rb").read()
    assert bytes_a == bytes_b


def test_gzip_output_is_byte_identical_across_paths(tmp_path):
    a = os.path.join(tmp_path, "a")
    b = os.path.join(tmp_path, "b")
    for out in (a, b):
        code = _run("pdf", "--pds", "20", "--samples", "12000",
                    "--seed", "5", "--gzip", "--out-dir", out)
        assert code == cli.EXIT_OK
    bytes_a = open(os.path.join(a, "pdf.csv.gz"), "rb").read()
    bytes_b = open(os.path.join(b, "pdf.csv.gz"), "rb").read()
    assert bytes_a == bytes_b
    header = _read(os.path.join(a, "pdf.csv.gz")).splitlines()[0]
    assert header == "pds,sample_index,re_g,im_g"


def test_flag_overrides_config_file(tmp_path):
    cfg = os.path.join(tmp_path, "run.cfg")
    with open(cfg, "w") as fh:
        fh.write("pds_list = 40\nsir_realizations = 1500\nmaster_seed = 9\n")
    out = str(tmp_path)
    code = _run("sir", "--config", cfg, "--pds", "20", "--out-dir", out, "--threads", "1")
    assert code == cli.EXIT_OK
    rows = _read(os.path.join(out, "sir.csv")).splitlines()[1:]
    assert [float(r.split(",")[0]) for r in rows] == [20.0]
    manifest = json.load(open(os.path.join(out, "sir_manifest.json")))
    assert manifest["master_seed"] == 9
    assert manifest["config"]["sir_realizations"] == 1500


def test_seed_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("MEDIUMBAND_SEED", "77")
    out1 = os.path.join(tmp_path, "env")
    code = _run("sir", "--pds", "20", "--realizations", "1000", "--out-dir", out1)
    assert code == cli.EXIT_OK
    assert json.load(open(os.path.join(out1, "sir_manifest.json")))["master_seed"] == 77
    # An explicit flag beats the environment.
    out2 = os.path.join(tmp_path, "flag")
    code = _run("sir", "--pds", "20", "--realizations", "1000", "--seed", "5", "--out-dir", out2)
    assert code == cli.EXIT_OK
    assert json.load(open(os.path.join(out2, "sir_manifest.json")))["master_seed"] == 5
    # A config file's seed beats the environment too.
    cfg = os.path.join(tmp_path, "run.cfg")
    with open(cfg, "w") as fh:
        fh.write("master_seed = 9\nsir_realizations = 1000\npds_list = 20\n")
    out3 = os.path.join(tmp_path, "cfg")
    code = _run("sir", "--config", cfg, "--out-dir", out3)
    assert code == cli.EXIT_OK
    assert json.load(open(os.path.join(out3, "sir_manifest.json")))["master_seed"] == 9


def test_manifest_round_trip_reproduces_run(tmp_path):
    out1 = os.path.join(tmp_path, "first")
    code = _run("pdf", "--pds", "20", "--samples", "12000", "--seed", "13", "--out-dir", out1)
    assert code == cli.EXIT_OK
    manifest_path = os.path.join(out1, "pdf_manifest.json")
    out2 = os.path.join(tmp_path, "second")
    code = _run("pdf", "--config", manifest_path, "--out-dir", out2)
    assert code == cli.EXIT_OK
    first = open(os.path.join(out1, "pdf.csv"), "rb").read()
    second = open(os.path.join(out2, "pdf.csv"), "rb").read()
    assert first == second


def test_pdf_then_fit_pipeline(tmp_path):
    out = str(tmp_path)
    code = _run("pdf", "--pds", "20", "--samples", "12000", "--seed", "13", "--out-dir", out)
    assert code == cli.EXIT_OK
    direct = _read(os.path.join(out, "fit.csv")).splitlines()
    refit_dir = os.path.join(tmp_path, "refit")
    code = _run("fit", "--input", os.path.join(out, "pdf.csv"), "--out-dir", refit_dir)
    assert code == cli.EXIT_OK
    refit = _read(os.path.join(refit_dir, "fit.csv")).splitlines()
    assert refit[0] == direct[0] == "pds,K,sigma_I_sq,sigma_O_sq,loglik"
    # Same samples in, same fitted parameters out.
    assert refit[1] == direct[1]
    k = float(refit[1].split(",")[1])
    assert 0.80 < k < 1.0


def test_ber_quick_run_schema(tmp_path):
    out = str(tmp_path)
    code = _run("ber", "--pds", "20", "--snr-min", "10", "--snr-max", "10",
                "--snr-step", "5", "--schemes", "lower-bound,rayleigh-analytic",
                "--target-errors", "20", "--max-bits", "100000",
                "--seed", "3", "--threads", "1", "--out-dir", out)
    assert code == cli.EXIT_OK
    lines = _read(os.path.join(out, "ber.csv")).splitlines()
    assert lines[0] == "scheme,pds,gamma_bar_db,bits,errors,ber,stderr"
    schemes = {line.split(",")[0] for line in lines[1:]}
    assert schemes == {"lower-bound", "rayleigh-analytic"}
    manifest = json.load(open(os.path.join(out, "ber_manifest.json")))
    assert manifest["config"]["snr_grid_db"] == [10.0]


def test_missing_subcommand_exits_with_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2
