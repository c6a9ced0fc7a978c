import math

import pytest

from quadcong.cli import (
    ExperimentConfig,
    FitResult,
    build_config,
    fit_exponent,
    main,
    nearest_odd_squarefree,
    parse_config_file,
    render_report,
    run,
)
from quadcong.errors import FitError


def read(path):
    with open(path) as fh:
        return fh.read()


def test_fit_exponent_exact_line():
    rows = [(10, 10.0**0.5), (100, 100.0**0.5), (1000, 1000.0**0.5)]
    fit = fit_exponent(rows)
    assert fit.slope == pytest.approx(0.5, abs=1e-12)
    assert fit.intercept == pytest.approx(0.0, abs=1e-12)
    assert fit.residual == pytest.approx(0.0, abs=1e-9)


def test_fit_exponent_known_offset():
    rows = [(q, 3.0 * q**0.7) for q in (11, 101, 1009, 9973)]
    fit = fit_exponent(rows)
    assert fit.slope == pytest.approx(0.7, abs=1e-9)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-9)


def test_fit_exponent_guards():
    with pytest.raises(FitError):
        fit_exponent([(10, 1.0), (10, 2.0), (10, 3.0)])  # one distinct q
    with pytest.raises(FitError):
        fit_exponent([(10, 1.0), (20, 2.0)])  # too few
    with pytest.raises(FitError):
        fit_exponent([(10, 1.0), (20, -2.0), (30, 1.0)])  # nonpositive value


def test_nearest_odd_squarefree():
    assert nearest_odd_squarefree(15) == 15
    assert nearest_odd_squarefree(9) == 7  # ties toward smaller
    assert nearest_odd_squarefree(1) == 3
    assert nearest_odd_squarefree(49) == 47


def test_parse_config_file(tmp_path):
    p = tmp_path / "c.conf"
    p.write_text("# comment\ncommand=solve\nq=15,21\nsamples=4\n\nseed=z\n")
    cfg = parse_config_file(str(p))
    assert cfg == {"command": "solve", "q": "15,21", "samples": "4", "seed": "z"}
    bad = tmp_path / "bad.conf"
    bad.write_text("command solve\n")
    with pytest.raises(ValueError):
        parse_config_file(str(bad))
    unknown = tmp_path / "unk.conf"
    unknown.write_text("verbosity=3\n")
    with pytest.raises(ValueError):
        parse_config_file(str(unknown))


def test_build_config_precedence(tmp_path):
    p = tmp_path / "c.conf"
    p.write_text("command=solve\nq=15\nsamples=4\nseed=filed\n")
    cfg = build_config(["--config", str(p), "--samples", "9"])
    assert cfg.command == "solve"
    assert cfg.qs == (15,)
    assert cfg.samples == 9  # flag beats file
    assert cfg.seed == "filed"  # file beats default
    cfg2 = build_config(["oracle", "--config", str(p)])
    assert cfg2.command == "oracle"  # positional beats file


def test_build_config_defaults():
    cfg = build_config(["solve"])
    assert cfg.qs == (15, 105, 1155)
    assert cfg.samples == 3
    assert cfg.jobs == 1


def test_build_config_rejects_garbage():
    with pytest.raises(ValueError):
        build_config(["--samples", "3"])  # no command anywhere
    with pytest.raises(ValueError):
        build_config(["solve", "--q-range", "9:3"])
    with pytest.raises(ValueError):
        build_config(["solve", "--jobs", "0"])


def test_main_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["solve", "--q", "15", "--samples", "1", "--out", str(out)]) == 0
    text = read(out)
    assert text.startswith("# quadcong solve")
    assert text.endswith("\n")
    assert main(["solve", "--q", "9"]) == 2  # not square-free
    assert main(["weil-scan", "--q", "15"]) == 2  # not prime
    assert main(["--config", str(tmp_path / "missing.conf")]) == 2
    capsys.readouterr()


def test_empty_q_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    assert main(["solve", "--q", "", "--out", str(out)]) == 0
    lines = read(out).strip().splitlines()
    assert lines[-1].startswith("q,")  # header row, no data
    assert all(ln.startswith("#") for ln in lines[:-1])


def test_solve_report_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["solve", "--q", "15,105", "--samples", "2", "--seed", "7"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert read(a) == read(b)


def test_jobs_do_not_change_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["grid-vanish", "--q", "15,21,33,35", "--samples", "3", "--seed", "4"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--jobs", "3", "--out", str(b)]) == 0
    assert read(a) == read(b)


def test_weil_scan_columns(tmp_path):
    out = tmp_path / "w.csv"
    assert main(["weil-scan", "--q-range", "3:7", "--samples", "2", "--out", str(out)]) == 0
    lines = [ln for ln in read(out).splitlines() if not ln.startswith("#")]
    assert lines[0] == "q,p,r,tuple-hash,delta-gcd,sum,bound,ok"
    for ln in lines[1:]:
        parts = ln.split(",")
        assert len(parts) == 8
        q, p, r = int(parts[0]), int(parts[1]), int(parts[2])
        assert q == p and r in (2, 3)
        assert abs(int(parts[5])) <= int(parts[6])
        assert parts[7] == "1"


def test_oracle_report_contains_witness(tmp_path):
    out = tmp_path / "o.csv"
    assert main(["oracle", "--q", "15", "--samples", "2", "--out", str(out)]) == 0
    lines = [ln for ln in read(out).splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    assert header[:7] == ["q", "f11", "f22", "f33", "f12", "f13", "f23"]
    assert "min_zero_norm_sq" in header and "w1" in header
    assert all(ln.split(",")[-1] == "1" for ln in lines[1:])


def test_exponent_fit_report(tmp_path):
    out = tmp_path / "f.csv"
    assert main([
        "exponent-fit", "--q-range", "1001:4001", "--samples", "5", "--out", str(out),
    ]) == 0
    text = read(out)
    assert "fit pipeline: slope=" in text
    assert "series,q,value" in text


def test_second_moment_exact_totals(tmp_path):
    out = tmp_path / "m.csv"
    assert main(["second-moment", "--q", "15,21", "--samples", "2", "--out", str(out)]) == 0
    lines = [ln for ln in read(out).splitlines() if not ln.startswith("#")]
    for ln in lines[1:]:
        parts = ln.split(",")
        pairs, moment = int(parts[-3]), int(parts[-2])
        assert moment >= pairs  # sum of squares dominates the sum when counts are 0/1+
        assert parts[-1] == "1"


def test_run_accepts_config_object(tmp_path):
    cfg = ExperimentConfig(
        command="grid-vanish", qs=(15,), samples=2, seed="s", out=str(tmp_path / "g.csv")
    )
    assert run(cfg) == 0
    assert "must vanish" in read(tmp_path / "g.csv")


def test_fit_result_type():
    assert FitResult(0.5, 0.0, 0.0).slope == 0.5
