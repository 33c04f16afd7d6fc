import csv
import io
import json

import pytest

from geomineq.cli import main
from geomineq.suite import (
    CheckJob,
    SuiteConfig,
    csv_text,
    default_suite,
    exit_code_for,
    job_seed,
    load_suite,
    run_job,
    run_suite,
    validate_job,
)


def small_suite():
    jobs = (
        CheckJob(check="bt_cover", bodies=("cube:3",), cover="1,2|1,3|2,3"),
        CheckJob(check="meyer", bodies=("cross:3",)),
        CheckJob(check="restricted_cover", bodies=("random-hull:3,8",),
                 cover="1|2"),
        CheckJob(check="sz", bodies=("cube:2", "cross:2", "cross:2"),
                 params={"r": "2"}),
    )
    return SuiteConfig(jobs=jobs, seed=7)


def test_job_seed_deterministic():
    assert job_seed(3, 0) == job_seed(3, 0)
    assert job_seed(3, 0) != job_seed(3, 1)
    assert job_seed(3, 2) != job_seed(4, 2)


def test_run_job_bt():
    job = CheckJob(check="bt_cover", bodies=("cube:3",), cover="1,2|1,3|2,3")
    reports = run_job(job, 0, 0)
    assert len(reports) == 1
    assert reports[0].verdict == "pass"
    assert reports[0].check == "bt_cover"


def test_validate_job_rejects_unknown_check():
    with pytest.raises(ValueError):
        validate_job(CheckJob(check="not-a-check", bodies=("cube:3",)))


def test_validate_job_rejects_bad_cover():
    with pytest.raises(ValueError):
        validate_job(CheckJob(check="bt_cover", bodies=("cube:3",),
                              cover="1,2||"))


def test_validate_job_rejects_bad_body():
    with pytest.raises(ValueError):
        validate_job(CheckJob(check="meyer", bodies=("pyramid:9",)))


def test_run_suite_sequential():
    result = run_suite(small_suite())
    assert len(result.reports) == 4
    assert all(r.verdict == "pass" for r in result.reports)
    assert result.exit_code == 0
    assert result.summary["pass"] == 4


def test_run_suite_parallel_matches_sequential():
    cfg = small_suite()
    seq = run_suite(cfg, jobs_override=1)
    par = run_suite(cfg, jobs_override=2)
    assert csv_text(seq.reports) == csv_text(par.reports)


def test_csv_deterministic_across_runs():
    cfg = small_suite()
    a = csv_text(run_suite(cfg).reports)
    b = csv_text(run_suite(cfg).reports)
    assert a == b
    rows = list(csv.DictReader(io.StringIO(a)))
    assert len(rows) == 4
    assert set(rows[0]) >= {"check", "body", "verdict", "lhs", "rhs", "ms"}
    assert all(row["ms"] == "0" for row in rows)


def test_default_suite_shape():
    cfg = default_suite(seed=0)
    assert len(cfg.jobs) >= 20
    checks = {j.check for j in cfg.jobs}
    assert "bt_cover" in checks
    assert "berwald" in checks
    assert "hug_schneider_r2" in checks


def test_exit_codes():
    assert exit_code_for([]) == 0


def test_load_suite_toml(tmp_path):
    cfg_path = tmp_path / "suite.toml"
    cfg_path.write_text(
        'seed = 11\n'
        'parallelism = 1\n'
        '\n'
        '[[job]]\n'
        'check = "bt_cover"\n'
        'body = "cube:3"\n'
        'cover = "1,2|1,3|2,3"\n'
        '\n'
        '[[job]]\n'
        'check = "sz"\n'
        'bodies = ["cube:2", "cross:2", "cross:2"]\n'
        'r = 2\n'
    )
    cfg = load_suite(cfg_path)
    assert cfg.seed == 11
    assert len(cfg.jobs) == 2
    assert cfg.jobs[1].params["r"] == 2
    result = run_suite(cfg)
    assert result.exit_code == 0


def test_cli_check_stdout(capsys):
    code = main(["check", "bt_cover", "--body", "cube:3",
                 "--cover", "1,2|1,3|2,3", "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["reports"][0]["verdict"] == "pass"


def test_cli_check_csv_out(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code = main(["check", "meyer", "--body", "cross:3",
                 "--out", str(out), "--format", "csv"])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert rows[0]["verdict"] == "pass"


def test_cli_globals_before_subcommand(tmp_path):
    out = tmp_path / "r.csv"
    code = main(["--out", str(out), "--format", "csv",
                 "check", "meyer", "--body", "cross:3"])
    assert code == 0
    assert out.exists()


def test_cli_gen(tmp_path, capsys):
    out = tmp_path / "b.json"
    code = main(["gen", "random-hull:3,8", "--seed", "5", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["vertices"]


def test_cli_gen_deterministic(tmp_path):
    out1 = tmp_path / "b1.json"
    out2 = tmp_path / "b2.json"
    main(["gen", "random-hull:3,8", "--seed", "5", "--out", str(out1)])
    main(["gen", "random-hull:3,8", "--seed", "5", "--out", str(out2)])
    assert out1.read_text() == out2.read_text()


def test_cli_suite_default_small(tmp_path):
    cfg = tmp_path / "suite.toml"
    cfg.write_text(
        'seed = 3\n'
        '[[job]]\n'
        'check = "meyer"\n'
        'body = "cross:3"\n'
    )
    out = tmp_path / "out.csv"
    code = main(["suite", str(cfg), "--out", str(out), "--format", "csv"])
    assert code == 0
    text = out.read_text()
    assert "meyer" in text


def test_cli_suite_csv_byte_identical(tmp_path):
    cfg = tmp_path / "suite.toml"
    cfg.write_text(
        'seed = 3\n'
        '[[job]]\n'
        'check = "bt_cover"\n'
        'body = "random-hull:3,9"\n'
        'cover = "1,2|1,3|2,3"\n'
        '[[job]]\n'
        'check = "berwald"\n'
        'm = 2\n'
        'p = 1\n'
        'q = 3\n'
    )
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["suite", str(cfg), "--out", str(out1), "--format", "csv"]) == 0
    assert main(["suite", str(cfg), "--out", str(out2), "--format", "csv"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_search(capsys):
    code = main(["search", "meyer", "--family", "diagonal-images",
                 "--iters", "4", "--n", "3", "--seed", "2"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["check"] == "meyer"
    assert "witness" in doc


def test_cli_mixvol(capsys):
    code = main(["mixvol", "--bodies", "cube:3", "cross:3",
                 "--mults", "2,1"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "2"


def test_cli_centroid(capsys):
    code = main(["centroid", "--body", "cube:2", "--p", "2",
                 "--samples", "4000", "--dirs", "4"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["p"] == 2.0


def test_cli_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["check", "definitely-not-a-check", "--body", "cube:3"])
    assert exc.value.code == 1


def test_cli_bad_body_is_usage_error(capsys):
    code = main(["check", "meyer", "--body", "pyramid:9"])
    assert code == 1
