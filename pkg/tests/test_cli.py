"""The command-line surface: subcommands, exit codes, report format."""

import json

from dadecheck.cli import main


def test_verify_dade_n1(tmp_path, capsys):
    report = tmp_path / "r.json"
    rc = main(["verify", "dade", "--n", "1", "--report", str(report)])
    assert rc == 0
    records = json.loads(report.read_text())
    assert isinstance(records, list)
    assert all(r["schema"] == 1 for r in records)
    assert all(r["status"] == "pass" for r in records)
    dade = [r for r in records if r["check"] == "dade" and not r["name"].startswith("combined")]
    assert len(dade) == 28  # 14 defects x 2 divisors of 3


def test_verify_mode_both(tmp_path):
    report = tmp_path / "r.json"
    rc = main(["verify", "dade", "--n", "1", "--mode", "both", "--report", str(report)])
    assert rc == 0
    records = json.loads(report.read_text())
    assert any(r["check"] == "dade_mode_agreement" for r in records)


def test_params_listing(capsys):
    rc = main(["params", "--n", "1", "--set", "GI_27", "--list"])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:3] == ["1", "2", "3"]


def test_unknown_set_is_config_error(capsys):
    assert main(["params", "--n", "1", "--set", "NOPE"]) == 2


def test_budget_floor_is_config_error(capsys):
    assert main(["verify", "lemmas", "--budget", "1024"]) == 2


def test_report_roundtrip(tmp_path, capsys):
    report = tmp_path / "r.json"
    main(["verify", "lemmas", "--max-n", "3", "--report", str(report)])
    rc = main(["report", str(report)])
    assert rc == 0
    assert "0 failures" in capsys.readouterr().out


def test_report_deterministic(tmp_path):
    r1 = tmp_path / "a.json"
    r2 = tmp_path / "b.json"
    for path in (r1, r2):
        assert main(["verify", "weyl", "--n", "1", "--report", str(path)]) == 0
    a = json.loads(r1.read_text())
    b = json.loads(r2.read_text())
    for rec in a + b:
        rec["millis"] = 0
    assert a == b


def test_config_file_overridden_by_flags(tmp_path):
    cfg = tmp_path / "dade.cfg"
    cfg.write_text("n = 2\nmode = formula\n")
    report = tmp_path / "r.json"
    rc = main(["verify", "classes", "--config", str(cfg), "--n", "1",
               "--report", str(report)])
    assert rc == 0
    records = json.loads(report.read_text())
    assert {r["n"] for r in records} == {1}


def test_workers_match_serial(tmp_path):
    r1 = tmp_path / "a.json"
    r2 = tmp_path / "b.json"
    assert main(["verify", "classes", "--n", "1", "--n", "2", "--report", str(r1)]) == 0
    assert main(["verify", "classes", "--n", "1", "--n", "2", "--workers", "2",
                 "--report", str(r2)]) == 0
    a = json.loads(r1.read_text())
    b = json.loads(r2.read_text())
    for rec in a + b:
        rec["millis"] = 0
    assert a == b


def test_data_dir_flag(tmp_path, monkeypatch):
    from importlib import resources
    import dadecheck

    src = resources.files("dadecheck") / "data"
    dest = tmp_path / "data"
    dest.mkdir()
    for fname in dadecheck.DATA_FILES:
        (dest / fname).write_text((src / fname).read_text())
    assert main(["verify", "classes", "--n", "1", "--data-dir", str(dest)]) == 0
    # the environment variable supplies the same default
    monkeypatch.setenv("DADE_DATA_DIR", str(dest))
    dadecheck._MODEL_CACHE.clear()
    assert main(["verify", "classes", "--n", "1"]) == 0
    monkeypatch.delenv("DADE_DATA_DIR")
    dadecheck._MODEL_CACHE.clear()


def test_failed_check_exits_one(tmp_path, capsys):
    from importlib import resources
    import dadecheck

    src = resources.files("dadecheck") / "data"
    dest = tmp_path / "data"
    dest.mkdir()
    for fname in dadecheck.DATA_FILES:
        text = (src / fname).read_text()
        if fname == "fixrows.def":
            # sabotage one closed form; brute force must now disagree
            text = text.replace("fix: 2^t-2", "fix: 2^t-1", 1)
        (dest / fname).write_text(text)
    rc = main(["verify", "fixrows", "--n", "1", "--data-dir", str(dest)])
    assert rc == 1
    assert "FAIL" in capsys.readouterr().err
