from __future__ import annotations

import json
import shutil

import pytest

from coword_atlas import cli

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.fixture
def demo_dir(tmp_path, fixtures_dir):
    target = tmp_path / "demo"
    shutil.copytree(fixtures_dir / "demo", target)
    return target


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exit_info:
        cli.main(["--version"])
    assert exit_info.value.code == 0
    assert "coword-atlas" in capsys.readouterr().out


def test_stagewise_chain(demo_dir, tmp_path, capsys):
    work = tmp_path / "work"
    work.mkdir()
    criteria = work / "filter.json"
    criteria.write_text(
        json.dumps(
            {"doc_types": ["Article"], "year_min": 1991, "require_keywords": True}
        ),
        encoding="utf-8",
    )

    assert (
        cli.main(
            [
                "ingest",
                str(demo_dir / "alpha.txt"),
                "--label",
                "alpha",
                "--filter",
                str(criteria),
                "-o",
                str(work / "corpus.json"),
            ]
        )
        == 0
    )
    assert "alpha: 3 records" in capsys.readouterr().err

    assert (
        cli.main(
            ["normalize", str(work / "corpus.json"), "-o", str(work / "norm.json")]
        )
        == 0
    )
    normalized = json.loads((work / "norm.json").read_text(encoding="utf-8"))
    keywords = {
        kw for record in normalized["records"] for kw in record["author_keywords"]
    }
    assert "biosensor" in keywords
    assert "Biosensor" not in keywords

    assert (
        cli.main(["build", str(work / "norm.json"), "-o", str(work / "graph.json")])
        == 0
    )
    assert "5 nodes, 7 edges" in capsys.readouterr().err

    assert (
        cli.main(
            [
                "reduce",
                str(work / "graph.json"),
                "--mode",
                "forced-tree",
                "--tie",
                "lex",
                "-o",
                str(work / "network.json"),
            ]
        )
        == 0
    )
    assert "kept 4 of 7 edges" in capsys.readouterr().err

    assert (
        cli.main(
            [
                "analyze",
                str(work / "network.json"),
                "--groups",
                str(work / "groups.json"),
                "--matrix",
                str(work / "matrix.csv"),
                "--scores",
                str(work / "scores.csv"),
            ]
        )
        == 0
    )
    groups = json.loads((work / "groups.json").read_text(encoding="utf-8"))["groups"]
    assert [g["head"] for g in groups] == ["breast cancer", "biosensor"]
    assert (work / "matrix.csv").read_text(encoding="utf-8").startswith("sensor,alpha")
    assert (work / "scores.csv").read_text(encoding="utf-8").startswith(
        "keyword,betweenness\nbreast cancer,"
    )

    assert (
        cli.main(
            [
                "export",
                str(work / "network.json"),
                "--gexf",
                str(work / "net.gexf"),
                "--tables",
                str(work / "tables.csv"),
                "--figure",
                str(work / "map.png"),
            ]
        )
        == 0
    )
    assert (work / "net.gexf").read_text(encoding="utf-8").startswith("<?xml")
    assert (work / "tables.csv").read_text(encoding="utf-8").startswith("group_index")
    assert (work / "map.png").read_bytes().startswith(PNG_MAGIC)


def test_build_keeps_isolates_on_request(demo_dir, tmp_path, capsys):
    work = tmp_path / "work"
    work.mkdir()
    cli.main(
        [
            "ingest",
            str(demo_dir / "gamma.txt"),
            "--label",
            "gamma",
            "-o",
            str(work / "corpus.json"),
        ]
    )
    capsys.readouterr()
    cli.main(["build", str(work / "corpus.json"), "-o", str(work / "pruned.json")])
    err = capsys.readouterr().err
    assert "removed 1 isolated keywords" in err
    assert "3 nodes" in err
    cli.main(
        [
            "build",
            str(work / "corpus.json"),
            "--keep-isolates",
            "-o",
            str(work / "kept.json"),
        ]
    )
    assert "4 nodes" in capsys.readouterr().err


def test_run_verb(demo_dir, capsys):
    rc = cli.main(
        [
            "run",
            "--config",
            str(demo_dir / "config.json"),
            "--out",
            str(demo_dir / "cli-out"),
            "--no-figures",
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "alpha: 3/5 records" in out
    assert "outputs in" in out
    assert (demo_dir / "cli-out" / "report.json").is_file()
    assert not (demo_dir / "cli-out" / "sensor_matrix.png").exists()


def test_export_without_targets_fails(demo_dir, tmp_path, capsys):
    work = tmp_path / "work"
    work.mkdir()
    cli.main(
        [
            "ingest",
            str(demo_dir / "beta.txt"),
            "--label",
            "beta",
            "-o",
            str(work / "corpus.json"),
        ]
    )
    cli.main(["build", str(work / "corpus.json"), "-o", str(work / "graph.json")])
    cli.main(["reduce", str(work / "graph.json"), "-o", str(work / "net.json")])
    capsys.readouterr()
    assert cli.main(["export", str(work / "net.json")]) == 1
    assert "nothing to export" in capsys.readouterr().err


def test_missing_input_reports_error(capsys):
    assert cli.main(["ingest", "no-such-file.txt", "--label", "x"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_strict_ingest_failure(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("PT J\nrogue line\nER\nEF\n", encoding="utf-8")
    assert cli.main(["ingest", str(bad), "--label", "bad", "--strict"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "line 2" in err


def test_bad_threshold_reports_error(demo_dir, tmp_path, capsys):
    work = tmp_path / "work"
    work.mkdir()
    cli.main(
        [
            "ingest",
            str(demo_dir / "beta.txt"),
            "--label",
            "beta",
            "-o",
            str(work / "corpus.json"),
        ]
    )
    cli.main(["build", str(work / "corpus.json"), "-o", str(work / "graph.json")])
    cli.main(["reduce", str(work / "graph.json"), "-o", str(work / "net.json")])
    capsys.readouterr()
    rc = cli.main(
        [
            "analyze",
            str(work / "net.json"),
            "--threshold",
            "1.5",
            "--groups",
            str(work / "g.json"),
            "--matrix",
            str(work / "m.csv"),
        ]
    )
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_broken_rules_file_reports_error(demo_dir, tmp_path, capsys):
    rules = tmp_path / "rules.csv"
    rules.write_text("wrong,header,row\n", encoding="utf-8")
    work = tmp_path / "work"
    work.mkdir()
    cli.main(
        [
            "ingest",
            str(demo_dir / "beta.txt"),
            "--label",
            "beta",
            "-o",
            str(work / "corpus.json"),
        ]
    )
    capsys.readouterr()
    rc = cli.main(
        ["normalize", str(work / "corpus.json"), "--rules", str(rules)]
    )
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


def test_unknown_mode_rejected_by_parser(demo_dir, tmp_path):
    with pytest.raises(SystemExit) as exit_info:
        cli.main(["reduce", "whatever.json", "--mode", "best"])
    assert exit_info.value.code == 2
