"""End-to-end tests for the command line interface."""

from __future__ import annotations

import pytest

from veritask.cli import main
from veritask.corpus import load_corpus
from veritask.evaluate import import_records

TINY_CONFIG = """\
[plan]
pa00 = 8
pa17 = 2
pr00 = 4
mt00 = 4 validate=1 pool=trained
mt01 = 2 pool=non_trained

[split]
train_fraction = 0.75
"""


@pytest.fixture
def run_dir(tmp_path):
    config = tmp_path / "tiny.cfg"
    config.write_text(TINY_CONFIG, encoding="utf-8")
    out = tmp_path / "run"
    return config, out


def invoke(*argv) -> int:
    return main([str(arg) for arg in argv])


def test_pipeline_end_to_end(run_dir, capsys):
    config, out = run_dir
    assert invoke("generate", "--config", config, "--out-dir", out, "--seed", "5") == 0
    assert (out / "corpus.txt").is_file()
    assert (out / "manifest.txt").is_file()

    assert invoke("split", "--config", config, "--out-dir", out, "--seed", "5") == 0
    corpus = load_corpus(out / "corpus.txt", out / "manifest.txt")
    by_split: dict[str, int] = {}
    for pair in corpus.pairs:
        by_split[pair.split] = by_split.get(pair.split, 0) + 1
    assert by_split["held_out"] == 4  # pa17 + mt01
    assert by_split["validate"] == 2 + 1 + 1  # pa00, pr00, mt00 override

    assert invoke("export", "--out-dir", out) == 0
    training = (out / "train.txt").read_text(encoding="utf-8")
    assert training.startswith("TASK: ")
    assert "RESULT:\n" in training

    assert invoke("translate", "--batch", "--out-dir", out) == 0
    assert invoke("evaluate", "--out-dir", out) == 0
    assert "(100.0%)" in capsys.readouterr().out

    records = import_records(out / "records.txt")
    assert len(records) == 8
    assert all(r.correct and r.similarity == 1.0 for r in records)

    assert invoke("report", "--out-dir", out) == 0
    report = (out / "report.txt").read_text(encoding="utf-8")
    assert report.splitlines()[0].startswith("Type")
    assert "Overall" in report


def test_pipeline_outputs_are_deterministic(run_dir):
    config, out = run_dir
    other = out.parent / "other"
    for target, jobs in ((out, "1"), (other, "3")):
        assert invoke("generate", "--config", config, "--out-dir", target,
                      "--seed", "9", "--jobs", jobs) == 0
        assert invoke("split", "--config", config, "--out-dir", target, "--seed", "9") == 0
        assert invoke("export", "--out-dir", target) == 0
    for name in ("corpus.txt", "manifest.txt", "train.txt"):
        assert (out / name).read_bytes() == (other / name).read_bytes()


def test_rerun_is_idempotent(run_dir):
    config, out = run_dir
    for _ in range(2):
        assert invoke("generate", "--config", config, "--out-dir", out, "--seed", "3") == 0
        assert invoke("split", "--config", config, "--out-dir", out, "--seed", "3") == 0
        first = (out / "corpus.txt").read_bytes()
    assert (out / "corpus.txt").read_bytes() == first


def test_split_fraction_flag(run_dir):
    config, out = run_dir
    invoke("generate", "--config", config, "--out-dir", out)
    assert invoke("split", "--out-dir", out, "--train-fraction", "0.5") == 0
    corpus = load_corpus(out / "corpus.txt", out / "manifest.txt")
    pa00 = [p for p in corpus.pairs if p.template_id == "pa00"]
    assert sum(p.split == "validate" for p in pa00) == 4
    assert corpus.manifest.train_fraction == 0.5


def test_plan_override_flag(run_dir, capsys):
    config, out = run_dir
    assert invoke("generate", "--config", config, "--out-dir", out,
                  "--set", "plan.pa00=3") == 0
    assert "wrote 15 pairs" in capsys.readouterr().out


def test_export_options(run_dir):
    config, out = run_dir
    invoke("generate", "--config", config, "--out-dir", out)
    invoke("split", "--config", config, "--out-dir", out)
    dest = out / "valid.txt"
    assert invoke("export", "--out-dir", out, "--which", "validate",
                  "--sentinel", "<stop>", "--shuffle-seed", "4", "--out", dest) == 0
    text = dest.read_text(encoding="utf-8")
    assert text.count("<stop>\n") == 4
    again = out / "valid2.txt"
    invoke("export", "--out-dir", out, "--which", "validate",
           "--sentinel", "<stop>", "--shuffle-seed", "4", "--out", again)
    assert again.read_text(encoding="utf-8") == text


def test_lint_file_modes(tmp_path, capsys):
    clean = tmp_path / "clean.v"
    clean.write_text("assign c = !(a & b);\n", encoding="utf-8")
    assert invoke("lint", clean) == 0
    assert capsys.readouterr().out == ""

    dirty = tmp_path / "dirty.v"
    dirty.write_text("assign c = (a & ;\n", encoding="utf-8")
    assert invoke("lint", dirty) == 2
    out = capsys.readouterr().out
    assert out.startswith(f"{dirty}:1:")
    assert ":1:17: " in out


def test_translate_single_task(tmp_path, capsys):
    task = tmp_path / "task.txt"
    task.write_text("Put the result of `a' nand `b' in `c'.\n", encoding="utf-8")
    assert invoke("translate", task) == 0
    assert capsys.readouterr().out == "assign c = !(a & b);\n"


def test_translate_reports_no_match(tmp_path, capsys):
    task = tmp_path / "task.txt"
    task.write_text("please write me some verilog\n", encoding="utf-8")
    assert invoke("translate", task) == 2
    assert "NoMatchError" in capsys.readouterr().err


def test_evaluate_missing_predictions(run_dir, capsys):
    config, out = run_dir
    invoke("generate", "--config", config, "--out-dir", out)
    invoke("split", "--config", config, "--out-dir", out)
    invoke("translate", "--batch", "--out-dir", out)
    full = (out / "predictions.txt").read_text(encoding="utf-8").splitlines(True)
    (out / "predictions.txt").write_text("".join(full[:-2]), encoding="utf-8")
    capsys.readouterr()
    assert invoke("evaluate", "--out-dir", out) == 2
    err = capsys.readouterr().err
    assert "MissingPredictionError" in err
    assert err.count("missing: ") == 2


def test_report_formats(run_dir):
    config, out = run_dir
    invoke("generate", "--config", config, "--out-dir", out)
    invoke("split", "--config", config, "--out-dir", out)
    invoke("translate", "--batch", "--out-dir", out)
    assert invoke("report", "--out-dir", out, "--format", "csv") == 0
    csv_text = (out / "report.csv").read_text(encoding="utf-8")
    assert csv_text.splitlines()[0] == "Type,Template Name,# Trained,# Validated,# Correct,Avg. Error R-O"
    assert invoke("report", "--out-dir", out, "--format", "pipe") == 0
    pipe_text = (out / "report.md").read_text(encoding="utf-8")
    assert pipe_text.startswith("| Type")


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        invoke("bogus")
    assert info.value.code == 1
    assert invoke("generate", "--out-dir", tmp_path / "x") == 1
    assert invoke("generate", "--config", "desk_scale", "--out-dir", tmp_path / "x",
                  "--set", "nonsense") == 1
    assert invoke() == 1
    capsys.readouterr()


def test_bad_split_name_is_usage_error(run_dir, capsys):
    config, out = run_dir
    invoke("generate", "--config", config, "--out-dir", out)
    invoke("split", "--config", config, "--out-dir", out)
    invoke("translate", "--batch", "--out-dir", out)
    capsys.readouterr()
    assert invoke("evaluate", "--out-dir", out, "--splits", "test") == 1


def test_missing_corpus_is_data_error(tmp_path, capsys):
    assert invoke("split", "--out-dir", tmp_path / "nowhere") == 2
    assert "error" in capsys.readouterr().err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        invoke("--version")
    assert info.value.code == 0
    assert capsys.readouterr().out.startswith("veritask ")
