"""The file-format layer: training text, corpus records, predictions."""

from __future__ import annotations

import pytest

from lmadapter.corpus_files import (
    PredictionRow,
    format_predictions,
    read_corpus,
    read_training_text,
    write_predictions,
)
from lmadapter.errors import AdapterError

SENTINEL = "<|endofresult|>"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestTrainingText:
    def test_two_records(self, tmp_path):
        path = write(
            tmp_path,
            "train.txt",
            "TASK: first task RESULT:\n"
            "assign c = a;\n"
            f"{SENTINEL}\n"
            "TASK: second task RESULT:\n"
            "assign c = a;\n"
            "assign d = b;\n"
            f"{SENTINEL}\n",
        )
        records = read_training_text(path, SENTINEL)
        assert [r.english for r in records] == ["first task", "second task"]
        assert records[0].verilog == "assign c = a;"
        assert records[1].verilog == "assign c = a;\nassign d = b;"

    def test_empty_file_is_empty(self, tmp_path):
        assert read_training_text(write(tmp_path, "t.txt", ""), SENTINEL) == []

    def test_unterminated_record_rejected(self, tmp_path):
        path = write(tmp_path, "t.txt", "TASK: a RESULT:\nassign c = a;\n")
        with pytest.raises(AdapterError, match="not terminated"):
            read_training_text(path, SENTINEL)

    def test_text_between_records_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "t.txt",
            f"TASK: a RESULT:\nassign c = a;\n{SENTINEL}\nstray line\n",
        )
        with pytest.raises(AdapterError, match="TASK"):
            read_training_text(path, SENTINEL)

    def test_malformed_task_line_rejected(self, tmp_path):
        path = write(tmp_path, "t.txt", f"TASK a RESULT:\nx\n{SENTINEL}\n")
        with pytest.raises(AdapterError, match="t.txt:1"):
            read_training_text(path, SENTINEL)

    def test_custom_sentinel(self, tmp_path):
        path = write(tmp_path, "t.txt", "TASK: a RESULT:\nx\n<stop>\n")
        records = read_training_text(path, "<stop>")
        assert records[0].verilog == "x"


class TestCorpus:
    LINE = (
        "template_id=pa00\tindex=3\tsplit=validate"
        "\tenglish=tab\\there\tverilog=line\\nbreak and back\\\\slash\n"
    )

    def test_escapes_decoded(self, tmp_path):
        pair, = read_corpus(write(tmp_path, "c.txt", self.LINE))
        assert pair.key == ("pa00", 3)
        assert pair.split == "validate"
        assert pair.english == "tab\there"
        assert pair.verilog == "line\nbreak and back\\slash"

    def test_blank_lines_skipped(self, tmp_path):
        pairs = read_corpus(write(tmp_path, "c.txt", "\n" + self.LINE + "\n"))
        assert len(pairs) == 1

    @pytest.mark.parametrize(
        "line,message",
        [
            ("template_id=pa00\tindex=0\tsplit=train\tenglish=e", "missing fields"),
            (
                "template_id=pa00\tindex=0\tsplit=train\tenglish=e\tverilog=v\textra=1",
                "unknown fields",
            ),
            ("template_id=pa00\tindex=x\tsplit=train\tenglish=e\tverilog=v", "not an integer"),
            ("template_id=pa00\tindex=0\tsplit=dev\tenglish=e\tverilog=v", "unknown split"),
            ("template_id=pa00\tindex=0\tsplit=train\tenglish=e\tverilog=\\q", "bad escape"),
            ("template_id\tindex=0\tsplit=train\tenglish=e\tverilog=v", "no '='"),
        ],
    )
    def test_bad_lines_rejected(self, tmp_path, line, message):
        with pytest.raises(AdapterError, match=message):
            read_corpus(write(tmp_path, "c.txt", line + "\n"))

    def test_duplicate_key_rejected(self, tmp_path):
        with pytest.raises(AdapterError, match="duplicate key pa00:3"):
            read_corpus(write(tmp_path, "c.txt", self.LINE + self.LINE))


class TestPredictions:
    def test_exact_bytes(self):
        rows = [
            PredictionRow("pa00", 0, "assign c = a & b;"),
            PredictionRow("mt00", 1, "assign c = a;\nassign d = b;"),
            PredictionRow("pr10", 7, "", skip="token limit"),
        ]
        assert format_predictions(rows) == (
            "template_id=pa00\tindex=0\tprediction=assign c = a & b;\n"
            "template_id=mt00\tindex=1\tprediction=assign c = a;\\nassign d = b;\n"
            "template_id=pr10\tindex=7\tskip=token limit\tprediction=\n"
        )

    def test_write_reads_back_as_corpus_style_fields(self, tmp_path):
        out = tmp_path / "p.txt"
        write_predictions([PredictionRow("pa00", 0, "tab\tand\\slash")], out)
        assert out.read_text(encoding="utf-8") == (
            "template_id=pa00\tindex=0\tprediction=tab\\tand\\\\slash\n"
        )
