import json
from pathlib import Path

import pytest

from conftest import SAMPLE_SCRIPT
from narrascope.cli import run


def read_outputs(out_dir: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}


@pytest.fixture()
def script_path(tmp_path):
    path = tmp_path / "sample.txt"
    path.write_text(SAMPLE_SCRIPT, encoding="utf-8")
    return path


class TestParseAnalyze:
    def test_analyze_emits_row_records(self, marx_path, tmp_path):
        out = tmp_path / "out"
        assert run(["analyze", str(marx_path), "--kind", "prose", "--out", str(out)]) == 0
        data = json.loads((out / "factor_model.json").read_text())
        assert len(data["rows"]) == 21
        assert data["manifest"]["tool"] == "narrascope"
        assert (out / "matrix.txt").read_text().startswith("ROWS 21 COLS 974 ")

    def test_parse_then_analyze_round_trip(self, marx_path, tmp_path):
        direct = tmp_path / "direct"
        assert run(["analyze", str(marx_path), "--out", str(direct)]) == 0

        parsed = tmp_path / "parsed"
        assert run(["parse", str(marx_path), "--out", str(parsed)]) == 0
        reingested = tmp_path / "reingested"
        assert run(["analyze", str(parsed / "document.json"), "--out", str(reingested)]) == 0

        assert (direct / "factor_model.json").read_bytes() == \
            (reingested / "factor_model.json").read_bytes()

    def test_auto_detection_screenplay(self, script_path, tmp_path):
        out = tmp_path / "out"
        assert run(["parse", str(script_path), "--out", str(out)]) == 0
        doc = json.loads((out / "document.json").read_text())
        assert doc["source_kind"] == "screenplay"
        assert len(doc["segments"]) == 4

    def test_beats_flag(self, script_path, tmp_path):
        out = tmp_path / "out"
        assert run(["parse", str(script_path), "--beats-of", "2", "--out", str(out)]) == 0
        doc = json.loads((out / "document.json").read_text())
        assert [seg["kind"] for seg in doc["segments"]] == ["beat", "beat"]

    def test_beats_of_unknown_ordinal(self, script_path, tmp_path, capsys):
        code = run(["parse", str(script_path), "--beats-of", "99", "--out", str(tmp_path / "o")])
        assert code == 1
        assert "ordinal" in capsys.readouterr().err


class TestSegmentCommand:
    def test_blocks_and_svg(self, marx_path, tmp_path):
        out = tmp_path / "out"
        assert run(["segment", str(marx_path), "--blocks", "5", "--out", str(out)]) == 0
        seg = json.loads((out / "segmentation.json").read_text())
        assert len(seg["blocks"]) == 5
        assert len(seg["boundaries"]) == 4
        svg = (out / "dendrogram.svg").read_text()
        assert svg.startswith("<svg")
        dend = json.loads((out / "dendrogram.json").read_text())
        assert len(dend["merges"]) == 20


class TestBaselineCommand:
    def test_report_and_csv(self, marx_path, tmp_path):
        out = tmp_path / "out"
        code = run(["baseline", str(marx_path), "--attr", "A2", "--R", "49",
                    "--seed", "7", "--out", str(out)])
        assert code == 0
        report = json.loads((out / "baseline_report.json").read_text())
        assert report["R"] == 49
        assert report["seed"] == 7
        assert len(report["replicates"]) == 49
        csv_lines = (out / "baseline_summary.csv").read_text().splitlines()
        assert csv_lines[0].startswith("attribute,")
        assert csv_lines[1].startswith("A2_movement_variability,")

    def test_unknown_attribute_is_user_error(self, marx_path, tmp_path, capsys):
        code = run(["baseline", str(marx_path), "--attr", "A99", "--out", str(tmp_path / "x")])
        assert code == 1
        assert "unknown attribute" in capsys.readouterr().err


class TestSummarizeCommand:
    def test_backbone_artifacts(self, marx_path, tmp_path):
        out = tmp_path / "out"
        assert run(["summarize", str(marx_path), "--out", str(out)]) == 0
        backbone = json.loads((out / "backbone.json").read_text())
        assert len(backbone["selected"]) == 6
        text = (out / "backbone.txt").read_text()
        for ordinal in backbone["selected"]:
            assert f"[segment {ordinal}]" in text
        salience = json.loads((out / "salience.json").read_text())
        assert len(salience["entries"]) == 21


class TestPlotCommand:
    def test_plane(self, marx_path, tmp_path):
        out = tmp_path / "out"
        assert run(["plot", str(marx_path), "--highlight", "11,15", "--out", str(out)]) == 0
        svg = (out / "factor_plane.svg").read_text()
        assert svg.startswith("<svg")
        assert "inertia" in svg

    def test_strip_fallback_for_two_segments(self, tmp_path):
        src = tmp_path / "tiny.txt"
        src.write_text("copper kettle on the stove\n\niron nails in a box\n", encoding="utf-8")
        out = tmp_path / "out"
        assert run(["plot", str(src), "--out", str(out)]) == 0
        svg = (out / "factor_plane.svg").read_text()
        assert "Axis 2" not in svg

    def test_beats_plot(self, script_path, tmp_path):
        # 2 beats -> rank 1 -> strip fallback, still exits 0
        out = tmp_path / "out"
        assert run(["plot", str(script_path), "--beats-of", "2", "--out", str(out)]) == 0
        assert (out / "factor_plane.svg").exists()


class TestErrorHandling:
    def test_missing_file(self, tmp_path, capsys):
        assert run(["analyze", str(tmp_path / "nope.txt"), "--out", str(tmp_path)]) == 1
        assert capsys.readouterr().err.startswith("narrascope:")

    def test_forced_screenplay_on_prose(self, marx_path, tmp_path, capsys):
        code = run(["parse", str(marx_path), "--kind", "screenplay", "--out", str(tmp_path / "o")])
        assert code == 1
        assert "heading" in capsys.readouterr().err

    def test_bad_format_flag(self, marx_path, tmp_path, capsys):
        code = run(["analyze", str(marx_path), "--format", "pdf", "--out", str(tmp_path / "o")])
        assert code == 1

    def test_bad_blocks(self, marx_path, tmp_path):
        assert run(["segment", str(marx_path), "--blocks", "99",
                    "--out", str(tmp_path / "o")]) == 1

    def test_internal_failure_exits_two(self, marx_path, tmp_path, monkeypatch, capsys):
        import narrascope.cli as cli_module

        def boom(doc):
            raise RuntimeError("synthetic fault")

        monkeypatch.setattr(cli_module, "build_matrix", boom)
        code = run(["analyze", str(marx_path), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "internal error" in capsys.readouterr().err


class TestFormatsAndManifest:
    def test_format_filter(self, marx_path, tmp_path):
        out = tmp_path / "out"
        assert run(["analyze", str(marx_path), "--format", "json", "--out", str(out)]) == 0
        names = {p.name for p in out.iterdir()}
        assert "factor_model.json" in names
        assert "matrix.txt" not in names

    def test_manifest_lists_artifact_hashes(self, marx_path, tmp_path):
        out = tmp_path / "out"
        assert run(["analyze", str(marx_path), "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert set(manifest["artifacts"]) == {
            "factor_model.json", "corpus.json", "matrix.txt", "vocabulary.txt"
        }
        assert manifest["manifest"]["config"]["command"] == "analyze"
