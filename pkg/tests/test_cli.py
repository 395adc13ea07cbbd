import json

import numpy as np
import pytest

from nodalforms import cli, corpus
from nodalforms.forms import graph_to_json


def write_graph(path, g):
    path.write_text(json.dumps(graph_to_json(g), indent=2, sort_keys=True))
    return path


@pytest.fixture
def p8_file(tmp_path):
    return write_graph(tmp_path / "p8.json", corpus.path_graph(8))


def read_reports(out_dir, stem):
    files = sorted(out_dir.glob(f"{stem}.cluster*.json"))
    return [json.loads(p.read_text()) for p in files]


class TestNodalMode:
    def test_p8_all_pass(self, p8_file, tmp_path):
        out = tmp_path / "out"
        code = cli.main(["nodal", "--input", str(p8_file), "--n", "1..8",
                         "--out", str(out)])
        assert code == 0
        payloads = read_reports(out, "p8")
        assert len(payloads) == 8  # simple spectrum: one cluster per value
        for payload in payloads:
            for report in payload["reports"]:
                assert report["passes"]
                assert report["l"] == report["n"]

    def test_n_subset_and_formats(self, p8_file, tmp_path):
        out = tmp_path / "out"
        code = cli.main(["nodal", "--input", str(p8_file), "--n", "2,4",
                         "--out", str(out)])
        assert code == 0
        payloads = read_reports(out, "p8")
        assert [p["reports"][0]["n"] for p in payloads] == [2, 4]

    def test_degenerate_cluster_single_file(self, tmp_path):
        write_graph(tmp_path / "k4.json", corpus.complete_graph(4))
        out = tmp_path / "out"
        code = cli.main(["nodal", "--input", str(tmp_path / "k4.json"),
                         "--out", str(out), "--samples", "3"])
        assert code == 0
        payloads = read_reports(out, "k4")
        assert len(payloads) == 2  # spectrum {0, 4 x3}
        degenerate = payloads[1]
        sources = [r["source"] for r in degenerate["reports"]]
        assert sources.count("solver_basis") == 3
        assert sum("random_rotation" in s for s in sources) == 3

    def test_render_svg(self, p8_file, tmp_path):
        out = tmp_path / "out"
        code = cli.main(["nodal", "--input", str(p8_file), "--n", "3",
                         "--out", str(out), "--render"])
        assert code == 0
        svg = (out / "p8.n003.svg").read_text()
        assert svg.startswith("<svg")
        assert "<circle" in svg and "<polygon" in svg

    def test_render_deterministic(self, p8_file, tmp_path):
        blobs = []
        for tag in ("a", "b"):
            out = tmp_path / tag
            cli.main(["nodal", "--input", str(p8_file), "--n", "4",
                      "--out", str(out), "--render"])
            blobs.append((out / "p8.n004.svg").read_bytes())
        assert blobs[0] == blobs[1]

    def test_bad_index_range(self, p8_file, tmp_path):
        code = cli.main(["nodal", "--input", str(p8_file), "--n", "9",
                         "--out", str(tmp_path / "out")])
        assert code == 1


class TestSchemaFailures:
    def test_unknown_field_is_line_anchored(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{\n  "vertices": [\n    {"label": "a", "m": 1.0,\n'
                       '     "mass": 2.0}\n  ],\n  "edges": []\n}\n')
        code = cli.main(["spectrum", "--input", str(bad),
                         "--out", str(tmp_path / "out")])
        assert code == 1
        err = capsys.readouterr().err
        assert "bad.json:4" in err  # the offending key sits on line 4
        assert "mass" in err

    def test_invalid_json_syntax(self, tmp_path, capsys):
        bad = tmp_path / "broken.json"
        bad.write_text('{"vertices": [,]}')
        code = cli.main(["spectrum", "--input", str(bad),
                         "--out", str(tmp_path / "out")])
        assert code == 1
        assert "broken.json:1:" in capsys.readouterr().err

    def test_missing_measure_needs_flag(self, tmp_path, capsys):
        data = {"vertices": [{"label": "a"}, {"label": "b"}],
                "edges": [{"u": "a", "v": "b", "b": 1.0}]}
        path = tmp_path / "nom.json"
        path.write_text(json.dumps(data))
        out = tmp_path / "out"
        assert cli.main(["spectrum", "--input", str(path),
                         "--out", str(out)]) == 1
        assert "default-measure-one" in capsys.readouterr().err
        assert cli.main(["spectrum", "--input", str(path), "--out", str(out),
                         "--default-measure-one"]) == 0

    def test_missing_file(self, tmp_path, capsys):
        assert cli.main(["spectrum", "--input", str(tmp_path / "ghost.json"),
                         "--out", str(tmp_path / "out")]) == 1


class TestSpectrumMode:
    def test_summary(self, tmp_path):
        write_graph(tmp_path / "k3.json", corpus.complete_graph(3))
        out = tmp_path / "out"
        code = cli.main(["spectrum", "--input", str(tmp_path / "k3.json"),
                         "--out", str(out)])
        assert code == 0
        data = json.loads((out / "k3.spectrum.json").read_text())
        np.testing.assert_allclose(data["values"], [0.0, 3.0, 3.0], atol=1e-9)
        assert data["clusters"][1]["multiplicity"] == 2
        assert data["clusters"][1]["verdict"] == "OK"

    def test_ambiguous_exit_code(self, tmp_path):
        data = {"vertices": [{"label": "a", "m": 1.0, "c": 1.0},
                             {"label": "b", "m": 1.0, "c": 1.0 + 2e-7}],
                "edges": []}
        path = tmp_path / "amb.json"
        path.write_text(json.dumps(data))
        code = cli.main(["spectrum", "--input", str(path),
                         "--out", str(tmp_path / "out")])
        assert code == 2
        payload = json.loads((tmp_path / "out" / "amb.spectrum.json").read_text())
        assert any(cl["verdict"] == "AMBIGUOUS" for cl in payload["clusters"])


class TestInvarianceMode:
    def test_two_component_lattice(self, tmp_path):
        g = corpus.disjoint_union(corpus.path_graph(2), corpus.path_graph(3))
        write_graph(tmp_path / "two.json", g)
        out = tmp_path / "out"
        code = cli.main(["invariance", "--input", str(tmp_path / "two.json"),
                         "--out", str(out)])
        assert code == 0
        data = json.loads((out / "two.invariance.json").read_text())
        assert data["family_size"] == 4
        assert not data["irreducible"]
        assert len(data["components"]) == 2
        sizes = sorted(len(s["vertices"]) for s in data["invariant_subsets"])
        assert sizes == [0, 2, 3, 5]


class TestGridMode:
    def test_small_square(self, tmp_path):
        spec = {"dims": 2, "shape": [5, 5], "h": 0.2, "a": 1.0, "V": 0.0,
                "mask": None}
        path = tmp_path / "sq.json"
        path.write_text(json.dumps(spec))
        out = tmp_path / "out"
        code = cli.main(["grid", "--input", str(path), "--n", "1..6",
                         "--out", str(out), "--render", "--samples", "2"])
        assert code == 0
        payloads = read_reports(out, "sq")
        assert payloads
        first = payloads[0]["reports"][0]
        assert first["l"] == 1 and first["strong_passes"] is True
        svg = (out / "sq.n001.svg").read_text()
        assert "<rect" in svg


class TestSearchTight:
    def test_star_family(self, tmp_path):
        out = tmp_path / "out"
        code = cli.main(["search-tight", "--family", "star", "--max-size", "8",
                         "--out", str(out)])
        assert code == 0
        data = json.loads((out / "search_tight_star.json").read_text())
        witnesses = [e for e in data["tight_instances"]
                     if e["source"] == "explicit"]
        assert {e["size"] for e in witnesses} == {4, 5, 6, 7, 8}
        for e in witnesses:
            assert e["l"] == e["bound"] == e["size"] - 1
            assert e["n"] == 2 and e["k"] == e["size"] - 2
            assert len(e["witness"]) == e["size"]


class TestCorpusMode:
    def _small_corpus(self, tmp_path):
        directory = tmp_path / "corpus"
        directory.mkdir()
        write_graph(directory / "p5.json", corpus.path_graph(5))
        write_graph(directory / "star4.json", corpus.star_graph(4))
        write_graph(directory / "two.json",
                    corpus.disjoint_union(corpus.path_graph(2),
                                          corpus.path_graph(2)))
        grid = {"dims": 1, "shape": [6], "h": 0.2, "a": 1.0, "V": 0.0,
                "mask": None}
        (directory / "grid.json").write_text(json.dumps(grid))
        return directory

    def test_runs_all_suites(self, tmp_path, monkeypatch):
        monkeypatch.setenv("NODALFORMS_THREADS", "2")
        directory = self._small_corpus(tmp_path)
        out = tmp_path / "out"
        code = cli.main(["corpus", "--input", str(directory), "--out", str(out),
                         "--samples", "2"])
        assert code == 0
        summary = json.loads((out / "summary.json").read_text())
        assert len(summary["inputs"]) == 4
        assert summary["errors"] == {}
        assert summary["totals"]["courant"]["failures"] == 0
        assert summary["totals"]["res_pos_pres"]["checked"] > 0
        assert (out / "p5.result.json").exists()

    def test_corrupted_file_is_isolated(self, tmp_path):
        directory = self._small_corpus(tmp_path)
        (directory / "broken.json").write_text("{nope")
        out = tmp_path / "out"
        code = cli.main(["corpus", "--input", str(directory), "--out", str(out),
                         "--samples", "2"])
        assert code == 1  # I/O failure recorded
        summary = json.loads((out / "summary.json").read_text())
        assert "broken.json" in summary["errors"]
        assert len(summary["inputs"]) == 4  # others still processed

    def test_empty_directory(self, tmp_path):
        directory = tmp_path / "empty"
        directory.mkdir()
        code = cli.main(["corpus", "--input", str(directory),
                         "--out", str(tmp_path / "out")])
        assert code == 0
        summary = json.loads((tmp_path / "out" / "summary.json").read_text())
        assert summary["inputs"] == {}

    def test_deterministic_bytes(self, tmp_path):
        directory = self._small_corpus(tmp_path)
        outputs = []
        for run in ("a", "b"):
            out = tmp_path / f"out_{run}"
            code = cli.main(["corpus", "--input", str(directory),
                             "--out", str(out), "--seed", "5"])
            assert code == 0
            outputs.append({p.name: p.read_bytes()
                            for p in sorted(out.glob("*.json"))})
        assert outputs[0] == outputs[1]

    def test_not_a_directory(self, tmp_path, capsys):
        code = cli.main(["corpus", "--input", str(tmp_path / "nope"),
                         "--out", str(tmp_path / "out")])
        assert code == 1


class TestModeAlias:
    def test_mode_flag(self, p8_file, tmp_path):
        code = cli.main(["--mode", "nodal", "--input", str(p8_file),
                         "--n", "1..3", "--out", str(tmp_path / "out")])
        assert code == 0

    def test_positive_tolerances_enforced(self, p8_file, tmp_path):
        with pytest.raises(SystemExit):
            cli.main(["nodal", "--input", str(p8_file), "--tau", "-1",
                      "--out", str(tmp_path / "out")])
