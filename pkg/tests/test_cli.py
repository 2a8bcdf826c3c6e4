"""End-to-end runs of every subcommand through main(argv)."""

import json

import pytest

from cwkit.cli import main

K2_TEXT = """cw k=2
(join 1 2
  (union
    (v a 1)
    (v b 2)))
"""

# the join touches an empty colour class, so this is not strict; normalize
# repairs it by dropping the join
VACUOUS_TEXT = """cw k=2
(join 1 2
  (union
    (v a 1)
    (v b 1)))
"""


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def k2_file(tmp_path):
    path = tmp_path / "k2.cwx"
    path.write_text(K2_TEXT)
    return str(path)


class TestEval:
    def test_json_output(self, capsys, k2_file):
        code, out, _ = run(capsys, "eval", k2_file)
        assert code == 0
        obj = json.loads(out)
        assert obj["k"] == 2
        assert obj["validation"]["strict_valid"] is True
        assert obj["graph"]["colors"] == {"a": 1, "b": 2}

    def test_pretty_output(self, capsys, k2_file):
        code, out, _ = run(capsys, "eval", k2_file, "--pretty")
        assert code == 0
        assert "k = 2" in out
        assert "edges = 1" in out

    def test_dot_output(self, capsys, k2_file):
        code, out, _ = run(capsys, "eval", k2_file, "--dot")
        assert code == 0
        assert out.startswith("graph ")

    def test_out_file(self, capsys, tmp_path, k2_file):
        dest = tmp_path / "result.json"
        code, out, _ = run(capsys, "eval", k2_file, "--out", str(dest))
        assert code == 0
        assert out == ""
        assert json.loads(dest.read_text())["k"] == 2

    def test_parse_error_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.cwx"
        bad.write_text("cw k=2\n(vv a 1)")
        code, _, err = run(capsys, "eval", str(bad))
        assert code == 2
        assert "error:" in err

    def test_missing_file_exits_3_cleanly(self, capsys, tmp_path):
        code, out, err = run(capsys, "eval", str(tmp_path / "nope.cwx"))
        assert code == 3
        assert err.startswith("error:")
        assert "Traceback" not in err

    def test_unwritable_out_exits_3(self, capsys, tmp_path, k2_file):
        dest = tmp_path / "no" / "such" / "dir" / "x.json"
        code, _, err = run(capsys, "eval", k2_file, "--out", str(dest))
        assert code == 3
        assert err.startswith("error:")


class TestDecompose:
    def test_verified_output(self, capsys, k2_file):
        code, out, _ = run(capsys, "decompose", k2_file)
        assert code == 0
        obj = json.loads(out)
        assert obj["verification"]["ok"] is True
        assert obj["result"]["rainbow_node"] == 2

    def test_non_strict_exits_3(self, capsys, tmp_path):
        path = tmp_path / "loose.cwx"
        path.write_text(VACUOUS_TEXT)
        code, _, err = run(capsys, "decompose", str(path))
        assert code == 3
        assert "not strict" in err

    def test_normalize_repairs(self, capsys, tmp_path):
        path = tmp_path / "loose.cwx"
        path.write_text(VACUOUS_TEXT)
        code, out, _ = run(capsys, "decompose", str(path), "--normalize")
        assert code == 0
        assert json.loads(out)["verification"]["ok"] is True

    def test_oracle_treewidth(self, capsys, k2_file):
        code, out, _ = run(capsys, "decompose", k2_file, "--oracle")
        assert code == 0
        assert json.loads(out)["quotient_treewidth"] == 1

    def test_oracle_falls_back_to_minor_bound(self, capsys, k2_file):
        code, out, _ = run(capsys, "decompose", k2_file, "--oracle",
                           "--cap", "1")
        assert code == 0
        obj = json.loads(out)
        assert "quotient_treewidth" not in obj
        assert obj["quotient_treewidth_lower_bound"] == 1
        assert "complete minor" in obj["oracle_note"]

    def test_dot_output(self, capsys, k2_file):
        code, out, _ = run(capsys, "decompose", k2_file, "--dot")
        assert code == 0
        assert out.startswith("graph decomposition {")


class TestGenerate:
    def test_path_round_trips_through_eval(self, capsys, tmp_path):
        dest = tmp_path / "path.cwx"
        code, _, _ = run(capsys, "generate", "path", "--length", "5",
                         "--out", str(dest))
        assert code == 0
        code, out, _ = run(capsys, "eval", str(dest))
        assert code == 0
        obj = json.loads(out)
        assert len(obj["graph"]["vertices"]) == 6
        assert obj["validation"]["strict_valid"] is True

    def test_spider(self, capsys, tmp_path):
        dest = tmp_path / "spider.cwx"
        code, _, _ = run(capsys, "generate", "spider", "--legs", "2,2,2",
                         "--out", str(dest))
        assert code == 0
        code, out, _ = run(capsys, "eval", str(dest))
        assert code == 0
        assert len(json.loads(out)["graph"]["vertices"]) == 7

    def test_subdivided_clique(self, capsys, tmp_path):
        dest = tmp_path / "clique.cwx"
        code, _, _ = run(capsys, "generate", "subdivided-clique",
                         "--n", "4", "--times", "1", "--out", str(dest))
        assert code == 0
        code, out, _ = run(capsys, "eval", str(dest))
        assert len(json.loads(out)["graph"]["vertices"]) == 10

    def test_bad_parameters_exit_3(self, capsys):
        code, _, err = run(capsys, "generate", "path", "--length", "0")
        assert code == 3
        assert "error:" in err
        code, _, _ = run(capsys, "generate", "spider", "--t", "4",
                         "--legs", "1,1")
        assert code == 3


class TestCorpus:
    def test_batch_runs_and_is_deterministic(self, capsys, tmp_path):
        first, second = tmp_path / "one", tmp_path / "two"
        code, out, _ = run(capsys, "corpus", "--seed", "7", "--count", "6",
                           "--max-k", "4", "--max-leaves", "10",
                           "--out-dir", str(first))
        assert code == 0
        summary = json.loads(out)
        assert summary["all_pass"] is True
        assert len(summary["instances"]) == 6
        assert (first / "expr_0003.cwx").exists()
        code, _, _ = run(capsys, "corpus", "--seed", "7", "--count", "6",
                         "--max-k", "4", "--max-leaves", "10",
                         "--out-dir", str(second))
        assert code == 0
        assert (first / "summary.json").read_text() == \
            (second / "summary.json").read_text()
        assert (first / "expr_0005.cwx").read_text() == \
            (second / "expr_0005.cwx").read_text()

    def test_empty_corpus(self, capsys, tmp_path):
        code, out, _ = run(capsys, "corpus", "--seed", "1", "--count", "0",
                           "--out-dir", str(tmp_path / "none"))
        assert code == 0
        assert json.loads(out)["instances"] == []


class TestQiCheck:
    def test_projection_pipeline(self, capsys, k2_file):
        code, out, _ = run(capsys, "qi-check", k2_file)
        assert code == 0
        obj = json.loads(out)
        assert obj["qi"]["ok"] is True
        assert obj["tight_projection_bounds"]["ok"] is True

    def test_too_small_c_fails(self, capsys, k2_file):
        code, out, _ = run(capsys, "qi-check", k2_file, "--c", "0.5")
        assert code == 3
        assert json.loads(out)["qi"]["ok"] is False

    def test_explicit_map(self, capsys, tmp_path):
        graph = {"vertices": ["a", "b"], "edges": [["a", "b"]]}
        gpath = tmp_path / "g.json"
        gpath.write_text(json.dumps(graph))
        mpath = tmp_path / "map.json"
        mpath.write_text(json.dumps({"f": {"a": "a", "b": "b"}, "c": 1}))
        code, out, _ = run(capsys, "qi-check", "--map", str(mpath),
                           "--source", str(gpath), "--target", str(gpath))
        assert code == 0
        assert json.loads(out)["qi"]["ok"] is True

    def test_map_needs_both_graphs(self, capsys, tmp_path):
        mpath = tmp_path / "map.json"
        mpath.write_text(json.dumps({"f": {}, "c": 1}))
        code, _, err = run(capsys, "qi-check", "--map", str(mpath))
        assert code == 3
        assert "--source and --target" in err

    def test_no_arguments_at_all(self, capsys):
        code, _, err = run(capsys, "qi-check")
        assert code == 3
        assert "expression file" in err


class TestMinorModel:
    def test_default_clique_pullback(self, capsys):
        code, out, _ = run(capsys, "minor-model", "--n", "4", "--times", "7")
        assert code == 0
        obj = json.loads(out)
        assert len(obj["branch_sets"]) == 4
        assert len(obj["edge_paths"]) == 6

    def test_oracle_cross_check(self, capsys):
        code, out, _ = run(capsys, "minor-model", "--n", "4", "--times", "7",
                           "--oracle")
        assert code == 0
        assert json.loads(out)["oracle_minor"] is True

    def test_shallow_subdivision_exits_3(self, capsys):
        code, _, err = run(capsys, "minor-model", "--n", "4", "--times", "3")
        assert code == 3
        assert "too shallow" in err


class TestCoverPullback:
    def test_default_component_cover(self, capsys, k2_file):
        code, out, _ = run(capsys, "cover-pullback", k2_file)
        assert code == 0
        obj = json.loads(out)
        assert obj["c"] == 1
        assert obj["cover"]["bound"] == 3
        assert obj["validation"]["ok"] is True

    def test_custom_target_cover(self, capsys, tmp_path, k2_file):
        cover = {"collections": [[["a"]], [["b"]]], "r": 0, "bound": 0}
        cpath = tmp_path / "cover.json"
        cpath.write_text(json.dumps(cover))
        code, out, _ = run(capsys, "cover-pullback", k2_file,
                           "--cover", str(cpath))
        assert code == 0
        assert json.loads(out)["cover"]["n"] == 1

    def test_separation_checked_at_inflated_scale(self, capsys, tmp_path,
                                                  k2_file):
        cover = {"collections": [[["a"], ["b"]]], "r": 0, "bound": 0}
        cpath = tmp_path / "cover.json"
        cpath.write_text(json.dumps(cover))
        code, _, err = run(capsys, "cover-pullback", k2_file,
                           "--cover", str(cpath))
        assert code == 3
        assert "separation" in err

    def test_scale_below_one_exits_3(self, capsys, k2_file):
        code, _, err = run(capsys, "cover-pullback", k2_file, "--r", "0.5")
        assert code == 3
        assert ">= 1" in err

    def test_bad_slope_exits_3(self, capsys, k2_file):
        code, _, _ = run(capsys, "cover-pullback", k2_file, "--slope", "0")
        assert code == 3


class TestTreewidth:
    def test_graph_json(self, capsys, tmp_path):
        vs = ["1", "2", "3", "4"]
        k4 = {"vertices": vs,
              "edges": [[a, b] for i, a in enumerate(vs) for b in vs[i + 1:]]}
        path = tmp_path / "k4.json"
        path.write_text(json.dumps(k4))
        code, out, _ = run(capsys, "treewidth", str(path))
        assert code == 0
        assert json.loads(out)["treewidth"] == 3

    def test_cwx_input(self, capsys, k2_file):
        code, out, _ = run(capsys, "treewidth", k2_file)
        assert code == 0
        assert json.loads(out)["treewidth"] == 1

    def test_quotient_flag(self, capsys, k2_file):
        code, out, _ = run(capsys, "treewidth", k2_file, "--quotient")
        assert code == 0
        assert json.loads(out)["vertices"] == 2

    def test_quotient_needs_cwx(self, capsys, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"vertices": ["a"], "edges": []}))
        code, _, err = run(capsys, "treewidth", str(path), "--quotient")
        assert code == 3
        assert ".cwx" in err

    def test_cap_exits_4(self, capsys, tmp_path):
        vs = [f"v{i}" for i in range(13)]
        obj = {"vertices": vs,
               "edges": [[vs[i], vs[i + 1]] for i in range(12)]}
        path = tmp_path / "long.json"
        path.write_text(json.dumps(obj))
        code, _, err = run(capsys, "treewidth", str(path))
        assert code == 4
        assert "capped" in err
        code, out, _ = run(capsys, "treewidth", str(path), "--cap", "13")
        assert code == 0
        assert json.loads(out)["treewidth"] == 1

    def test_malformed_json_exits_2(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run(capsys, "treewidth", str(path))
        assert code == 2
        assert "error:" in err

    def test_wrong_shape_exits_3(self, capsys, tmp_path):
        path = tmp_path / "shape.json"
        path.write_text(json.dumps({"nodes": []}))
        code, _, err = run(capsys, "treewidth", str(path))
        assert code == 3
        assert "malformed graph" in err


class TestExportDot:
    def test_suffix_dispatch(self, capsys, tmp_path, k2_file):
        code, out, _ = run(capsys, "export-dot", k2_file)
        assert code == 0
        assert '"a" -- "b"' in out
        gpath = tmp_path / "g.json"
        gpath.write_text(json.dumps({"vertices": ["x"], "edges": []}))
        code, out, _ = run(capsys, "export-dot", str(gpath))
        assert code == 0
        assert '"x"' in out

    def test_decomposition_kind(self, capsys, k2_file):
        code, out, _ = run(capsys, "export-dot", k2_file,
                           "--kind", "decomposition")
        assert code == 0
        assert out.startswith("graph decomposition {")

    def test_out_file(self, capsys, tmp_path, k2_file):
        dest = tmp_path / "g.dot"
        code, out, _ = run(capsys, "export-dot", k2_file, "--out", str(dest))
        assert code == 0
        assert out == ""
        assert dest.read_text().startswith("graph ")
