from __future__ import annotations

import json

import pytest

from orbitrig.cli import (
    EXIT_FLEXIBLE,
    EXIT_INPUT,
    EXIT_RIGID,
    main,
    parse_framework,
    parse_rational,
)
from orbitrig.errors import InputError


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestParsing:
    def test_rationals(self):
        from fractions import Fraction

        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational(-2) == Fraction(-2)
        assert parse_rational("5") == Fraction(5)
        with pytest.raises(InputError):
            parse_rational("x")
        with pytest.raises(InputError):
            parse_rational(True)

    def test_schema_version_enforced(self, fixture_dir):
        doc = json.loads((fixture_dir / "cs_stewart.json").read_text())
        doc["schema"] = 99
        with pytest.raises(InputError):
            parse_framework(doc)

    def test_missing_field_diagnostics(self, fixture_dir):
        doc = json.loads((fixture_dir / "cs_stewart.json").read_text())
        del doc["gain_graph"]
        with pytest.raises(InputError, match="gain_graph"):
            parse_framework(doc)


class TestAnalyzeCommand:
    def test_cs_stewart_flexible(self, capsys, fixture_dir):
        code, out = run(capsys, ["analyze", str(fixture_dir / "cs_stewart.json")])
        assert code == EXIT_FLEXIBLE
        doc = json.loads(out)
        anti = next(r for r in doc["irreps"] if r["irrep"] == [1])
        assert (anti["rank"], anti["trivial"], anti["flex"]) == (2, 3, 1)
        assert doc["consistent"] is True

    def test_c2_stewart_rigid(self, capsys, fixture_dir):
        code, out = run(capsys, ["analyze", str(fixture_dir / "c2_stewart.json")])
        assert code == EXIT_RIGID
        doc = json.loads(out)
        assert doc["rigid"] is True and doc["isostatic"] is True

    def test_trivial_five_bars_flexible(self, capsys, fixture_dir):
        code, out = run(capsys, ["analyze", str(fixture_dir / "trivial_2body_5bars.json")])
        assert code == EXIT_FLEXIBLE

    def test_hinge_fixture(self, capsys, fixture_dir):
        code, out = run(capsys, ["analyze", str(fixture_dir / "cs_hinge.json")])
        assert code == EXIT_RIGID
        doc = json.loads(out)
        assert doc["consistent"] is True

    def test_missing_file(self, capsys):
        assert main(["analyze", "/nonexistent.json"]) == EXIT_INPUT

    def test_malformed_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{ not json", encoding="utf-8")
        assert main(["analyze", str(bad)]) == EXIT_INPUT
        err = capsys.readouterr().err
        assert "line" in err and "column" in err

    def test_byte_identical_output(self, capsys, fixture_dir):
        _, out1 = run(capsys, ["analyze", str(fixture_dir / "c2_stewart.json"), "--seed", "7"])
        _, out2 = run(capsys, ["analyze", str(fixture_dir / "c2_stewart.json"), "--seed", "7"])
        assert out1 == out2

    def test_explicit_configuration(self, capsys, fixture_dir, tmp_path):
        doc = json.loads((fixture_dir / "cs_stewart.json").read_text())
        doc["configuration"] = {
            "bars": {
                "0": {"points": [[1, 2, 3], [9, "8/3", 7]]},
                "1": {"points": [[4, 0, 5], [1, 1, 6]]},
                "2": {"points": [[2, 7, 1]]},
                "3": {"points": [[3, 1, 4]]},
            }
        }
        path = tmp_path / "explicit.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        code, out = run(capsys, ["analyze", str(path)])
        assert code == EXIT_FLEXIBLE
        report = json.loads(out)
        anti = next(r for r in report["irreps"] if r["irrep"] == [1])
        assert anti["flex"] == 1


class TestCertifyCommand:
    def test_c2_certificates(self, capsys, fixture_dir):
        code, out = run(capsys, ["certify", str(fixture_dir / "c2_stewart.json")])
        assert code == EXIT_RIGID
        doc = json.loads(out)
        by_irrep = {tuple(c["irrep"]): c for c in doc["certificates"]}
        sym = by_irrep[(0,)]
        used = {label for label, ids in sym["decomposition"].items() if ids}
        assert used == {"(1,2)", "(1,3)", "(2,4)", "(3,4)"}
        anti = by_irrep[(1,)]
        used = {label for label, ids in anti["decomposition"].items() if ids}
        assert used <= {"(1,4)", "(2,3)"}

    def test_cs_flexible_reports_deficiency(self, capsys, fixture_dir):
        code, out = run(capsys, ["certify", str(fixture_dir / "cs_stewart.json")])
        assert code == EXIT_FLEXIBLE
        doc = json.loads(out)
        anti = next(c for c in doc["certificates"] if c["irrep"] == [1])
        assert (anti["target"], anti["rank"], anti["deficiency"]) == (3, 2, 1)
        sym = next(c for c in doc["certificates"] if c["irrep"] == [0])
        assert sym["edges"] == 4 and sym["target"] == 3
        assert sym["count_matches_target"] is False

    def test_irrep_filter(self, capsys, fixture_dir):
        code, out = run(capsys, ["certify", str(fixture_dir / "cs_stewart.json"), "--irrep", "0"])
        assert code == EXIT_RIGID  # the symmetric block alone is rigid
        doc = json.loads(out)
        assert [c["irrep"] for c in doc["certificates"]] == [[0]]

    def test_oracle_flag(self, capsys, fixture_dir):
        code, out = run(
            capsys, ["certify", str(fixture_dir / "c2_stewart.json"), "--oracle"]
        )
        doc = json.loads(out)
        for cert in doc["certificates"]:
            assert cert["counting_violation"] is None

    def test_trivial_parallel_edges_spanning_trees(self, capsys, fixture_dir):
        code, out = run(capsys, ["certify", str(fixture_dir / "trivial_2body_6bars.json")])
        assert code == EXIT_RIGID
        doc = json.loads(out)
        cert = doc["certificates"][0]
        parts = [ids for ids in cert["decomposition"].values() if ids]
        assert sorted(len(p) for p in parts) == [1] * 6


class TestFlexCommand:
    def test_cs_flex(self, capsys, fixture_dir):
        code, out = run(capsys, ["flex", str(fixture_dir / "cs_stewart.json"), "--irrep", "1"])
        assert code == EXIT_FLEXIBLE
        doc = json.loads(out)
        assert len(doc["flexes"]) == 1
        assert doc["flexes"][0]["irrep"] == [1]

    def test_c2_no_flex(self, capsys, fixture_dir):
        code, out = run(capsys, ["flex", str(fixture_dir / "c2_stewart.json")])
        assert code == EXIT_RIGID
        assert json.loads(out)["flexes"] == []


class TestLiftCommand:
    def test_cs_lift_counts(self, capsys, fixture_dir):
        code, out = run(capsys, ["lift", str(fixture_dir / "cs_stewart.json")])
        assert code == EXIT_RIGID
        doc = json.loads(out)
        assert len(doc["vertices"]) == 2
        assert len(doc["edges"]) == 6

    def test_deterministic(self, capsys, fixture_dir):
        _, out1 = run(capsys, ["lift", str(fixture_dir / "cs_stewart.json"), "--seed", "3"])
        _, out2 = run(capsys, ["lift", str(fixture_dir / "cs_stewart.json"), "--seed", "3"])
        assert out1 == out2


class TestCrosscheckCommand:
    def test_empty_run(self, capsys):
        code, out = run(capsys, ["crosscheck", "--count", "0"])
        assert code == EXIT_RIGID
        doc = json.loads(out)
        assert doc["count"] == 0 and doc["ok"] is True

    def test_small_batch(self, capsys):
        code, out = run(capsys, ["crosscheck", "--count", "5", "--group", "2", "--seed", "3"])
        assert code == EXIT_RIGID
        assert json.loads(out)["mismatches"] == []

    def test_bad_group_spec(self, capsys):
        assert main(["crosscheck", "--count", "1", "--group", "q"]) == EXIT_INPUT


class TestExplicitHingeConfiguration:
    def test_axis_hinge_input(self, capsys, fixture_dir, tmp_path):
        doc = json.loads((fixture_dir / "trivial_2body_1hinge.json").read_text())
        doc["configuration"] = {"hinges": {"0": {"points": [[0, 0, 0], [1, 0, 0]]}}}
        path = tmp_path / "hinge.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        code, out = run(capsys, ["analyze", str(path)])
        assert code == EXIT_FLEXIBLE
        report = json.loads(out)
        assert report["irreps"][0]["rank"] == 5
        assert report["irreps"][0]["flex"] == 1

    def test_wrong_point_count(self, capsys, fixture_dir, tmp_path):
        doc = json.loads((fixture_dir / "trivial_2body_1hinge.json").read_text())
        doc["configuration"] = {"hinges": {"0": {"points": [[0, 0, 0]]}}}
        path = tmp_path / "hinge.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        assert main(["analyze", str(path)]) == EXIT_INPUT


def _quarter_turn_doc() -> dict:
    return {
        "schema": 1,
        "group": {"orders": [4]},
        "representation": {
            "d": 3,
            "generators": [[["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "1"]]],
        },
        "gain_graph": {
            "vertices": ["v"],
            "edges": [{"id": 0, "tail": "v", "head": "v", "gain": [1], "inL": False}],
        },
    }


class TestUnsupportedGroupPaths:
    def test_certify_rejects_order_four_group(self, capsys, tmp_path):
        path = tmp_path / "z4.json"
        path.write_text(json.dumps(_quarter_turn_doc()), encoding="utf-8")
        assert main(["certify", str(path)]) == EXIT_INPUT

    def test_analyze_handles_order_four_group(self, capsys, tmp_path):
        path = tmp_path / "z4.json"
        path.write_text(json.dumps(_quarter_turn_doc()), encoding="utf-8")
        code, out = run(capsys, ["analyze", str(path)])
        assert code == EXIT_FLEXIBLE
        report = json.loads(out)
        assert len(report["irreps"]) == 4
        assert "combinatorial" not in report


class TestReplaySerialization:
    def test_crosscheck_instance_round_trips(self):
        import random as _random

        from orbitrig.cli import random_diagonal_rep, random_gain_graph, serialize_instance

        rng = _random.Random(99)
        rep = random_diagonal_rep(rng, (2, 2), 3)
        h = random_gain_graph(rng, rep.group, 4, 8)
        doc = serialize_instance(h, rep, seed=123)
        fw = parse_framework(doc)
        assert fw["graph"] == h
        assert fw["rep"].images == rep.images

    def test_lift_hinge_model(self, capsys, fixture_dir):
        code, out = run(capsys, ["lift", str(fixture_dir / "cs_hinge.json")])
        assert code == EXIT_RIGID
        doc = json.loads(out)
        assert doc["model"] == "body-hinge"
        assert len(doc["edges"]) == 6
        assert all("hinge" in e and e["points"] for e in doc["edges"])

    def test_analyze_oracle_flag(self, capsys, fixture_dir):
        code, out = run(capsys, ["analyze", str(fixture_dir / "cs_stewart.json"), "--oracle"])
        assert code == EXIT_FLEXIBLE
        doc = json.loads(out)
        # the symmetric block's full edge set is row-dependent: 4 > 3
        assert doc["counting_violations"]["[0]"]["size"] == 4
        assert doc["counting_violations"]["[0]"]["bound"] == 3
        assert doc["counting_violations"]["[1]"] is None
