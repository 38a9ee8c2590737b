import json
import math

import pytest

from concordant.cli import (
    EXIT_EXHAUSTED,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    SERIES_COLUMNS,
    main,
    run_classify,
    run_reproduce,
    run_series,
    run_solve,
)
from concordant.errors import EffortExhausted
from concordant.fixtures import bundled_fixture_names, load_fixture, parse_fixture

ZAGIER_ARGS = [
    "verify",
    "--M",
    "157",
    "--N",
    "-157",
    "--point=-166136231668185267540804/2825630694251145858025,"
    "167661624456834335404812111469782006/150201095200135518108761470235125",
]


class TestClassifyCommand:
    def test_json_roundtrip(self, capsys):
        report = run_classify(1, 1, 5)
        encoded = json.dumps(report, sort_keys=True)
        assert json.loads(encoded) == report

    def test_cli_exit_ok(self, capsys):
        assert main(["classify", "--p", "1", "--q", "1", "--k", "5", "--format", "json"]) == EXIT_OK
        out = capsys.readouterr().out
        report = json.loads(out)
        assert report["surviving_class_representatives"] == [["1", "-1", "-1"]]

    def test_usage_error_without_curve(self):
        assert main(["classify"]) == EXIT_USAGE

    def test_not_normalized_curve(self):
        assert main(["classify", "--M", "4", "--N", "-4"]) == EXIT_USAGE


class TestSolveCommand:
    def test_solve_json_fields(self, capsys):
        code = main(
            [
                "solve",
                "--p",
                "1",
                "--q",
                "1",
                "--k",
                "5",
                "--radius-cap",
                "100",
                "--format",
                "json",
            ]
        )
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        for key in ("curve", "triplet", "quadruple", "point", "concordant", "heights", "stats"):
            assert key in report
        assert json.loads(json.dumps(report, sort_keys=True)) == report
        w = [int(v) for v in report["concordant"]]
        assert w[0] ** 2 + 5 * w[1] ** 2 == w[2] ** 2
        assert w[0] ** 2 - 5 * w[1] ** 2 == w[3] ** 2

    def test_effort_exhausted_exit_code(self):
        code = main(
            [
                "solve",
                "--p",
                "1",
                "--q",
                "3",
                "--k",
                "142",
                "--triplet",
                "1,2,2",
                "--radius-cap",
                "3",
            ]
        )
        assert code == EXIT_EXHAUSTED

    def test_invalid_triplet_rejected(self):
        code = main(["solve", "--p", "1", "--q", "1", "--k", "5", "--triplet", "1,2"])
        assert code == EXIT_USAGE

    def test_auto_selection_reaches_weak_fallback(self):
        # no triplet given: dead classes are tried and skipped, the search
        # lands on the class whose space carries the small point
        report = run_solve(1, 3, 23, radius_cap=150)
        assert report["triplet"] == ["2", "3", "6"]
        assert report["stats"]["method"] == "weak"
        assert report["point"] == {"x": "75", "y": "210"}

    def test_height_ratio_diagnostics(self):
        report = run_solve(1, 1, 13, radius_cap=100)
        assert "point_over_quadruple" in report["heights"]

    def test_solve_with_fixture_pins(self, capsys):
        code = main(
            [
                "solve",
                "--p",
                "1",
                "--q",
                "3",
                "--k",
                "142",
                "--fixture",
                "n142",
                "--format",
                "json",
            ]
        )
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["quadruple"] == ["2352960", "1604507", "-1411786", "-52241"]
        assert report["stats"]["mu"] == "-71"


class TestVerifyCommand:
    def test_zagier_point(self, capsys):
        assert main(ZAGIER_ARGS + ["--format", "json"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["valid"] is True

    def test_wrong_point_fails(self, capsys):
        code = main(["verify", "--M", "157", "--N", "-157", "--point", "1,1"])
        assert code == EXIT_USAGE

    def test_quadruple(self, capsys):
        code = main(
            [
                "verify",
                "--p",
                "1",
                "--q",
                "3",
                "--k",
                "23",
                "--quadruple",
                "75,0,75,75",
            ]
        )
        # (75,0,75,75) ~ (1,0,1,1): a trivial solution, still valid
        assert code == EXIT_OK

    def test_curve_without_pqk_split_still_verifiable(self, capsys):
        # membership checks do not need the (p, q, k) decomposition
        code = main(["verify", "--M", "-5", "--N", "5", "--point=-4,6", "--format", "json"])
        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out)["valid"] is True

    def test_weierstrass_form(self, capsys):
        code = main(
            ["verify", "--weierstrass", "0,-25,0", "--point=-4,6", "--format", "json"]
        )
        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out)["valid"] is True


class TestSeriesCommand:
    def test_empty_range_header_only(self, capsys):
        assert main(["series", "--family", "cong5", "--max-k", "4"]) == EXIT_OK
        out = capsys.readouterr().out.strip().splitlines()
        assert out == [",".join(SERIES_COLUMNS)]

    def test_small_run_rows_verified(self, capsys):
        rows = run_series("cong5", 13, radius_cap=200)
        assert [r["k"] for r in rows] == ["5", "13"]
        for row in rows:
            assert row["status"] == "ok"
            k = int(row["k"])
            w = [int(row[c]) for c in ("w0", "w1", "w2", "w3")]
            assert w[0] ** 2 + k * w[1] ** 2 == w[2] ** 2
            assert w[0] ** 2 - k * w[1] ** 2 == w[3] ** 2

    def test_csv_schema_stable(self, capsys):
        assert main(
            ["series", "--family", "cong5", "--max-k", "5", "--radius-cap", "100"]
        ) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == ",".join(SERIES_COLUMNS)
        assert len(lines) == 2

    def test_unknown_family(self):
        with pytest.raises(SystemExit):
            main(["series", "--family", "nope", "--max-k", "10"])

    def test_rank_two_family_emits_sum_row(self):
        rows = run_series("theta96", 14, radius_cap=300)
        assert [r["triplet"] for r in rows] == ["1;2;2", "2;-3;-6", "2;-6;-3"]
        assert [r["status"] for r in rows] == ["ok", "ok", "ok"]
        assert rows[2]["method"] == "sum"
        for row in rows:
            w = [int(row[c]) for c in ("w0", "w1", "w2", "w3")]
            assert w[0] ** 2 + 14 * w[1] ** 2 == w[2] ** 2
            assert w[0] ** 2 - 42 * w[1] ** 2 == w[3] ** 2


class TestReproduceCommand:
    def test_bundled_fixtures_present(self):
        assert set(bundled_fixture_names()) == {"k23-weak", "n142"}

    def test_n142_ok(self):
        report = run_reproduce(load_fixture("n142"))
        assert report["ok"] is True
        stages = [d["stage"] for d in report["stages"]]
        for expected in ("y_conic", "kernel", "mu_candidates", "quartic", "x", "point_x"):
            assert expected in stages

    def test_k23_ok(self):
        report = run_reproduce(load_fixture("k23-weak"))
        assert report["ok"] is True

    def test_cli_exit_codes(self, capsys):
        assert main(["reproduce", "--fixture", "n142"]) == EXIT_OK
        assert main(["reproduce", "--fixture", "missing-name"]) == EXIT_USAGE

    def test_corrupted_base_point_rejected(self, tmp_path):
        ref = tmp_path / "broken.fixture"
        lines = []
        import importlib.resources as resources

        src = (resources.files("concordant") / "fixtures" / "n142.fixture").read_text()
        for line in src.splitlines():
            if line.startswith("pin_base_q1"):
                lines.append("pin_base_q1 = 1,1,1")
            else:
                lines.append(line)
        ref.write_text("\n".join(lines))
        assert main(["reproduce", "--fixture", str(ref)]) == EXIT_MISMATCH

    def test_corrupted_expectation_mismatch(self, tmp_path):
        import importlib.resources as resources

        src = (resources.files("concordant") / "fixtures" / "n142.fixture").read_text()
        ref = tmp_path / "wrong.fixture"
        ref.write_text(src.replace("expect_cross_term = -9088", "expect_cross_term = -9090"))
        assert main(["reproduce", "--fixture", str(ref)]) == EXIT_MISMATCH


class TestFixtureParsing:
    def test_scalar_list_rows_fractions(self):
        fx = parse_fixture("a = 5\nb = 1,2,3\nc = 1,2;3,4\nd = 5/7\n")
        assert fx["a"] == 5
        assert fx["b"] == (1, 2, 3)
        assert fx["c"] == ((1, 2), (3, 4))
        from fractions import Fraction

        assert fx["d"] == Fraction(5, 7)

    def test_duplicate_key_rejected(self):
        from concordant.errors import InvalidArgument

        with pytest.raises(InvalidArgument):
            parse_fixture("a = 1\na = 2\n")
