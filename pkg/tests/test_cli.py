"""
Tests for the command line, its input formats and report rendering.
"""

from fractions import Fraction

import pytest

from cli.formats import (
    FormatValidator,
    InputFormatError,
    ParseResult,
    format_complex,
    parse_complex,
    parse_cover,
    parse_graph_product,
    parse_immersion,
    parse_int_list,
    parse_vertex_map,
)
from cli.main import main
from cli.reports import Report, parse_report, render, report_value
from covers.cells import from_simplicial
from evaluation import instances, suites

PENTAGON = format_complex(instances.cycle(5))


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestComplexCommands:
    def test_check_pentagon(self, capsys, write):
        code, out, _ = run(capsys, ["complex", "check", write("pentagon.cx", PENTAGON)])
        assert code == 0
        assert report_value(out, "f_vector") == "5,5"
        assert report_value(out, "euler") == "0"
        assert report_value(out, "flag") == "true"
        assert report_value(out, "no_square") == "true"
        assert report_value(out, "verdict") == "pass"

    def test_check_hollow_triangle_is_not_flag(self, capsys, write):
        path = write("circle.cx", format_complex(instances.hollow_triangle()))
        code, out, _ = run(capsys, ["complex", "check", path])
        assert code == 0
        assert report_value(out, "flag") == "false"
        assert report_value(out, "flag.witness") == "v0,v1,v2"
        assert report_value(out, "no_square") is None

    def test_octahedralize_edge(self, capsys, write):
        code, out, _ = run(capsys, ["complex", "octa", write("edge.cx", "simplex a b\n")])
        assert code == 0
        assert out == (
            "vertex a+\nvertex a-\nvertex b+\nvertex b-\n"
            "simplex a+ b+\nsimplex a+ b-\nsimplex a- b+\nsimplex a- b-\n"
        )

    def test_link_needs_simplex(self, capsys, write):
        code, _, err = run(capsys, ["complex", "link", write("pentagon.cx", PENTAGON)])
        assert code == 2
        assert "--simplex" in err

    def test_link_of_vertex(self, capsys, write):
        path = write("pentagon.cx", PENTAGON)
        code, out, _ = run(capsys, ["complex", "link", path, "--simplex", "v0"])
        assert code == 0
        assert out == "vertex v1\nvertex v4\n"

    def test_reports_are_reproducible(self, capsys, write):
        path = write("pentagon.cx", PENTAGON)
        first = run(capsys, ["complex", "check", path])
        second = run(capsys, ["complex", "check", path])
        assert first == second
        assert report_value(first[1], "seed") == "7"
        assert report_value(first[1], "input.pentagon.cx.sha256")


class TestGrowthCommands:
    def test_estimate(self, capsys, write):
        path = write("pentagon.gp", PENTAGON + "order * 3\n")
        code, out, _ = run(capsys, ["growth", "estimate", path, "--k", "2"])
        assert code == 0
        assert report_value(out, "orders") == "3,3,3,3,3"
        assert report_value(out, "center") == "1"
        assert report_value(out, "error") == "40/3"

    def test_verify_bound(self, capsys, write):
        path = write("free.gp", "vertex a\nvertex b\norder * 5\n")
        code, out, _ = run(capsys, ["growth", "verify-bound", path, "--k", "1"])
        assert code == 0
        assert report_value(out, "value") == "16/25"
        assert report_value(out, "error") == "4/5"
        assert report_value(out, "top_bound") == "2"
        assert report_value(out, "bound_holds") == "true"
        assert report_value(out, "verdict") == "pass"

    def test_missing_degree(self, capsys, write):
        path = write("pentagon.gp", PENTAGON + "order * 3\n")
        code, _, err = run(capsys, ["growth", "estimate", path])
        assert code == 2
        assert "--k" in err

    def test_bad_field(self, capsys, write):
        path = write("pentagon.gp", PENTAGON + "order * 3\n")
        code, _, err = run(capsys, ["growth", "estimate", path, "--k", "2", "--field", "x"])
        assert code == 2
        assert err.startswith("homgrow: error:")

    def test_torus_decay(self, capsys, write):
        path = write("circle.cx", format_complex(instances.cycle(3)))
        code, out, _ = run(capsys, ["growth", "torus", path])
        assert code == 0
        assert report_value(out, "degrees") == "1,2,4,8"
        assert report_value(out, "values") == "2,1,1/2,1/4"
        assert report_value(out, "non_increasing") == "true"

    def test_bracket_over_enumerated_covers(self, capsys, write):
        path = write("circle.cx", format_complex(instances.cycle(3)))
        code, out, _ = run(capsys, ["growth", "bracket", path, "--k", "1"])
        assert code == 0
        assert report_value(out, "samples") == "3"
        assert report_value(out, "observed_min") == "1/3"
        assert report_value(out, "observed_max") == "1"

    def test_bracket_over_cover_files(self, capsys, write):
        base = write("circle.cx", format_complex(instances.cycle(3)))
        cover = write("triple.cover", "degree 3\nperm 0 (1 2 3)\n")
        code, out, _ = run(capsys, ["growth", "bracket", base, cover, "--k", "1"])
        assert code == 0
        assert report_value(out, "family") == "1 covers from files"
        assert report_value(out, "samples") == "1"
        assert report_value(out, "lower") == report_value(out, "upper") == "1/3"
        assert report_value(out, "input.triple.cover.sha256")


class TestVanKampenCommands:
    def test_obstruct_k33(self, capsys, write):
        path = write("k33.cx", format_complex(instances.k33()))
        code, out, _ = run(capsys, ["vankampen", "obstruct", path])
        assert code == 0
        assert report_value(out, "d") == "1"
        assert report_value(out, "obstruction") == "1"

    def test_solve_k33(self, capsys, write):
        path = write("k33.cx", format_complex(instances.k33()))
        code, out, _ = run(capsys, ["vankampen", "solve", path, "--ring", "f2"])
        assert code == 0
        assert report_value(out, "solvable") == "false"
        assert report_value(out, "certificate")
        assert report_value(out, "modulus") == "2"

    def test_planar_immersion_file(self, capsys, write):
        coords = "".join(
            f"coord {v} {x} {y}\n" for v, (x, y) in instances.k4_planar_coordinates().items()
        )
        path = write("k4.cx", format_complex(instances.k4()))
        immersion = write("k4.coords", coords)
        code, out, _ = run(
            capsys, ["vankampen", "solve", path, "--ring", "z", "--immersion", immersion]
        )
        assert code == 0
        assert report_value(out, "solvable") == "true"
        assert report_value(out, "support") == "0"


class TestVerifyCommand:
    def test_single_suite(self, capsys):
        code, out, _ = run(capsys, ["verify", "torus"])
        assert code == 0
        assert report_value(out, "suite.torus") == "2/2 pass"
        assert report_value(out, "all_passed") == "true"

    def test_small_eigenvalue_suite(self, capsys):
        code, out, _ = run(capsys, ["verify", "smalleigs", "--trials", "2"])
        assert code == 0
        assert report_value(out, "suite.smalleigs") == "6/6 pass"

    @pytest.mark.parametrize("suite", ["smalleigs", "pinch", "modpl2", "mv", "appendixC"])
    def test_suite_names_dispatch(self, capsys, monkeypatch, suite):
        seen = []

        def stub(ctx, ledger):
            seen.append(ctx.trials)
            ledger.record(suite, "ran", True)

        monkeypatch.setitem(suites.SUITES, suite, stub)
        code, out, _ = run(capsys, ["verify", suite, "--trials", "1"])
        assert code == 0
        assert seen == [1]
        assert report_value(out, f"suite.{suite}") == "1/1 pass"

    def test_all_runs_every_suite(self, capsys, monkeypatch):
        for name in list(suites.SUITES):
            monkeypatch.setitem(
                suites.SUITES, name, lambda ctx, ledger, name=name: ledger.record(name, "ran", True)
            )
        code, out, _ = run(capsys, ["verify", "all"])
        assert code == 0
        for name in ["smalleigs", "pinch", "modpl2", "mv", "appendixC", "uct", "torus", "nerve"]:
            assert report_value(out, f"suite.{name}") == "1/1 pass"


class TestInputErrors:
    def test_malformed_complex(self, capsys, write):
        code, out, err = run(capsys, ["complex", "check", write("bad.cx", "edge a b\n")])
        assert code == 2
        assert out == ""
        assert "line 1" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, ["complex", "check", str(tmp_path / "absent.cx")])
        assert code == 2

    def test_unknown_action(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["complex", "shrink"])
        assert excinfo.value.code == 2

    def test_output_file(self, capsys, write, tmp_path):
        target = tmp_path / "report.txt"
        path = write("pentagon.cx", PENTAGON)
        code, out, _ = run(capsys, ["complex", "check", path, "--output", str(target)])
        assert code == 0
        assert out == ""
        assert report_value(target.read_text(), "flag") == "true"


class TestFormats:
    def test_complex_lines(self):
        K = parse_complex("# a triangle\nvertex x\nsimplex a b c\n")
        assert list(K.vertices) == ["x", "a", "b", "c"]
        assert K.f_vector() == [4, 3, 1]
        assert parse_complex(format_complex(K)).f_vector() == K.f_vector()

    def test_complex_errors_name_the_line(self):
        with pytest.raises(InputFormatError, match="line 2"):
            parse_complex("vertex a\nface a b\n")
        with pytest.raises(InputFormatError, match="line 1"):
            parse_complex("simplex a a\n")

    def test_graph_product_orders(self):
        spec = parse_graph_product("simplex a b\norder a 4\norder * 2\n")
        assert spec.order_vector() == (4, 2)
        with pytest.raises(InputFormatError):
            parse_graph_product("simplex a b\norder a 2\n")
        with pytest.raises(InputFormatError):
            parse_graph_product("simplex a b\norder * two\n")

    def test_cover_file(self):
        X = from_simplicial(instances.cycle(3))
        cover = parse_cover("degree 2\nperm 0 (1 2)\n", X)
        assert cover.permutations == ((1, 0),)
        assert parse_cover("degree 2\n", X).component_count() == 2

    def test_cover_file_errors(self):
        X = from_simplicial(instances.cycle(3))
        with pytest.raises(InputFormatError):
            parse_cover("perm 0 (1 2)\n", X)
        with pytest.raises(InputFormatError):
            parse_cover("degree 2\ndegree 3\n", X)
        with pytest.raises(InputFormatError, match="line 2"):
            parse_cover("degree 2\nperm 1 (1 2)\n", X)
        with pytest.raises(InputFormatError, match="line 2"):
            parse_cover("degree 2\nperm 0 (1 3)\n", X)

    def test_immersion_file(self):
        f = parse_immersion("coord a 1/2 0\ncoord b 3 -1\n", instances.edge())
        assert f.coordinates["a"] == (Fraction(1, 2), 0)
        with pytest.raises(InputFormatError):
            parse_immersion("coord a 1/0 0\ncoord b 3 -1\n", instances.edge())
        with pytest.raises(InputFormatError):
            parse_immersion("coord a 1 0\ncoord a 3 -1\n", instances.edge())

    def test_vertex_maps_and_lists(self):
        assert parse_vertex_map("v0:v0, v1:v2 v2:v1") == {"v0": "v0", "v1": "v2", "v2": "v1"}
        with pytest.raises(InputFormatError):
            parse_vertex_map("v0")
        assert parse_int_list("1, 2 4") == [1, 2, 4]
        with pytest.raises(InputFormatError):
            parse_int_list("")
        with pytest.raises(InputFormatError):
            parse_int_list("1,two")

    def test_size_limit(self):
        outcome = FormatValidator({"vertex": 1}, max_bytes=10).validate("vertex abcdefghij\n")
        assert outcome.result == ParseResult.REJECTED_SIZE


class TestReports:
    def test_render(self):
        assert render(Fraction(3, 4)) == "3/4"
        assert render(Fraction(4, 2)) == "2"
        assert render([1, Fraction(1, 2)]) == "1,1/2"
        assert render(True) == "true"
        assert render(None) == "none"

    def test_failed_check_sets_verdict(self):
        report = Report("growth torus", seed=7)
        report.check("non_increasing", False)
        assert report.exit_code == 1
        pairs = parse_report(report.text())
        assert pairs[0] == ("tool", "homology-growth-workbench")
        assert pairs[-1] == ("verdict", "fail")

    def test_keys_are_validated(self):
        with pytest.raises(ValueError):
            Report("x").add("a = b", 1)
