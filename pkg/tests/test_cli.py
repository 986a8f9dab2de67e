"""Graph-spec parsing, report schema, subcommands, exit codes."""

import json
import math

import numpy as np
import pytest

from ctqw import graphs as G
from ctqw.cli import (
    EXIT_HEALTH,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_SUITE,
    ParseError,
    RunReport,
    main,
    parse_graph_spec,
    run_analysis,
    validate_report,
)
from ctqw.walks import DetectionConfig


class TestSpecParsing:
    def test_named_families(self):
        assert parse_graph_spec("path:4").order == 4
        assert parse_graph_spec("cycle:6").order == 6
        assert parse_graph_spec("star:16").order == 17
        assert parse_graph_spec("cube:3").order == 8
        assert parse_graph_spec("cocktail:4").order == 8
        assert parse_graph_spec("complete:5").order == 5
        assert parse_graph_spec("empty:2").order == 2

    def test_nested_expressions(self):
        g = parse_graph_spec("prod(star:16,path:2)")
        assert g.order == 34
        g = parse_graph_spec("cone2:cycle:4")
        assert g.order == 6
        g = parse_graph_spec("overlay(cycle:4,empty:4)")
        assert np.array_equal(g.weights, G.cycle(4).weights)
        g = parse_graph_spec("prod(cone2:path:2, path:2)")
        assert g.order == 8

    def test_file_specs(self, tmp_path):
        target = tmp_path / "g.graph"
        G.write_graph(G.cycle(5), target)
        g = parse_graph_spec(str(target))
        assert g.order == 5
        nested = parse_graph_spec(f"prod({target},path:2)")
        assert nested.order == 10

    def test_errors_carry_position(self):
        with pytest.raises(ParseError):
            parse_graph_spec("nosuch:4")
        with pytest.raises(ParseError) as err:
            parse_graph_spec("prod(path:2 path:2)")
        assert "position" in str(err.value)
        with pytest.raises(ParseError):
            parse_graph_spec("path:x")
        with pytest.raises(ParseError):
            parse_graph_spec("path:0")
        with pytest.raises(ParseError):
            parse_graph_spec("cycle:6 trailing")
        with pytest.raises(ParseError):
            parse_graph_spec("overlay(path:2,path:3)")


class TestReports:
    def test_json_round_trip_and_schema(self):
        rep = run_analysis(parse_graph_spec("cycle:6"), DetectionConfig())
        payload = rep.payload()
        assert payload == json.loads(json.dumps(payload))
        cert = payload["certificates"][0]
        assert set(cert) == {
            "graph", "a", "b", "tau", "alpha", "beta", "gamma", "zeta", "kind", "residual", "method",
        }
        assert isinstance(cert["alpha"], list) and len(cert["alpha"]) == 2

    def test_certificates_revalidate_on_load(self):
        rep = run_analysis(parse_graph_spec("path:4"), DetectionConfig())
        loaded = RunReport.from_json(rep.to_json())
        assert validate_report(loaded)

    def test_tampered_report_fails_validation(self):
        rep = run_analysis(parse_graph_spec("cycle:6"), DetectionConfig())
        loaded = RunReport.from_json(rep.to_json())
        loaded["certificates"][0]["tau"] *= 1.01
        assert not validate_report(loaded)

    def test_deterministic(self):
        a = run_analysis(parse_graph_spec("cocktail:3"), DetectionConfig()).payload()
        b = run_analysis(parse_graph_spec("cocktail:3"), DetectionConfig()).payload()
        a.pop("timing_ms")
        b.pop("timing_ms")
        assert a == b

    def test_scan_pipeline_path5_empty(self):
        rep = run_analysis(parse_graph_spec("path:5"), DetectionConfig(), do_scan=True)
        assert rep.certificates == []
        entry = rep.predicates["pair(0,4)"]
        assert entry["classification"].startswith("not classifiable")


class TestCommands:
    def test_analyze_to_file(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["analyze", "cycle:6", "--json", str(out)])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        taus = [c["tau"] for c in payload["certificates"] if c["kind"] == "fractional_revival"]
        assert any(abs(t - 2 * math.pi / 3) < 1e-9 for t in taus)

    def test_analyze_stdout(self, capsys):
        assert main(["analyze", "path:2"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["input_spec"] == "path:2"

    def test_parse_error_exit_code(self, capsys):
        assert main(["analyze", "bogus:1"]) == EXIT_PARSE
        assert "parse error" in capsys.readouterr().err

    def test_analyze_bunkbed_balanced_time(self, capsys):
        assert main(["analyze", "prod(star:16,path:2)"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        bal = [c for c in payload["certificates"] if c["kind"] == "balanced_fr"]
        assert any(abs(c["tau"] - 0.7853981633974483) <= 1e-9 for c in bal)

    def test_paper_suite_cycles_rows(self, capsys):
        code = main(["paper-suite", "--only", "cycles"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "C6" in out and "C4" in out
        for n in (8, 10, 12, 14, 16):
            assert f"C{n}" in out

    def test_quotient_cocktail(self, capsys):
        code = main(["quotient", "cocktail:3", "--pin", "0", "--pin", "1"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "3 cells" in out
        payload = json.loads(out[out.index("\n{\n") + 1 :])
        assert payload["predicates"]["quotient_transport"]["holds"]
        kinds = {c["kind"] for c in payload["certificates"]}
        assert "fractional_revival" in kinds

    def test_quotient_cone_over_c4(self, capsys):
        code = main(["quotient", "cone2:cycle:4", "--pin", "a", "--pin", "b"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "[0, 2, 0]" in out and "[2, 2, 2]" in out

    def test_quotient_star_two_cells(self, capsys):
        code = main(["quotient", "star:6", "--pin", "c"])
        assert code == EXIT_OK
        assert "2 cells" in capsys.readouterr().out

    def test_construct_round_trip(self, tmp_path):
        out = tmp_path / "c6.graph"
        assert main(["construct", "cycle:6", "--out", str(out)]) == EXIT_OK
        g = G.read_graph(out)
        assert np.array_equal(g.weights, G.cycle(6).weights)

    def test_scan_command(self, capsys):
        code = main(["scan", "cycle:4", "--source", "0", "--tmax", "8", "--grid", "4000"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert any(c["kind"] == "perfect_state_transfer" for c in payload["certificates"])

    def test_paper_suite_single_group(self, capsys):
        code = main(["paper-suite", "--only", "classification"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "[PASS]" in out and "[FAIL]" not in out

    def test_paper_suite_failure_exit(self, capsys, monkeypatch):
        from ctqw import cli as cli_mod
        from ctqw.suite import RowResult

        monkeypatch.setattr(cli_mod, "run_groups", lambda groups, cfg: [RowResult("g", "row", False, "boom")])
        assert main(["paper-suite", "--only", "cycles"]) == EXIT_SUITE
        assert "[FAIL]" in capsys.readouterr().out

    def test_health_exit_code_contract(self):
        assert (EXIT_OK, EXIT_PARSE, EXIT_HEALTH, EXIT_SUITE) == (0, 2, 3, 4)
