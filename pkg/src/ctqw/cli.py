"""Command-line front end: graph specs, analysis reports, reproduction suite.

Graph specs are named families (``path:4``, ``cycle:6``, ``star:16``,
``cube:3``, ``cocktail:4``, ``complete:5``, ``empty:3``), prefixes and
combinators (``cone2:<spec>``, ``prod(<a>,<b>)``, ``overlay(<a>,<b>)``), or a
path to a graph file in the text format of :mod:`ctqw.graphs`.

Exit codes: 0 success, 2 parse error, 3 numerical-health failure, 4 suite
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from ctqw import graphs as G
from ctqw.graphs import GraphFormatError, WeightedGraph
from ctqw.spectral import decompose
from ctqw.suite import ALL_GROUPS, run_groups
from ctqw.walks import (
    DetectionConfig,
    FrCertificate,
    NumericalHealthWarning,
    certify_pair,
    scan_fr,
    transition_column,
    verify_quotient_transport,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_HEALTH = 3
EXIT_SUITE = 4

#: significant digits for floats in JSON reports
JSON_DIGITS = 12


class ParseError(ValueError):
    """Graph-spec syntax error with the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos


_FAMILIES = {
    "path": G.path,
    "cycle": G.cycle,
    "star": G.star,
    "cube": G.hypercube,
    "cocktail": G.cocktail_party,
    "complete": G.complete,
    "empty": G.empty,
}


class _SpecParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> WeightedGraph:
        g = self._spec()
        self._skip_ws()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected trailing input {self.text[self.pos:]!r}", self.pos)
        return g

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _try(self, token: str) -> bool:
        self._skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def _expect(self, token: str) -> None:
        if not self._try(token):
            raise ParseError(f"expected {token!r}", self.pos)

    def _spec(self) -> WeightedGraph:
        self._skip_ws()
        start = self.pos
        if self._try("prod("):
            a = self._spec()
            self._expect(",")
            b = self._spec()
            self._expect(")")
            return G.cartesian_product(a, b)
        if self._try("overlay("):
            a = self._spec()
            self._expect(",")
            b = self._spec()
            self._expect(")")
            try:
                return G.union_overlay(a, b)
            except ValueError as exc:
                raise ParseError(str(exc), start) from None
        if self._try("cone2:"):
            return G.double_cone(self._spec())
        token = self._leaf_token()
        if not token:
            raise ParseError("expected a graph spec", start)
        head, sep, arg = token.partition(":")
        if sep and head in _FAMILIES:
            try:
                n = int(arg)
            except ValueError:
                raise ParseError(f"bad integer argument {arg!r} for {head}", start + len(head) + 1) from None
            try:
                return _FAMILIES[head](n)
            except ValueError as exc:
                raise ParseError(str(exc), start) from None
        if os.path.exists(token):
            try:
                return G.read_graph(token)
            except GraphFormatError as exc:
                raise ParseError(f"in file {token}: {exc}", start) from None
        raise ParseError(f"unknown graph spec {token!r}", start)

    def _leaf_token(self) -> str:
        out = []
        while self.pos < len(self.text) and self.text[self.pos] not in ",()":
            out.append(self.text[self.pos])
            self.pos += 1
        return "".join(out).strip()


def parse_graph_spec(text: str) -> WeightedGraph:
    return _SpecParser(text).parse()


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _round_float(x: float) -> float:
    if not math.isfinite(x) or x == 0.0:
        return float(x)
    return float(f"{x:.{JSON_DIGITS}g}")


def _jsonify(value):
    """Recursively convert to JSON-safe values with rounded floats."""
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [_round_float(float(value.real)), _round_float(float(value.imag))]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _round_float(float(value))
    if isinstance(value, np.ndarray):
        return [_jsonify(v) for v in value.tolist()]
    return value


def certificate_to_json(cert: FrCertificate, graph_name: str) -> dict:
    return _jsonify(
        {
            "graph": graph_name,
            "a": cert.a,
            "b": cert.b,
            "tau": cert.tau,
            "alpha": complex(cert.alpha),
            "beta": complex(cert.beta),
            "gamma": cert.gamma,
            "zeta": cert.zeta,
            "kind": cert.kind,
            "residual": cert.residual,
            "method": cert.method,
        }
    )


@dataclass
class RunReport:
    """One analysis run: input, configuration, certificates, named checks.

    All numeric payload is rounded to JSON_DIGITS significant digits at
    construction so that emitting and re-parsing the JSON is an identity.
    """

    input_spec: str
    config: dict
    graph: dict
    certificates: list
    predicates: dict
    timing_ms: dict
    health_warnings: list = field(default_factory=list)

    def payload(self) -> dict:
        return {
            "input_spec": self.input_spec,
            "config": self.config,
            "graph": self.graph,
            "certificates": self.certificates,
            "predicates": self.predicates,
            "timing_ms": self.timing_ms,
            "health_warnings": self.health_warnings,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.payload(), indent=indent)

    @staticmethod
    def from_json(text: str) -> dict:
        return json.loads(text)


def validate_report(payload: dict, graph: WeightedGraph | None = None) -> bool:
    """Recompute every certificate residual from the stored graph.

    Uses the report's exact weights when present (derived graphs such as
    quotients have no parseable spec), else re-parses the input spec. A
    loaded certificate is accepted when the recomputed residual is within 2x
    its stored value, with a floor absorbing the 12-digit JSON rounding of
    (tau, alpha, beta): rounding tau perturbs the column by up to about
    5e-12 * |tau| * ||A||.
    """
    if graph is None:
        if "weights" in payload.get("graph", {}):
            g = payload["graph"]
            graph = WeightedGraph(np.array(g["weights"]), tuple(g["labels"]), payload["input_spec"])
        else:
            graph = parse_graph_spec(payload["input_spec"])
    dec = decompose(graph)
    norm = float(np.abs(graph.weights).sum(axis=1).max())
    for c in payload["certificates"]:
        tau = float(c["tau"])
        col = transition_column(dec, int(c["a"]), tau)
        expected = np.zeros(graph.order, dtype=complex)
        expected[int(c["a"])] += complex(c["alpha"][0], c["alpha"][1])
        expected[int(c["b"])] += complex(c["beta"][0], c["beta"][1])
        residual = float(np.linalg.norm(col - expected))
        floor = 1e-11 * max(1.0, abs(tau) * norm)
        if residual > max(2.0 * float(c["residual"]), floor):
            return False
    return True


def run_analysis(
    graph: WeightedGraph,
    cfg: DetectionConfig = DetectionConfig(),
    do_scan: bool = False,
) -> RunReport:
    """Full pipeline: decompose, profile all pairs, certify, optionally scan."""
    timing: dict[str, float] = {}
    predicates: dict[str, dict] = {}
    certificates: list[tuple] = []

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NumericalHealthWarning)

        t0 = time.perf_counter()
        dec = decompose(graph)
        timing["decompose"] = (time.perf_counter() - t0) * 1000.0

        predicates["connected"] = {"holds": G.is_connected(graph)}
        predicates["signed"] = {"holds": graph.signed}
        if dec.ambiguous_clustering:
            predicates["ambiguous_clustering"] = {"holds": True}

        t0 = time.perf_counter()
        seen: set[tuple] = set()
        n = graph.order
        for a in range(n):
            for b in range(a + 1, n):
                pc = certify_pair(dec, a, b, cfg)
                if not pc.profile.strongly_cospectral:
                    continue
                entry: dict = {
                    "strongly_cospectral": True,
                    "parallel": pc.profile.parallel,
                    "cospectral": pc.profile.cospectral,
                    "perron_anchor_valid": pc.profile.perron_anchor_valid,
                    "phi_plus": sorted(pc.profile.phi_plus),
                    "phi_minus": sorted(pc.profile.phi_minus),
                }
                if pc.classification is not None:
                    entry["classification"] = pc.classification.kind
                    entry["delta"] = pc.classification.delta
                    entry["tau_step"] = pc.classification.tau_step
                else:
                    entry["classification"] = f"not classifiable: {pc.failure}"
                    if pc.witness is not None and pc.witness.witness_ratio is not None:
                        entry["witness_ratio"] = pc.witness.witness_ratio
                predicates[f"pair({a},{b})"] = entry
                for cert in pc.certificates:
                    key = (cert.a, cert.b, round(cert.tau, 9), cert.kind)
                    if key not in seen:
                        seen.add(key)
                        certificates.append(cert)
        timing["certify"] = (time.perf_counter() - t0) * 1000.0

        if do_scan:
            t0 = time.perf_counter()
            for a in range(n):
                for cert in scan_fr(dec, a, None, cfg):
                    key = (cert.a, cert.b, round(cert.tau, 9), cert.kind)
                    if key not in seen:
                        seen.add(key)
                        certificates.append(cert)
            timing["scan"] = (time.perf_counter() - t0) * 1000.0

    certificates.sort(key=lambda c: (c.a, c.b, c.tau, c.kind))
    health = [str(w.message) for w in caught if issubclass(w.category, NumericalHealthWarning)]
    return RunReport(
        input_spec=graph.name,
        config=_jsonify(
            {
                "tol_walk": cfg.tol_walk,
                "beta_min": cfg.beta_min,
                "t_max": cfg.t_max,
                "grid_points": cfg.grid_points,
                "refine_iters": cfg.refine_iters,
            }
        ),
        graph={
            "order": graph.order,
            "signed": graph.signed,
            "labels": list(graph.labels),
            # exact weights (JSON doubles round-trip), so certificates can be
            # re-validated even when the spec names a derived graph
            "weights": [[float(v) for v in row] for row in graph.weights],
        },
        certificates=[certificate_to_json(c, graph.name) for c in certificates],
        predicates=_jsonify(predicates),
        timing_ms=_jsonify(timing),
        health_warnings=health,
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _config_from_args(args) -> DetectionConfig:
    base = DetectionConfig()
    return DetectionConfig(
        tol_walk=args.tol if getattr(args, "tol", None) else base.tol_walk,
        beta_min=base.beta_min,
        t_max=args.tmax if getattr(args, "tmax", None) else base.t_max,
        grid_points=args.grid if getattr(args, "grid", None) else base.grid_points,
        refine_iters=base.refine_iters,
    )


def _emit_report(report: RunReport, args) -> None:
    text = report.to_json()
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="ascii") as fh:
            fh.write(text + "\n")
        print(f"report written to {args.json}")
    else:
        print(text)


def cmd_analyze(args) -> int:
    graph = parse_graph_spec(args.graph)
    cfg = _config_from_args(args)
    report = run_analysis(graph, cfg, do_scan=args.scan)
    _emit_report(report, args)
    if report.health_warnings:
        for msg in report.health_warnings:
            print(f"numerical health: {msg}", file=sys.stderr)
        return EXIT_HEALTH
    return EXIT_OK


def cmd_scan(args) -> int:
    graph = parse_graph_spec(args.graph)
    cfg = _config_from_args(args)
    dec = decompose(graph)
    sources = [args.source] if args.source is not None else list(range(graph.order))
    certs = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NumericalHealthWarning)
        for a in sources:
            certs.extend(scan_fr(dec, a, args.target, cfg))
    payload = {
        "input_spec": graph.name,
        "certificates": [certificate_to_json(c, graph.name) for c in certs],
    }
    text = json.dumps(payload, indent=2)
    if args.json:
        with open(args.json, "w", encoding="ascii") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if caught:
        return EXIT_HEALTH
    return EXIT_OK


def _resolve_vertex(graph: WeightedGraph, token: str) -> int:
    if token in graph.labels:
        return graph.index_of(token)
    try:
        v = int(token)
    except ValueError:
        raise ParseError(f"unknown vertex {token!r}", 0) from None
    if not (0 <= v < graph.order):
        raise ParseError(f"vertex index {v} out of range", 0)
    return v


def cmd_quotient(args) -> int:
    graph = parse_graph_spec(args.graph)
    cfg = _config_from_args(args)
    pins = [_resolve_vertex(graph, p) for p in args.pin]
    if len(set(pins)) != len(pins):
        raise ParseError("pinned vertices must be distinct", 0)
    rest = [v for v in range(graph.order) if v not in pins]
    seed = [[p] for p in pins] + ([rest] if rest else [])
    part = G.coarsest_equitable_refinement(graph, seed)
    q = G.quotient(graph, part)

    print(f"quotient of {graph.name} has {q.order} cells:")
    for i, cell in enumerate(part.cells):
        print(f"  cell {i}: {{{', '.join(graph.labels[v] for v in cell)}}}")
    print("quotient matrix:")
    for row in q.weights:
        print("  [" + ", ".join(f"{x:.6g}" for x in row) + "]")

    predicates = {}
    if len(pins) >= 2:
        a, b = pins[0], pins[1]
        ia, ib = part.cell_of(a), part.cell_of(b)
        if len(part.cells[ia]) == 1 and len(part.cells[ib]) == 1:
            rep = verify_quotient_transport(graph, part, a, b, cfg)
            predicates["quotient_transport"] = {
                "holds": rep["holds"],
                "max_entry_difference": rep["max_entry_difference"],
            }
            print(
                f"transport entries match on the sample grid: {rep['entries_ok']} "
                f"(max dev {rep['max_entry_difference']:.2e}); "
                f"certificate correspondence: {rep['correspondence_ok']}"
            )
        else:
            predicates["quotient_transport"] = {"holds": False, "error": "pinned cells are not singletons"}
            print("pinned vertices are not singleton cells; transport check skipped")

    report = run_analysis(q, cfg)
    report.predicates.update(_jsonify(predicates))
    _emit_report(report, args)
    return EXIT_HEALTH if report.health_warnings else EXIT_OK


def cmd_construct(args) -> int:
    graph = parse_graph_spec(args.graph)
    if args.out:
        G.write_graph(graph, args.out)
        print(f"{graph.name}: order {graph.order}, written to {args.out}")
    else:
        G.write_graph(graph, sys.stdout)
    return EXIT_OK


def cmd_paper_suite(args) -> int:
    cfg = _config_from_args(args)
    groups = [args.only] if args.only else None
    rows = run_groups(groups, cfg)
    width = max(len(r.name) for r in rows)
    failures = 0
    for r in rows:
        status = "PASS" if r.ok else "FAIL"
        print(f"[{status}] {r.group:<18} {r.name:<{width}}  {r.detail if not r.ok else ''}".rstrip())
        failures += 0 if r.ok else 1
    print(f"{len(rows) - failures}/{len(rows)} rows pass")
    return EXIT_OK if failures == 0 else EXIT_SUITE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctqw",
        description="Analyze continuous-time quantum walks and certify transport events.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--tmax", type=float, default=None, help="scan horizon (default 50)")
        p.add_argument("--tol", type=float, default=None, help="walk residual tolerance (default 1e-8)")
        p.add_argument("--grid", type=int, default=None, help="scan grid points (default 20000)")
        p.add_argument("--json", type=str, default=None, help="write the JSON report to this file")

    p = sub.add_parser("analyze", help="decompose, profile pairs, certify transport events")
    p.add_argument("graph", help="graph spec, e.g. cycle:6 or prod(star:16,path:2)")
    p.add_argument("--scan", action="store_true", help="also run the heuristic time scan from every vertex")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="heuristic revival scan over (0, tmax]")
    p.add_argument("graph")
    p.add_argument("--source", type=int, default=None, help="start vertex (default: all)")
    p.add_argument("--target", type=int, default=None, help="partner vertex (default: best per time)")
    add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("quotient", help="equitable refinement, quotient matrix, transport check")
    p.add_argument("graph")
    p.add_argument("--pin", action="append", default=[], metavar="VERTEX",
                   help="seed a singleton cell at this vertex (label or index); repeatable")
    add_common(p)
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("construct", help="build a graph spec and write the text format")
    p.add_argument("graph")
    p.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("paper-suite", help="run the built-in reproduction suite")
    p.add_argument("--only", type=str, default=None, choices=list(ALL_GROUPS),
                   help="run a single group")
    add_common(p)
    p.set_defaults(func=cmd_paper_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, GraphFormatError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
