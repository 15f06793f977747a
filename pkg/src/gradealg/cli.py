"""Command-line entry point.

    gradealg graph-analyze GRAPH
    gradealg decide-hge GRAPH_E GRAPH_F [--trunc N]
    gradealg stabilize GRAPH --vertex V [--depth N] [--window N] [--samples K] [--seed S]
    gradealg verify-suite [--seed S] [--suite NAME ...]

Exit codes: 0 success, 2 input error, 3 precondition failure, 4 verification
failure.  JSON output uses sorted keys and carries no timings, so identical
configurations give byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import dataclasses
import sys
from dataclasses import asdict, dataclass

from .field import FieldError, get_field
from .graph import (
    GraphError,
    Graph,
    has_no_sinks,
    is_acyclic,
    is_primitive,
    load_graph,
    max_path_length_to,
    sinks,
    sources,
)
from .lpa import LpaAlgebra, LpaError, fullness_certificate_primitive, reduced_monomials
from .morita import MoritaError, PreconditionError, decide_hge
from .stabilization import verify_stabilization
from .suites import SUITES, random_lpa_element, run_suites

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_VERIFY = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    inputs: list = dataclasses.field(default_factory=list)
    window: int = 16
    depth: int = 2
    trunc: int = 4
    field: str = "rational"
    format: str = "text"
    seed: int = 0
    vertex: str | None = None
    samples: int = 100
    suites: list = dataclasses.field(default_factory=list)
    corrupt: bool = False

    def validate(self) -> None:
        for name in ("window", "depth"):
            if getattr(self, name) < 1:
                raise CliError(f"--{name} must be positive", EXIT_INPUT)
        for name in ("trunc", "samples"):
            if getattr(self, name) < 0:
                raise CliError(f"--{name} must be non-negative", EXIT_INPUT)
        try:
            get_field(self.field)
        except FieldError as exc:
            raise CliError(str(exc), EXIT_INPUT) from None

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("format")
        if not d["corrupt"]:
            d.pop("corrupt")
        return d


def _read_graph(path: str) -> Graph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}", EXIT_INPUT) from None
    try:
        return load_graph(text)
    except GraphError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from None


# ---------------------------------------------------------------------------
# commands


def cmd_graph_analyze(cfg: RunConfig) -> tuple[dict, int]:
    g = _read_graph(cfg.inputs[0])
    to = {}
    for v in g.vertices:
        try:
            to[v] = max_path_length_to(g, v)
        except GraphError:
            to[v] = None  # a cycle reaches v
    report = {
        "vertices": list(g.vertices),
        "edges": len(g.edges),
        "sinks": sinks(g),
        "sources": sources(g),
        "acyclic": is_acyclic(g),
        "no_sinks": has_no_sinks(g),
        "primitive": is_primitive(g),
        "max_path_length_to": to,
    }
    return report, EXIT_OK


def cmd_decide_hge(cfg: RunConfig) -> tuple[dict, int]:
    E, F = (_read_graph(p) for p in cfg.inputs[:2])
    try:
        verdict = decide_hge(E, F, cfg.trunc, get_field(cfg.field))
    except PreconditionError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION) from None
    except MoritaError as exc:
        raise CliError(str(exc), EXIT_PRECONDITION) from None
    out = verdict.to_json()
    out["verified"] = verdict.verify()
    return out, EXIT_OK if out["verified"] else EXIT_VERIFY


def cmd_stabilize(cfg: RunConfig) -> tuple[dict, int]:
    g = _read_graph(cfg.inputs[0])
    if cfg.vertex is None:
        raise CliError("--vertex is required", EXIT_INPUT)
    if not g.has_vertex(cfg.vertex):
        raise CliError(f"unknown vertex {cfg.vertex!r}", EXIT_INPUT)
    L = LpaAlgebra(g, get_field(cfg.field))
    try:
        cert = fullness_certificate_primitive(L, cfg.vertex)
    except LpaError as exc:
        raise CliError(f"{exc}: v is not known to be full in L_0", EXIT_PRECONDITION) from None
    monos = reduced_monomials(L, 2)

    def sampler(r: random.Random):
        return random_lpa_element(r, L, monos=monos, terms=2)

    report = verify_stabilization(
        L,
        L.vertex(cfg.vertex),
        cert.witness(),
        cfg.depth,
        cfg.window,
        cfg.samples,
        seed=cfg.seed,
        sampler=sampler,
        corrupt=cfg.corrupt,
    )
    passed = all(c.status == "pass" for c in report)
    out = {
        "certificate": cert.to_json(),
        "m": cert.m,
        "passed": passed,
        "report": [c.to_json() for c in report],
    }
    return out, EXIT_OK if passed else EXIT_VERIFY


def cmd_verify_suite(cfg: RunConfig) -> tuple[dict, int]:
    try:
        results = run_suites(cfg.suites or None, seed=cfg.seed)
    except KeyError as exc:
        raise CliError(f"{exc.args[0]}; known: {', '.join(SUITES)}", EXIT_INPUT) from None
    passed = all(r.passed for r in results)
    return {"passed": passed, "suites": [r.to_json() for r in results]}, EXIT_OK if passed else EXIT_VERIFY


COMMANDS = {
    "graph-analyze": cmd_graph_analyze,
    "decide-hge": cmd_decide_hge,
    "stabilize": cmd_stabilize,
    "verify-suite": cmd_verify_suite,
}


# ---------------------------------------------------------------------------
# rendering


def _text(command: str, body: dict) -> str:
    lines = []
    if command == "stabilize":
        for c in body["report"]:
            line = f"{c['status']:4}  N={c['window']:<3} {c['identity']}"
            if c["counterexample"]:
                ce = c["counterexample"]
                line += f"  at ({ce['i']},{ce['j']}): expected {ce['expected']}, got {ce['got']}"
            lines.append(line)
        lines.append(f"m = {body['m']}; {'all identities pass' if body['passed'] else 'FAILURES'}")
    elif command == "verify-suite":
        for s in body["suites"]:
            lines.append(f"{'pass' if s['passed'] else 'FAIL':4}  {s['suite']:<14} {s['cases']} cases")
            lines.extend(f"      {f}" for f in s["failures"])
    elif command == "decide-hge":
        lines.append(f"{body['status']} ({body['criterion']})")
        lines.append(json.dumps(body["values"], sort_keys=True, ensure_ascii=False))
    else:
        for k in sorted(body):
            lines.append(f"{k}: {json.dumps(body[k], sort_keys=True, ensure_ascii=False)}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    # --format and --field are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--field", default=argparse.SUPPRESS, help="rational or fp:<prime> (default: $GRADEALG_FIELD or rational)")
    ap = argparse.ArgumentParser(prog="gradealg", description="Graded algebras, LPAs and the Brown stabilization.", parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph-analyze", parents=[common], help="sinks, sources, acyclicity, primitivity, path lengths")
    p.add_argument("graph")

    p = sub.add_parser("decide-hge", parents=[common], help="homogeneously graded equivalence of L(E) and L(F)")
    p.add_argument("graph_e")
    p.add_argument("graph_f")
    p.add_argument("--trunc", type=int, default=4)

    p = sub.add_parser("stabilize", parents=[common], help="build and verify M_∞(L(E)) ≅ M_∞(vL(E)v)")
    p.add_argument("graph")
    p.add_argument("--vertex", required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--window", type=int, default=16)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("verify-suite", parents=[common], help="run the seeded property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", action="append", default=[], choices=sorted(SUITES))
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fld = getattr(args, "field", None) or os.environ.get("GRADEALG_FIELD") or "rational"
    cfg = RunConfig(command=args.command, field=fld, format=getattr(args, "format", "text"))
    if args.command == "graph-analyze":
        cfg.inputs = [args.graph]
    elif args.command == "decide-hge":
        cfg.inputs = [args.graph_e, args.graph_f]
        cfg.trunc = args.trunc
    elif args.command == "stabilize":
        cfg.inputs = [args.graph]
        cfg.vertex, cfg.depth, cfg.window = args.vertex, args.depth, args.window
        cfg.samples, cfg.seed, cfg.corrupt = args.samples, args.seed, args.corrupt
    else:
        cfg.seed, cfg.suites = args.seed, list(args.suite)
    return cfg


def run(cfg: RunConfig) -> tuple[dict, int]:
    cfg.validate()
    body, code = COMMANDS[cfg.command](cfg)
    return {"command": cfg.command, "config": cfg.to_json(), "result": body}, code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    cfg = config_from_args(args)
    try:
        doc, code = run(cfg)
    except CliError as exc:
        if cfg.format == "json":
            print(json.dumps({"command": cfg.command, "error": str(exc), "exit_code": exc.code}, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    if cfg.format == "json":
        print(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(_text(cfg.command, doc["result"]))
    return code


if __name__ == "__main__":
    sys.exit(main())
