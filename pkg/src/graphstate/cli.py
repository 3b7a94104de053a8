"""Batch front end: apply scripts, verify against the oracle, export, compare.

Exit codes: 0 success, 1 domain error (invalid op, graph or file), 2 usage
error (bad flags, caps exceeded), 3 verification failure / inequivalence.
Summaries go to stdout, diagnostics to stderr with an ``error[<rule>]:``
prefix; identical inputs always produce byte-identical output.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import oracle, persistence, transforms
from .errors import GraphStateError, ResourceLimitError
from .persistence import GraphDocument

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3

MAX_QUBITS_ENV = "GRAPHSTATE_MAX_QUBITS"
RULE_CHECK_CAP = 5


def _default_max_qubits() -> int:
    raw = os.environ.get(MAX_QUBITS_ENV)
    if raw is None:
        return oracle.DEFAULT_QUBIT_CAP
    try:
        return int(raw)
    except ValueError:
        return oracle.DEFAULT_QUBIT_CAP


def _fail(exc: GraphStateError) -> None:
    print(f"error[{exc.rule}]: {exc}", file=sys.stderr)


def _load_document(path: str) -> GraphDocument:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise GraphStateError(f"cannot read {path}: {exc.strerror}",
                              rule="io") from exc
    return persistence.deserialize(data)


def cmd_apply(args: argparse.Namespace) -> int:
    try:
        doc = _load_document(args.in_path)
        script_text = Path(args.script).read_text(encoding="utf-8")
        script = persistence.parse_script(script_text)
        result = persistence.run_script(doc, script)
        Path(args.out_path).write_bytes(persistence.serialize(result))
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except GraphStateError as exc:
        _fail(exc)
        return EXIT_DOMAIN
    print(f"applied {len(script)} step(s)")
    print(f"vertices: {doc.graph.vertex_count} -> {result.graph.vertex_count}")
    print(f"edges: {doc.graph.edge_count} -> {result.graph.edge_count}")
    print(f"journal: {len(result.journal)} record(s)")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        doc = _load_document(args.in_path)
    except GraphStateError as exc:
        _fail(exc)
        return EXIT_DOMAIN

    checks = [name for name, wanted in (
        ("stabilizers", args.check_stabilizers),
        ("lc", args.check_lc),
        ("rules", args.check_rules),
    ) if wanted]
    if not checks:
        checks = ["stabilizers", "lc", "rules"]

    n = doc.graph.vertex_count
    if n > args.max_qubits:
        print(
            f"error[resource-limit]: graph has {n} vertices, cap is "
            f"{args.max_qubits}; raise --max-qubits or {MAX_QUBITS_ENV}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    if "rules" in checks and n > RULE_CHECK_CAP:
        print(
            f"error[resource-limit]: the rules check is capped at "
            f"{RULE_CHECK_CAP} vertices, graph has {n}",
            file=sys.stderr,
        )
        return EXIT_USAGE

    g = doc.graph
    results: list[tuple[str, bool]] = []
    try:
        for name in checks:
            if name == "stabilizers":
                ok = oracle.verify_stabilizers(g, max_qubits=args.max_qubits)
            elif name == "lc":
                ok = all(oracle.lc_unitary_check(g, a, max_qubits=args.max_qubits)
                         for a in g.vertex_ids)
            else:
                ok = oracle.verify_all_rules(g)
            results.append((name, ok))
    except ResourceLimitError as exc:
        _fail(exc)
        return EXIT_USAGE

    for name, ok in results:
        print(f"check-{name}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_VERIFY


def cmd_lceq(args: argparse.Namespace) -> int:
    try:
        doc_a = _load_document(args.path_a)
        doc_b = _load_document(args.path_b)
        equivalent, witness = transforms.graphs_lc_equivalent(
            doc_a.graph, doc_b.graph, max_vertices=args.max_vertices
        )
    except ResourceLimitError as exc:
        _fail(exc)
        return EXIT_USAGE
    except GraphStateError as exc:
        _fail(exc)
        return EXIT_DOMAIN
    if equivalent:
        print("equivalent: yes")
        text = " ".join(f"LC {v}" for v in witness) if witness else "(none)"
        print(f"witness: {text}")
        return EXIT_OK
    print("equivalent: no")
    return EXIT_VERIFY


def cmd_export(args: argparse.Namespace) -> int:
    try:
        doc = _load_document(args.in_path)
    except GraphStateError as exc:
        _fail(exc)
        return EXIT_DOMAIN
    if args.format == "dot":
        sys.stdout.write(persistence.export_dot(doc.graph))
    else:
        sys.stdout.write(persistence.serialize(doc).decode("utf-8"))
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.bind, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphstate",
        description="Graph-state modelling workbench command line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_apply = sub.add_parser("apply", help="run a script against a document")
    p_apply.add_argument("--in", dest="in_path", required=True, metavar="FILE")
    p_apply.add_argument("--script", required=True, metavar="FILE")
    p_apply.add_argument("--out", dest="out_path", required=True, metavar="FILE")
    p_apply.set_defaults(func=cmd_apply)

    p_verify = sub.add_parser("verify", help="run oracle suites on a document")
    p_verify.add_argument("--in", dest="in_path", required=True, metavar="FILE")
    p_verify.add_argument("--check-stabilizers", action="store_true")
    p_verify.add_argument("--check-lc", action="store_true")
    p_verify.add_argument("--check-rules", action="store_true")
    p_verify.add_argument("--max-qubits", type=int, default=_default_max_qubits())
    p_verify.set_defaults(func=cmd_verify)

    p_lceq = sub.add_parser("lceq", help="test two documents for local equivalence")
    p_lceq.add_argument("path_a", metavar="A")
    p_lceq.add_argument("path_b", metavar="B")
    p_lceq.add_argument("--max-vertices", type=int,
                        default=transforms.DEFAULT_LC_VERTEX_CAP)
    p_lceq.set_defaults(func=cmd_lceq)

    p_export = sub.add_parser("export", help="write a document as DOT or JSON")
    p_export.add_argument("--in", dest="in_path", required=True, metavar="FILE")
    p_export.add_argument("--format", required=True, choices=("dot", "json"))
    p_export.set_defaults(func=cmd_export)

    p_serve = sub.add_parser("serve", help="run the HTTP session service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--bind", default="127.0.0.1", metavar="ADDR")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphStateError as exc:
        _fail(exc)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
