"""Document serialization, the operation journal, scripts and DOT export.

Documents serialize to canonical JSON: sorted keys, compact separators,
edges as sorted pairs in sorted order, vertices ascending, UTF-8. A document
whose journal is non-empty also records the graph the journal started from
(key ``initial``), so :func:`replay` can re-derive and cross-check the current
graph; with an empty journal the field is omitted and the canonical empty
document is exactly::

    {"format_version":1,"graph":{"edges":[],"vertices":[]},"journal":[],"metadata":{}}

Scripts are line-oriented: ``V`` adds a vertex, ``DEL v`` deletes one,
``E a b`` / ``UNE a b`` add and remove edges, ``LC a`` complements locally,
``Z a`` / ``Y a`` / ``X a [b]`` measure. ``#`` starts a comment.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from . import transforms
from .errors import (
    DocumentParseError,
    GraphStateError,
    JournalIntegrityError,
    ScriptParseError,
    ScriptRunError,
    ValidationError,
)
from .graph import Graph, LabelMap, VertexAttrs, VertexId
from .graph import add_edge as _add_edge
from .graph import add_vertex as _add_vertex
from .graph import local_complement as _local_complement
from .graph import remove_edge as _remove_edge
from .graph import remove_vertex as _remove_vertex

FORMAT_VERSION = 1
DOCUMENT_SUFFIX = ".q2g.json"
SCRIPT_SUFFIX = ".q2gs"

OP_NAMES = ("add_vertex", "remove_vertex", "move_vertex", "add_edge",
            "remove_edge", "lc", "z", "y", "x")


@dataclass(frozen=True)
class OpRecord:
    """One applied operation: name, canonical arguments, relabelling, consumed
    original label (measurements only)."""

    seq: int
    op: str
    args: Mapping[str, Any]
    label_map: LabelMap
    consumed: VertexId | None = None

    def __post_init__(self) -> None:
        if self.op not in OP_NAMES:
            raise ValidationError(f"unknown op name {self.op!r}", rule="unknown-op")
        if self.seq < 1:
            raise ValidationError(f"seq must be >= 1, got {self.seq}", rule="journal")
        args = dict(self.args)
        # JSON cannot tell 120 from 120.0 and JavaScript clients collapse the
        # two, so float-valued args are normalized here to keep canonical
        # serialization stable across load/save round trips.
        position = args.get("position")
        if (isinstance(position, (list, tuple)) and len(position) == 2
                and all(isinstance(c, (int, float)) and not isinstance(c, bool)
                        for c in position)):
            args["position"] = [float(position[0]), float(position[1])]
        object.__setattr__(self, "args", args)


@dataclass(frozen=True)
class Journal:
    """Strictly ordered log of operations, sequence numbers 1..k."""

    records: tuple[OpRecord, ...] = ()

    def __post_init__(self) -> None:
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        seqs = [r.seq for r in records]
        if seqs != list(range(1, len(records) + 1)):
            raise ValidationError(
                f"journal seq numbers must be 1..{len(records)}, got {seqs}",
                rule="journal",
            )

    def __len__(self) -> int:
        return len(self.records)

    def append(self, record: OpRecord) -> "Journal":
        return Journal(self.records + (record,))


@dataclass(frozen=True)
class GraphDocument:
    """The on-disk and over-the-wire unit: graph + journal + metadata."""

    graph: Graph = field(default_factory=Graph)
    journal: Journal = field(default_factory=Journal)
    metadata: Mapping[str, str] = field(default_factory=dict)
    initial: Graph | None = None
    format_version: int = FORMAT_VERSION

    def __post_init__(self) -> None:
        meta = dict(self.metadata)
        for k, v in meta.items():
            if not isinstance(k, str) or not isinstance(v, str):
                raise ValidationError(
                    f"metadata must map strings to strings, got {k!r}: {v!r}",
                    rule="malformed",
                )
        object.__setattr__(self, "metadata", meta)
        if self.format_version != FORMAT_VERSION:
            raise ValidationError(
                f"unsupported format_version {self.format_version!r}",
                rule="format-version",
            )
        if len(self.journal) == 0 and self.initial is not None:
            raise ValidationError(
                "initial graph must be omitted when the journal is empty",
                rule="journal",
            )
        if len(self.journal) > 0 and self.initial is None:
            raise ValidationError(
                "a non-empty journal requires the initial graph snapshot",
                rule="journal",
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphDocument):
            return NotImplemented
        return (self.graph == other.graph and self.journal == other.journal
                and dict(self.metadata) == dict(other.metadata)
                and self.initial == other.initial
                and self.format_version == other.format_version)


# -- applying op descriptors ---------------------------------------------------


def apply_op(graph: Graph, op: str, args: Mapping[str, Any]
             ) -> tuple[Graph, LabelMap, VertexId | None, dict[str, Any]]:
    """Apply one named operation; returns the new graph, the label map, the
    consumed original label and the canonicalized argument dict.

    This single dispatcher backs journal replay, script execution and the
    HTTP ops endpoint, so all three agree on semantics and canonical args.
    """
    if op not in OP_NAMES:
        raise ValidationError(f"unknown op name {op!r}", rule="unknown-op")
    args = dict(args or {})

    def want_int(key: str) -> int:
        value = args.get(key)
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValidationError(
                f"op {op!r} requires integer {key!r}, got {value!r}",
                rule="malformed",
            )
        return value

    identity = LabelMap.identity(graph.vertex_count)
    if op == "add_vertex":
        attrs = VertexAttrs(
            is_input=bool(args.get("is_input", False)),
            position=tuple(args.get("position", (0.0, 0.0))),
        )
        new_graph, new_id = _add_vertex(graph, attrs)
        canonical = {"is_input": attrs.is_input, "position": list(attrs.position)}
        return new_graph, identity, None, canonical
    if op == "remove_vertex":
        vertex = want_int("vertex")
        new_graph, label_map = _remove_vertex(graph, vertex)
        return new_graph, label_map, None, {"vertex": vertex}
    if op == "move_vertex":
        vertex = want_int("vertex")
        position = args.get("position")
        if not (isinstance(position, (list, tuple)) and len(position) == 2):
            raise ValidationError(
                f"move_vertex requires a position pair, got {position!r}",
                rule="malformed",
            )
        old = graph.attrs(vertex)
        attrs = VertexAttrs(is_input=old.is_input,
                            position=(position[0], position[1]))
        vertices = graph.vertices()
        vertices[vertex] = attrs
        new_graph = Graph(vertices, graph.edges)
        return new_graph, identity, None, {
            "position": list(attrs.position), "vertex": vertex,
        }
    if op in ("add_edge", "remove_edge"):
        a, b = want_int("a"), want_int("b")
        a, b = (a, b) if a <= b else (b, a)
        fn = _add_edge if op == "add_edge" else _remove_edge
        return fn(graph, a, b), identity, None, {"a": a, "b": b}
    if op == "lc":
        vertex = want_int("vertex")
        return _local_complement(graph, vertex), identity, None, {"vertex": vertex}

    target = want_int("target")
    if op == "z":
        result = transforms.measure_z(graph, target)
        canonical: dict[str, Any] = {"target": target}
    elif op == "y":
        result = transforms.measure_y(graph, target)
        canonical = {"target": target}
    else:  # x
        special = args.get("special_neighbour")
        if special is not None and (not isinstance(special, int) or isinstance(special, bool)):
            raise ValidationError(
                f"special_neighbour must be an integer, got {special!r}",
                rule="malformed",
            )
        if special is None and graph.has_vertex(target):
            special = transforms.default_special_neighbour(graph, target)
        result = transforms.measure_x(graph, target, special)
        canonical = {"special_neighbour": special, "target": target}
    return result.graph, result.label_map, result.consumed, canonical


# -- JSON (de)serialization ----------------------------------------------------


def _graph_to_jsonable(g: Graph) -> dict[str, Any]:
    return {
        "edges": [list(e) for e in g.sorted_edges()],
        "vertices": [
            {
                "is_input": g.attrs(v).is_input,
                "label": v,
                "position": list(g.attrs(v).position),
            }
            for v in g.vertex_ids
        ],
    }


def _expect(obj: Any, kind: type, what: str) -> Any:
    if not isinstance(obj, kind):
        raise ValidationError(
            f"{what} must be {kind.__name__}, got {type(obj).__name__}",
            rule="malformed",
        )
    return obj


def _graph_from_jsonable(obj: Any, what: str = "graph") -> Graph:
    _expect(obj, dict, what)
    vertices_raw = _expect(obj.get("vertices", []), list, f"{what}.vertices")
    edges_raw = _expect(obj.get("edges", []), list, f"{what}.edges")
    vertices: dict[int, VertexAttrs] = {}
    for entry in vertices_raw:
        _expect(entry, dict, f"{what}.vertices entry")
        label = entry.get("label")
        if not isinstance(label, int) or isinstance(label, bool):
            raise ValidationError(
                f"{what}: vertex label must be an integer, got {label!r}",
                rule="malformed",
            )
        if label in vertices:
            raise ValidationError(
                f"{what}: duplicate vertex label {label}", rule="malformed"
            )
        position = entry.get("position", [0.0, 0.0])
        if not (isinstance(position, list) and len(position) == 2):
            raise ValidationError(
                f"{what}: position must be a pair, got {position!r}",
                rule="malformed",
            )
        vertices[label] = VertexAttrs(
            is_input=bool(entry.get("is_input", False)),
            position=(position[0], position[1]),
        )
    edges = []
    for pair in edges_raw:
        if not (isinstance(pair, list) and len(pair) == 2
                and all(isinstance(x, int) and not isinstance(x, bool) for x in pair)):
            raise ValidationError(
                f"{what}: edge must be a pair of integers, got {pair!r}",
                rule="malformed",
            )
        edges.append((pair[0], pair[1]))
    return Graph(vertices, edges)


def _label_map_from_jsonable(obj: Any) -> LabelMap:
    _expect(obj, list, "label_map")
    pairs = []
    for pair in obj:
        if not (isinstance(pair, list) and len(pair) == 2
                and all(isinstance(x, int) and not isinstance(x, bool) for x in pair)):
            raise ValidationError(
                f"label_map entries must be integer pairs, got {pair!r}",
                rule="malformed",
            )
        pairs.append((pair[0], pair[1]))
    return LabelMap(tuple(pairs))


def _record_to_jsonable(r: OpRecord) -> dict[str, Any]:
    return {
        "args": dict(r.args),
        "consumed": r.consumed,
        "label_map": [list(p) for p in r.label_map.pairs],
        "op": r.op,
        "seq": r.seq,
    }


def _record_from_jsonable(obj: Any) -> OpRecord:
    _expect(obj, dict, "journal record")
    seq = obj.get("seq")
    op = obj.get("op")
    if not isinstance(seq, int) or isinstance(seq, bool):
        raise ValidationError(f"record seq must be an integer, got {seq!r}",
                              rule="malformed")
    if not isinstance(op, str):
        raise ValidationError(f"record op must be a string, got {op!r}",
                              rule="malformed")
    consumed = obj.get("consumed")
    if consumed is not None and (not isinstance(consumed, int) or isinstance(consumed, bool)):
        raise ValidationError(f"record consumed must be an integer or null, got {consumed!r}",
                              rule="malformed")
    return OpRecord(
        seq=seq,
        op=op,
        args=_expect(obj.get("args", {}), dict, "record args"),
        label_map=_label_map_from_jsonable(obj.get("label_map", [])),
        consumed=consumed,
    )


def document_to_jsonable(doc: GraphDocument) -> dict[str, Any]:
    out: dict[str, Any] = {
        "format_version": doc.format_version,
        "graph": _graph_to_jsonable(doc.graph),
        "journal": [_record_to_jsonable(r) for r in doc.journal.records],
        "metadata": dict(doc.metadata),
    }
    if doc.initial is not None:
        out["initial"] = _graph_to_jsonable(doc.initial)
    return out


def document_from_jsonable(obj: Any) -> GraphDocument:
    _expect(obj, dict, "document")
    version = obj.get("format_version")
    if not isinstance(version, int) or isinstance(version, bool):
        raise ValidationError(
            f"format_version must be an integer, got {version!r}",
            rule="format-version",
        )
    metadata = _expect(obj.get("metadata", {}), dict, "metadata")
    journal = Journal(tuple(
        _record_from_jsonable(r)
        for r in _expect(obj.get("journal", []), list, "journal")
    ))
    initial_obj = obj.get("initial")
    initial = None if initial_obj is None else _graph_from_jsonable(initial_obj, "initial")
    return GraphDocument(
        graph=_graph_from_jsonable(obj.get("graph", {})),
        journal=journal,
        metadata=metadata,
        initial=initial,
        format_version=version,
    )


def serialize(doc: GraphDocument) -> bytes:
    """Canonical JSON bytes; identical documents always serialize identically."""
    text = json.dumps(document_to_jsonable(doc), sort_keys=True,
                      separators=(",", ":"), ensure_ascii=False)
    return text.encode("utf-8")


def deserialize(data: bytes | str) -> GraphDocument:
    """Parse and fully re-validate a document; nothing is trusted on load."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentParseError(f"document is not valid UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(
            f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}",
            line=exc.lineno,
            column=exc.colno,
        ) from exc
    return document_from_jsonable(obj)


# -- journal replay -------------------------------------------------------------


def replay(doc: GraphDocument) -> Graph:
    """Re-apply the journal from the recorded initial graph and cross-check.

    Divergence — an op failing, a label map or consumed label differing from
    the record, or a final graph mismatch — raises
    :class:`JournalIntegrityError` naming the first divergent seq.
    """
    current = doc.initial if doc.initial is not None else doc.graph
    for record in doc.journal.records:
        try:
            current, label_map, consumed, _ = apply_op(current, record.op, record.args)
        except JournalIntegrityError:
            raise
        except GraphStateError as exc:
            raise JournalIntegrityError(
                f"journal diverges at seq {record.seq}: {exc}", seq=record.seq
            ) from exc
        if label_map != record.label_map or consumed != record.consumed:
            raise JournalIntegrityError(
                f"journal diverges at seq {record.seq}: recorded relabelling "
                "does not match the replayed operation",
                seq=record.seq,
            )
    if current != doc.graph:
        last = len(doc.journal)
        raise JournalIntegrityError(
            f"replayed graph diverges from the document graph after seq {last}",
            seq=last,
        )
    return current


def record_op(doc: GraphDocument, op: str, args: Mapping[str, Any]
              ) -> tuple[GraphDocument, LabelMap]:
    """Apply one operation to a document, extending its journal."""
    new_graph, label_map, consumed, canonical = apply_op(doc.graph, op, args)
    record = OpRecord(seq=len(doc.journal) + 1, op=op, args=canonical,
                      label_map=label_map, consumed=consumed)
    initial = doc.initial if doc.initial is not None else doc.graph
    return GraphDocument(
        graph=new_graph,
        journal=doc.journal.append(record),
        metadata=doc.metadata,
        initial=initial,
        format_version=doc.format_version,
    ), label_map


# -- scripts --------------------------------------------------------------------


@dataclass(frozen=True)
class ScriptCommand:
    """One parsed script line: op name, integer arguments, source position."""

    op: str
    args: tuple[int, ...]
    line: int
    column: int


@dataclass(frozen=True)
class Script:
    commands: tuple[ScriptCommand, ...] = ()

    def __len__(self) -> int:
        return len(self.commands)


_SCRIPT_ARITY = {
    "V": ("add_vertex", 0, 0),
    "DEL": ("remove_vertex", 1, 1),
    "E": ("add_edge", 2, 2),
    "UNE": ("remove_edge", 2, 2),
    "LC": ("lc", 1, 1),
    "Z": ("z", 1, 1),
    "Y": ("y", 1, 1),
    "X": ("x", 1, 2),
}

_KEYWORD_OF_OP = {op: kw for kw, (op, _, _) in _SCRIPT_ARITY.items()}


def parse_script(text: str) -> Script:
    """Parse the line-oriented script grammar; all errors carry line numbers."""
    commands: list[ScriptCommand] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = line.split()
        column = raw.index(tokens[0]) + 1
        keyword = tokens[0].upper()
        if keyword not in _SCRIPT_ARITY:
            raise ScriptParseError(
                f"unknown command '{tokens[0]}' at line {lineno}",
                line=lineno, column=column,
            )
        op, min_args, max_args = _SCRIPT_ARITY[keyword]
        raw_args = tokens[1:]
        if not min_args <= len(raw_args) <= max_args:
            wanted = str(min_args) if min_args == max_args else f"{min_args}..{max_args}"
            raise ScriptParseError(
                f"command '{keyword}' takes {wanted} argument(s), "
                f"got {len(raw_args)} at line {lineno}",
                line=lineno, column=column,
            )
        args = []
        for tok in raw_args:
            try:
                args.append(int(tok, 10))
            except ValueError:
                raise ScriptParseError(
                    f"expected an integer, got '{tok}' at line {lineno}",
                    line=lineno, column=column,
                ) from None
        commands.append(ScriptCommand(op, tuple(args), lineno, column))
    return Script(tuple(commands))


def render_script(script: Script) -> str:
    """Canonical inverse printer: one uppercase command per line."""
    lines = []
    for cmd in script.commands:
        keyword = _KEYWORD_OF_OP[cmd.op]
        lines.append(" ".join([keyword, *map(str, cmd.args)]).rstrip())
    return "".join(line + "\n" for line in lines)


def _command_args(cmd: ScriptCommand) -> dict[str, Any]:
    if cmd.op == "add_vertex":
        return {}
    if cmd.op in ("remove_vertex", "lc"):
        return {"vertex": cmd.args[0]}
    if cmd.op in ("add_edge", "remove_edge"):
        return {"a": cmd.args[0], "b": cmd.args[1]}
    if cmd.op == "x":
        special = cmd.args[1] if len(cmd.args) == 2 else None
        return {"target": cmd.args[0], "special_neighbour": special}
    return {"target": cmd.args[0]}


def run_script(doc: GraphDocument, script: Script) -> GraphDocument:
    """Apply every script command in order, extending the document's journal.

    The first failing command aborts with :class:`ScriptRunError` carrying the
    command index and source line; the input document is never mutated.
    """
    current = doc
    for index, cmd in enumerate(script.commands):
        try:
            current, _ = record_op(current, cmd.op, _command_args(cmd))
        except GraphStateError as exc:
            raise ScriptRunError(
                f"{exc} at line {cmd.line} (step {index + 1})",
                line=cmd.line, index=index, cause=exc,
            ) from exc
    return current


# -- DOT export -------------------------------------------------------------------


def export_dot(g: Graph) -> str:
    """Render as an undirected DOT graph with stable ordering.

    Vertex positions are emitted as ``pos`` attributes (graphviz pin syntax).
    """
    if g.vertex_count == 0:
        return "graph G {}\n"
    lines = ["graph G {"]
    for v in g.vertex_ids:
        x, y = g.attrs(v).position
        lines.append(f'  {v} [pos="{x!r},{y!r}!"];')
    for a, b in g.sorted_edges():
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "".join(line + "\n" for line in lines)
