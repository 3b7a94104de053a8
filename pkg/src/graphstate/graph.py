"""Labelled simple graphs and their structural rewrites.

Vertex labels are contiguous positive integers ``1..n`` at all times: deleting
a vertex renumbers every higher label down by one (order-preserving
compaction), and the :class:`LabelMap` returned by the deletion makes the
renumbering auditable. Loops and parallel edges are rejected everywhere.

Graphs are immutable values; every operation returns a new graph, so instances
are safe to share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import (
    DuplicateEdgeError,
    EdgeNotFoundError,
    LoopEdgeError,
    ValidationError,
    VertexNotFoundError,
)

VertexId = int
Edge = tuple[VertexId, VertexId]


@dataclass(frozen=True)
class VertexAttrs:
    """Per-vertex attributes: input designation and a 2-D canvas position.

    Attributes never influence any rewrite rule; the position exists purely
    for the editor and must be finite.
    """

    is_input: bool = False
    position: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        try:
            x, y = self.position
            x, y = float(x), float(y)
        except (TypeError, ValueError):
            raise ValidationError(
                f"position must be a pair of numbers, got {self.position!r}",
                rule="position",
            ) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValidationError(
                f"position coordinates must be finite, got {self.position!r}",
                rule="position",
            )
        object.__setattr__(self, "position", (x, y))
        object.__setattr__(self, "is_input", bool(self.is_input))


@dataclass(frozen=True)
class LabelMap:
    """Order-preserving relabelling of the vertices that survive an operation.

    ``pairs`` lists ``(old_label, new_label)`` for every surviving vertex, in
    increasing old-label order; the new labels are exactly ``1..m``.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(o), int(n)) for o, n in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        olds = [o for o, _ in pairs]
        news = [n for _, n in pairs]
        if any(o <= 0 for o in olds):
            raise ValidationError("label map old labels must be positive")
        if olds != sorted(set(olds)):
            raise ValidationError("label map old labels must be strictly increasing")
        if news != list(range(1, len(news) + 1)):
            raise ValidationError(
                f"label map image must be contiguous 1..{len(news)}, got {news}"
            )

    @classmethod
    def identity(cls, n: int) -> "LabelMap":
        return cls(tuple((v, v) for v in range(1, n + 1)))

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(o for o, _ in self.pairs)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(n for _, n in self.pairs)

    def get(self, old: int) -> int | None:
        for o, n in self.pairs:
            if o == old:
                return n
        return None

    def apply(self, old: int) -> int:
        new = self.get(old)
        if new is None:
            raise VertexNotFoundError(f"label {old} is not in the label map")
        return new

    def compose(self, after: "LabelMap") -> "LabelMap":
        """Map through ``self`` then ``after``; drops vertices ``after`` consumed."""
        kept = []
        for old, mid in self.pairs:
            new = after.get(mid)
            if new is not None:
                kept.append((old, new))
        return LabelMap(tuple(kept))

    def is_identity(self) -> bool:
        return all(o == n for o, n in self.pairs)


def _edge_key(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


class Graph:
    """A labelled simple graph: vertices ``1..n`` with attributes, plus edges.

    Construction re-validates every invariant (contiguous labels, no loops, no
    parallel edges, endpoints exist), so any reachable ``Graph`` is well formed.
    """

    __slots__ = ("_attrs", "_edges", "_adj")

    def __init__(self, vertices: Mapping[int, VertexAttrs] | None = None,
                 edges: Iterable[tuple[int, int]] = ()):
        vertices = dict(vertices or {})
        n = len(vertices)
        labels = sorted(vertices)
        if labels != list(range(1, n + 1)):
            raise ValidationError(
                f"vertex labels must be exactly 1..{n}, got {labels}",
                rule="non-contiguous-labels",
            )
        attrs = []
        for v in range(1, n + 1):
            a = vertices[v]
            if not isinstance(a, VertexAttrs):
                a = VertexAttrs(**a) if isinstance(a, Mapping) else VertexAttrs(*a)
            attrs.append(a)

        seen: set[Edge] = set()
        adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise LoopEdgeError(f"loop edge {a}-{b} is prohibited")
            for v in (a, b):
                if not 1 <= v <= n:
                    raise VertexNotFoundError(f"vertex {v} not found")
            key = _edge_key(a, b)
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
            adj[a].add(b)
            adj[b].add(a)

        self._attrs: tuple[VertexAttrs, ...] = tuple(attrs)
        self._edges: frozenset[Edge] = frozenset(seen)
        self._adj: tuple[frozenset[int], ...] = tuple(
            frozenset(adj[v]) for v in range(1, n + 1)
        )

    @classmethod
    def empty(cls) -> "Graph":
        return cls()

    # -- read access ---------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self._attrs)

    @property
    def vertex_ids(self) -> range:
        return range(1, len(self._attrs) + 1)

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def vertices(self) -> dict[int, VertexAttrs]:
        return {v: self._attrs[v - 1] for v in self.vertex_ids}

    def require_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 1 <= v <= len(self._attrs)):
            raise VertexNotFoundError(f"vertex {v} not found")

    def attrs(self, v: int) -> VertexAttrs:
        self.require_vertex(v)
        return self._attrs[v - 1]

    def has_vertex(self, v: int) -> bool:
        return isinstance(v, int) and 1 <= v <= len(self._attrs)

    def has_edge(self, a: int, b: int) -> bool:
        return _edge_key(a, b) in self._edges

    def neighbours(self, v: int) -> frozenset[int]:
        self.require_vertex(v)
        return self._adj[v - 1]

    def degree(self, v: int) -> int:
        return len(self.neighbours(v))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self._edges)

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._attrs == other._attrs and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._attrs, self._edges))

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertex_ids)

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, edges={self.sorted_edges()})"


# -- operations --------------------------------------------------------------


def add_vertex(g: Graph, attrs: VertexAttrs | None = None) -> tuple[Graph, VertexId]:
    """Append a fresh vertex labelled ``n+1``; edges are untouched."""
    attrs = attrs if attrs is not None else VertexAttrs()
    if not isinstance(attrs, VertexAttrs):
        raise ValidationError(f"expected VertexAttrs, got {attrs!r}", rule="malformed")
    new = g.vertex_count + 1
    vertices = g.vertices()
    vertices[new] = attrs
    return Graph(vertices, g.edges), new


def remove_vertex(g: Graph, a: VertexId) -> tuple[Graph, LabelMap]:
    """Delete ``a`` with its incident edges; compact higher labels down by one."""
    g.require_vertex(a)
    survivors = [v for v in g.vertex_ids if v != a]
    relabel = {old: i + 1 for i, old in enumerate(survivors)}
    vertices = {relabel[v]: g.attrs(v) for v in survivors}
    edges = {
        _edge_key(relabel[x], relabel[y])
        for (x, y) in g.edges
        if a not in (x, y)
    }
    label_map = LabelMap(tuple((old, relabel[old]) for old in survivors))
    return Graph(vertices, edges), label_map


def add_edge(g: Graph, a: VertexId, b: VertexId) -> Graph:
    """Join ``a`` and ``b``; loops and repeated edges are errors, not no-ops."""
    if a == b:
        raise LoopEdgeError(f"loop edge {a}-{b} is prohibited")
    g.require_vertex(a)
    g.require_vertex(b)
    if g.has_edge(a, b):
        key = _edge_key(a, b)
        raise DuplicateEdgeError(f"duplicate edge {key[0]}-{key[1]}")
    return Graph(g.vertices(), set(g.edges) | {_edge_key(a, b)})


def remove_edge(g: Graph, a: VertexId, b: VertexId) -> Graph:
    """Remove the edge ``ab``; vertex labels are never renumbered here."""
    g.require_vertex(a)
    g.require_vertex(b)
    key = _edge_key(a, b)
    if key not in g.edges:
        raise EdgeNotFoundError(f"edge {key[0]}-{key[1]} not found")
    return Graph(g.vertices(), set(g.edges) - {key})


def neighbourhood(g: Graph, a: VertexId) -> frozenset[int]:
    """All vertices adjacent to ``a`` (never contains ``a`` itself)."""
    return g.neighbours(a)


def complement(g: Graph) -> Graph:
    """Invert every possible edge: present becomes absent and vice versa."""
    all_pairs = set(combinations(g.vertex_ids, 2))
    return Graph(g.vertices(), all_pairs - set(g.edges))


def local_complement(g: Graph, a: VertexId) -> Graph:
    """Toggle every edge between two neighbours of ``a``; all else unchanged.

    Runs in O(d^2) for degree d; edges incident to ``a`` are never touched.
    """
    nbrs = sorted(g.neighbours(a))
    toggled = set(g.edges)
    for b, c in combinations(nbrs, 2):
        key = _edge_key(b, c)
        if key in toggled:
            toggled.remove(key)
        else:
            toggled.add(key)
    return Graph(g.vertices(), toggled)
