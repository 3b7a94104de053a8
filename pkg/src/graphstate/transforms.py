"""The single-qubit measurement calculus on graphs, plus local-equivalence search.

Measurements rewrite the graph deterministically (the +1 outcome branch):

* ``Z`` at ``a``  — delete ``a`` and its edges.
* ``Y`` at ``a``  — locally complement at ``a``, then delete ``a``.
* ``X`` at ``a``  — pick a special neighbour ``b``; locally complement at
  ``b``, at ``a``, at ``b`` again, then delete ``a``. An isolated target
  degrades to plain deletion for every basis.

The X sequence is the three-complementation rule: it is the unique variant
that the statevector oracle (:mod:`graphstate.oracle`) confirms against the
post-measurement state for every small graph, target and neighbour choice.
Different special-neighbour choices give locally equivalent results, which is
why ``b`` may be omitted (the lowest-labelled neighbour is then used).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    GraphStateError,
    InvalidSpecialNeighbourError,
    ResourceLimitError,
    StepFailedError,
    ValidationError,
)
from .graph import Graph, LabelMap, VertexId, local_complement, remove_vertex

DEFAULT_LC_VERTEX_CAP = 10


class PauliOp(str, Enum):
    """Single-qubit measurement basis; ``I`` is accepted and rewrites nothing."""

    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"


@dataclass(frozen=True)
class MeasurementStep:
    """One measurement instruction, addressed in the current labelling.

    ``special_neighbour`` is only meaningful for X steps; for other bases it
    must be absent.
    """

    op: PauliOp
    target: VertexId
    special_neighbour: VertexId | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.op, PauliOp):
            object.__setattr__(self, "op", PauliOp(str(self.op).upper()))
        if self.special_neighbour is not None and self.op is not PauliOp.X:
            raise ValidationError(
                f"special neighbour only applies to X steps, not {self.op.value}"
            )


@dataclass(frozen=True)
class StepResult:
    """Outcome of one step: the remainder graph, the relabelling, and which
    original vertex was consumed (``None`` for identity steps)."""

    graph: Graph
    label_map: LabelMap
    consumed: VertexId | None


def measure_z(g: Graph, a: VertexId) -> StepResult:
    """Z measurement: remove the target and every incident edge."""
    g.require_vertex(a)
    out, label_map = remove_vertex(g, a)
    return StepResult(out, label_map, a)


def measure_y(g: Graph, a: VertexId) -> StepResult:
    """Y measurement: local complementation at the target, then deletion."""
    g.require_vertex(a)
    out, label_map = remove_vertex(local_complement(g, a), a)
    return StepResult(out, label_map, a)


def default_special_neighbour(g: Graph, a: VertexId) -> VertexId | None:
    """The neighbour used when an X step does not name one; ``None`` if isolated."""
    nbrs = g.neighbours(a)
    return min(nbrs) if nbrs else None


def measure_x(g: Graph, a: VertexId, b: VertexId | None = None) -> StepResult:
    """X measurement at ``a`` with special neighbour ``b``.

    Applies local complementation at ``b``, at ``a``, then at ``b`` again, and
    deletes ``a``. With no neighbours the target is simply deleted, and
    supplying ``b`` is an error.
    """
    g.require_vertex(a)
    nbrs = g.neighbours(a)
    if not nbrs:
        if b is not None:
            raise InvalidSpecialNeighbourError(
                f"vertex {a} has no neighbours; special neighbour {b} is invalid"
            )
        out, label_map = remove_vertex(g, a)
        return StepResult(out, label_map, a)
    if b is None:
        b = min(nbrs)
    elif b not in nbrs:
        raise InvalidSpecialNeighbourError(
            f"vertex {b} is not a neighbour of vertex {a}"
        )
    h = local_complement(g, b)
    h = local_complement(h, a)
    h = local_complement(h, b)
    out, label_map = remove_vertex(h, a)
    return StepResult(out, label_map, a)


def apply_step(g: Graph, step: MeasurementStep) -> StepResult:
    """Dispatch one step; identity steps return the graph unchanged."""
    if step.op is PauliOp.I:
        g.require_vertex(step.target)
        return StepResult(g, LabelMap.identity(g.vertex_count), None)
    if step.op is PauliOp.Z:
        return measure_z(g, step.target)
    if step.op is PauliOp.Y:
        return measure_y(g, step.target)
    return measure_x(g, step.target, step.special_neighbour)


def asg_reduce(g: Graph, steps: Sequence[MeasurementStep]) -> tuple[Graph, tuple[StepResult, ...]]:
    """Fold a measurement sequence over ``g``; targets are read post-relabelling.

    Returns the remainder graph and the per-step results. The first failing
    step aborts with :class:`StepFailedError` carrying the step index and the
    graph as of the last successful step.
    """
    journal: list[StepResult] = []
    current = g
    for index, step in enumerate(steps):
        try:
            result = apply_step(current, step)
        except GraphStateError as exc:
            raise StepFailedError(
                f"step {index} ({step.op.value} {step.target}) failed: {exc}",
                index=index,
                cause=exc,
                graph=current,
            ) from exc
        journal.append(result)
        current = result.graph
    return current, tuple(journal)


def _edges_local_complement(edges: frozenset[tuple[int, int]],
                            adj: dict[int, set[int]],
                            v: int) -> frozenset[tuple[int, int]]:
    toggled = set(edges)
    for b, c in combinations(sorted(adj[v]), 2):
        key = (b, c)
        if key in toggled:
            toggled.remove(key)
        else:
            toggled.add(key)
    return frozenset(toggled)


def _adjacency(edges: Iterable[tuple[int, int]], n: int) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def graphs_lc_equivalent(
    g1: Graph,
    g2: Graph,
    max_vertices: int = DEFAULT_LC_VERTEX_CAP,
) -> tuple[bool, tuple[VertexId, ...] | None]:
    """Decide whether ``g2`` is reachable from ``g1`` by local complementations.

    Labels are fixed (no isomorphism search). Returns ``(True, witness)``
    where replaying the witness vertices left-to-right on ``g1`` reproduces
    ``g2``'s edge set exactly, or ``(False, None)``. Breadth-first search over
    the orbit with edge-set deduplication; differing vertex counts are simply
    inequivalent.
    """
    if g1.vertex_count != g2.vertex_count:
        return False, None
    n = g1.vertex_count
    if n > max_vertices:
        raise ResourceLimitError(
            f"local-equivalence search capped at {max_vertices} vertices, got {n}"
        )
    start = frozenset(g1.edges)
    target = frozenset(g2.edges)
    if start == target:
        return True, ()
    # parents[state] = (previous state, complemented vertex) for witness replay
    parents: dict[frozenset, tuple[frozenset, int] | None] = {start: None}
    queue: deque[frozenset] = deque([start])
    while queue:
        current = queue.popleft()
        adj = _adjacency(current, n)
        for v in range(1, n + 1):
            if len(adj[v]) < 2:
                continue  # complementing at degree <= 1 changes nothing
            nxt = _edges_local_complement(current, adj, v)
            if nxt in parents:
                continue
            parents[nxt] = (current, v)
            if nxt == target:
                witness: list[int] = []
                state: frozenset | None = nxt
                while parents[state] is not None:
                    state, vertex = parents[state]  # type: ignore[misc]
                    witness.append(vertex)
                witness.reverse()
                return True, tuple(witness)
            queue.append(nxt)
    return False, None
