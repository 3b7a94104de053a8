"""Exhaustive quantum-semantics verifier for the graph rewrite rules.

Everything here works on dense statevectors so that it shares no machinery
with the graph engine it checks. Conventions, fixed for bit-exact tests:

* Vertex label ``k`` is qubit ``k - 1``; label 1 is the most significant bit
  of the amplitude index (row-major reshape to ``[2] * n``).
* A graph's state is ``prod_CZ |+...+>``: every qubit in ``|+>``, one CZ per
  edge.
* All complex comparisons use tolerance 1e-9; global phase is factored out by
  aligning the largest-magnitude amplitude.

The headline check, :func:`verify_measurement_rule`, projects the graph state
onto the +1 outcome of a single-qubit Pauli measurement and asks whether the
remainder equals the rewritten graph's state up to a tensor product of
single-qubit Cliffords — searched exhaustively over the 24-element
single-qubit Clifford group per qubit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ImpossibleOutcomeError,
    ResourceLimitError,
    ValidationError,
    VertexNotFoundError,
)
from .graph import Graph, LabelMap, VertexId, local_complement
from .transforms import MeasurementStep, PauliOp, apply_step

DEFAULT_QUBIT_CAP = 12
DEFAULT_LC_SEARCH_CAP = 5
TOLERANCE = 1e-9

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# sqrt(-iX) and sqrt(iZ): the single-qubit unitaries whose product realises a
# local complementation on the state (target gets the X half, each neighbour
# the Z half).
_SQRT_MINUS_IX = (np.eye(2) - 1j * _PAULI["X"]) / math.sqrt(2)
_SQRT_PLUS_IZ = (np.eye(2) + 1j * _PAULI["Z"]) / math.sqrt(2)

_EIGENVECTORS = {
    ("X", +1): np.array([1, 1], dtype=complex) / math.sqrt(2),
    ("X", -1): np.array([1, -1], dtype=complex) / math.sqrt(2),
    ("Y", +1): np.array([1, 1j], dtype=complex) / math.sqrt(2),
    ("Y", -1): np.array([1, -1j], dtype=complex) / math.sqrt(2),
    ("Z", +1): np.array([1, 0], dtype=complex),
    ("Z", -1): np.array([0, 1], dtype=complex),
}


class StateVector:
    """Dense complex amplitudes over the 2^n computational basis states."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: Iterable[complex]):
        amps = np.array(list(amplitudes) if not isinstance(amplitudes, np.ndarray)
                        else amplitudes, dtype=complex).reshape(-1)
        if n_qubits < 0 or amps.shape != (2 ** n_qubits,):
            raise ValidationError(
                f"expected 2^{n_qubits} amplitudes, got {amps.shape[0]}"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > TOLERANCE:
            raise ValidationError(
                f"amplitudes are not normalized: sum of squares {norm_sq!r}",
                rule="normalization",
            )
        amps = amps.copy()
        amps.setflags(write=False)
        self.n_qubits = n_qubits
        self.amplitudes = amps

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.n_qubits == other.n_qubits and np.array_equal(
            self.amplitudes, other.amplitudes
        )

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


@dataclass(frozen=True)
class PauliString:
    """A phased Pauli operator: one letter per qubit plus a global phase."""

    letters: tuple[str, ...]
    phase: complex = 1 + 0j

    def __post_init__(self) -> None:
        letters = tuple(str(p).upper() for p in self.letters)
        if any(p not in _PAULI for p in letters):
            raise ValidationError(f"invalid Pauli letters {self.letters!r}")
        if self.phase not in (1, -1, 1j, -1j):
            raise ValidationError(f"invalid Pauli phase {self.phase!r}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "phase", complex(self.phase))

    def __str__(self) -> str:
        sign = {1 + 0j: "+", -1 + 0j: "-", 1j: "+i", -1j: "-i"}[self.phase]
        return sign + "".join(self.letters)


def _bit_position(n_qubits: int, qubit: int) -> int:
    # qubit 0 is the most significant bit of the amplitude index
    return n_qubits - 1 - qubit


def apply_pauli_string(ps: PauliString, sv: StateVector) -> StateVector:
    """Apply a phased Pauli string; implemented with index arithmetic only."""
    n = sv.n_qubits
    if len(ps.letters) != n:
        raise ValidationError(
            f"Pauli string length {len(ps.letters)} does not match {n} qubits"
        )
    if n == 0:
        return StateVector(0, ps.phase * sv.amplitudes)
    idx = np.arange(2 ** n)
    flip = 0
    parity = np.zeros(2 ** n, dtype=np.int64)
    phase = complex(ps.phase)
    for qubit, letter in enumerate(ps.letters):
        pos = _bit_position(n, qubit)
        if letter in ("X", "Y"):
            flip |= 1 << pos
        if letter in ("Z", "Y"):
            parity ^= (idx >> pos) & 1
        if letter == "Y":
            phase *= 1j
    signs = 1.0 - 2.0 * parity
    return StateVector(n, phase * (signs * sv.amplitudes)[idx ^ flip])


def _apply_single_qubit(amps: np.ndarray, n: int, qubit: int,
                        matrix: np.ndarray) -> np.ndarray:
    shaped = amps.reshape((2,) * n)
    shaped = np.tensordot(matrix, shaped, axes=([1], [qubit]))
    return np.moveaxis(shaped, 0, qubit).reshape(-1)


def build_graph_state(g: Graph, max_qubits: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """The state of ``g``: all qubits in ``|+>`` then one CZ per edge."""
    n = g.vertex_count
    if n > max_qubits:
        raise ResourceLimitError(
            f"statevector construction capped at {max_qubits} qubits, got {n}"
        )
    if n == 0:
        return StateVector(0, [1.0])
    idx = np.arange(2 ** n)
    parity = np.zeros(2 ** n, dtype=np.int64)
    for a, b in g.edges:
        bits_a = (idx >> _bit_position(n, a - 1)) & 1
        bits_b = (idx >> _bit_position(n, b - 1)) & 1
        parity ^= bits_a & bits_b
    amps = (2.0 ** (-n / 2)) * (1.0 - 2.0 * parity)
    return StateVector(n, amps.astype(complex))


def correlation_operator(g: Graph, j: VertexId) -> PauliString:
    """The stabilizer generator attached to vertex ``j``: X there, Z on its
    neighbours, identity elsewhere."""
    g.require_vertex(j)
    nbrs = g.neighbours(j)
    letters = tuple(
        "X" if v == j else ("Z" if v in nbrs else "I") for v in g.vertex_ids
    )
    return PauliString(letters)


def states_equal_up_to_phase(a: StateVector, b: StateVector,
                             tolerance: float = TOLERANCE) -> bool:
    """Elementwise equality after aligning on the largest-magnitude amplitude."""
    if a.n_qubits != b.n_qubits:
        return False
    ref = int(np.argmax(np.abs(b.amplitudes)))
    if abs(a.amplitudes[ref]) <= tolerance:
        return False
    phase = b.amplitudes[ref] / a.amplitudes[ref]
    if abs(abs(phase) - 1.0) > tolerance:
        return False
    return bool(np.max(np.abs(a.amplitudes * phase - b.amplitudes)) <= tolerance)


def verify_stabilizers(g: Graph, max_qubits: int = DEFAULT_QUBIT_CAP) -> bool:
    """True iff every correlation operator fixes the graph state exactly."""
    sv = build_graph_state(g, max_qubits=max_qubits)
    for j in g.vertex_ids:
        fixed = apply_pauli_string(correlation_operator(g, j), sv)
        if np.max(np.abs(fixed.amplitudes - sv.amplitudes)) > TOLERANCE:
            return False
    return True


def lc_unitary_check(g: Graph, a: VertexId,
                     max_qubits: int = DEFAULT_QUBIT_CAP) -> bool:
    """Check the graph-level local complementation against its unitary.

    Applies sqrt(-iX) on ``a`` and sqrt(iZ) on each neighbour to ``|g>`` and
    compares with the state of the complemented graph, up to global phase.
    """
    g.require_vertex(a)
    sv = build_graph_state(g, max_qubits=max_qubits)
    amps = np.array(sv.amplitudes)
    n = sv.n_qubits
    amps = _apply_single_qubit(amps, n, a - 1, _SQRT_MINUS_IX)
    for b in g.neighbours(a):
        amps = _apply_single_qubit(amps, n, b - 1, _SQRT_PLUS_IZ)
    rotated = StateVector(n, amps)
    expected = build_graph_state(local_complement(g, a), max_qubits=max_qubits)
    return states_equal_up_to_phase(rotated, expected)


def pauli_outcome_probabilities(sv: StateVector, qubit: int,
                                op: PauliOp | str) -> tuple[float, float]:
    """Probabilities of the +1 and -1 outcomes of a single-qubit measurement."""
    op = PauliOp(op)
    if op is PauliOp.I:
        raise ValidationError("identity is not a measurement basis")
    if not 0 <= qubit < sv.n_qubits:
        raise VertexNotFoundError(f"qubit {qubit} not in 0..{sv.n_qubits - 1}")
    shaped = sv.amplitudes.reshape((2,) * sv.n_qubits)
    probs = []
    for outcome in (+1, -1):
        eig = _EIGENVECTORS[(op.value, outcome)]
        rest = np.tensordot(eig.conj(), shaped, axes=([0], [qubit]))
        probs.append(float(np.vdot(rest, rest).real))
    return probs[0], probs[1]


def project_pauli(sv: StateVector, qubit: int, op: PauliOp | str,
                  outcome: int) -> StateVector:
    """Project one qubit onto a Pauli eigenstate and factor it out.

    Returns the renormalized remainder on ``n - 1`` qubits; a zero-probability
    branch raises :class:`ImpossibleOutcomeError`.
    """
    op = PauliOp(op)
    if op is PauliOp.I:
        raise ValidationError("identity is not a measurement basis")
    if outcome not in (+1, -1):
        raise ValidationError(f"outcome must be +1 or -1, got {outcome!r}")
    if not 0 <= qubit < sv.n_qubits:
        raise VertexNotFoundError(f"qubit {qubit} not in 0..{sv.n_qubits - 1}")
    eig = _EIGENVECTORS[(op.value, outcome)]
    shaped = sv.amplitudes.reshape((2,) * sv.n_qubits)
    rest = np.tensordot(eig.conj(), shaped, axes=([0], [qubit])).reshape(-1)
    prob = float(np.vdot(rest, rest).real)
    if prob <= TOLERANCE:
        raise ImpossibleOutcomeError(
            f"outcome {outcome:+d} of {op.value} on qubit {qubit} has probability 0"
        )
    return StateVector(sv.n_qubits - 1, rest / math.sqrt(prob))


def reorder_qubits(sv: StateVector,
                   mapping: LabelMap | Iterable[tuple[int, int]]) -> StateVector:
    """Permute qubits: pair ``(old, new)`` moves qubit ``old-1`` to ``new-1``.

    The pairs must form a bijection on ``1..n``.
    """
    pairs = mapping.pairs if isinstance(mapping, LabelMap) else tuple(mapping)
    n = sv.n_qubits
    if sorted(o for o, _ in pairs) != list(range(1, n + 1)) or \
            sorted(v for _, v in pairs) != list(range(1, n + 1)):
        raise ValidationError(f"pairs must be a bijection on 1..{n}, got {pairs!r}")
    if n == 0:
        return StateVector(0, sv.amplitudes)
    axes = [0] * n
    for old, new in pairs:
        axes[new - 1] = old - 1
    shaped = sv.amplitudes.reshape((2,) * n).transpose(axes)
    return StateVector(n, shaped.reshape(-1))


# -- single-qubit Clifford group ----------------------------------------------


# Entries of a phase-canonicalized single-qubit Clifford always have magnitude
# in {0, 1/sqrt(2), 1} and phase a multiple of pi/4, so each entry can be
# snapped onto that grid: products of snapped matrices then never accumulate
# rounding drift across the group closure.
_EIGHTH_ROOTS = tuple(
    complex(x, y) for x, y in (
        (1, 0), (1 / math.sqrt(2), 1 / math.sqrt(2)), (0, 1),
        (-1 / math.sqrt(2), 1 / math.sqrt(2)), (-1, 0),
        (-1 / math.sqrt(2), -1 / math.sqrt(2)), (0, -1),
        (1 / math.sqrt(2), -1 / math.sqrt(2)),
    )
)
_MAGNITUDES = (0.0, 1 / math.sqrt(2), 1.0)


def _snap_clifford(m: np.ndarray) -> np.ndarray:
    out = np.zeros((2, 2), dtype=complex)
    for (i, j), value in np.ndenumerate(m):
        magnitude = min(_MAGNITUDES, key=lambda r: abs(r - abs(value)))
        if magnitude == 0.0:
            continue
        k = round(math.atan2(value.imag, value.real) / (math.pi / 4)) % 8
        out[i, j] = magnitude * _EIGHTH_ROOTS[k]
    return out


def _canonical_phase(m: np.ndarray) -> np.ndarray:
    flat = m.reshape(-1)
    pivot = int(np.flatnonzero(np.abs(flat) > 0.5)[0])
    z = flat[pivot]
    return _snap_clifford(m * (abs(z) / z))


def _build_single_qubit_cliffords() -> np.ndarray:
    hadamard = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    phase_gate = np.array([[1, 0], [0, 1j]], dtype=complex)
    elements: list[np.ndarray] = []
    seen: set[bytes] = set()
    queue = [_canonical_phase(np.eye(2, dtype=complex))]
    while queue:
        m = queue.pop(0)
        key = m.tobytes()  # snapped entries are bit-stable
        if key in seen:
            continue
        seen.add(key)
        elements.append(m)
        for gen in (hadamard, phase_gate):
            queue.append(_canonical_phase(gen @ m))
    if len(elements) != 24:
        raise AssertionError(f"expected 24 single-qubit Cliffords, got {len(elements)}")
    return np.stack(elements)


#: Canonical single-qubit Clifford group, identity first; witness indices refer
#: to positions in this array.
CLIFFORD_1Q: np.ndarray = _build_single_qubit_cliffords()
CLIFFORD_1Q.setflags(write=False)


@dataclass(frozen=True)
class LocalCliffordOp:
    """A tensor product of single-qubit Cliffords, one index per qubit."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        indices = tuple(int(i) for i in self.indices)
        if any(not 0 <= i < 24 for i in indices):
            raise ValidationError(f"Clifford indices must be in 0..23, got {indices}")
        object.__setattr__(self, "indices", indices)

    def is_identity(self) -> bool:
        return all(i == 0 for i in self.indices)

    def apply(self, sv: StateVector) -> StateVector:
        if len(self.indices) != sv.n_qubits:
            raise ValidationError(
                f"operator acts on {len(self.indices)} qubits, state has {sv.n_qubits}"
            )
        amps = np.array(sv.amplitudes)
        for qubit, index in enumerate(self.indices):
            amps = _apply_single_qubit(amps, sv.n_qubits, qubit, CLIFFORD_1Q[index])
        return StateVector(sv.n_qubits, amps)


def states_lc_equivalent(
    sv1: StateVector,
    sv2: StateVector,
    max_qubits: int = DEFAULT_LC_SEARCH_CAP,
) -> tuple[bool, LocalCliffordOp | None]:
    """Search for a tensor product of single-qubit Cliffords mapping ``sv1``
    to ``sv2`` up to global phase.

    The search assigns qubits one at a time and keeps only prefixes whose
    transformed reduced state (Gram matrix of the assigned qubits) matches the
    target's exactly — a branch survives iff it can still be completed by
    *some* unitary on the remaining qubits, so no witness is ever missed. The
    final level compares full states, which for normalized vectors reduces to
    unit overlap magnitude.
    """
    if sv1.n_qubits != sv2.n_qubits:
        return False, None
    n = sv1.n_qubits
    if n > max_qubits:
        raise ResourceLimitError(
            f"Clifford-equivalence search capped at {max_qubits} qubits, got {n}"
        )
    if n == 0:
        return True, LocalCliffordOp(())

    dim = 2 ** n
    target = sv2.amplitudes
    states = sv1.amplitudes.reshape(1, dim)
    prefixes: list[tuple[int, ...]] = [()]

    for k in range(n):
        count = states.shape[0]
        shaped = states.reshape((count,) + (2,) * n)
        moved = np.moveaxis(shaped, 1 + k, n)  # qubit k to the last axis
        out = np.einsum("uab,s...b->us...a", CLIFFORD_1Q, moved)
        out = np.moveaxis(out, out.ndim - 1, 2 + k)
        candidates = out.reshape(24 * count, dim)

        if k < n - 1:
            rows = 2 ** (k + 1)
            m = candidates.reshape(-1, rows, dim // rows)
            gram = m @ np.conjugate(np.transpose(m, (0, 2, 1)))
            t = target.reshape(rows, dim // rows)
            target_gram = t @ t.conj().T
            keep = np.abs(gram - target_gram).max(axis=(1, 2)) <= TOLERANCE
        else:
            overlap = candidates @ np.conjugate(target)
            keep = np.abs(np.abs(overlap) - 1.0) <= TOLERANCE

        kept = np.flatnonzero(keep)
        if kept.size == 0:
            return False, None
        # candidate row u * count + s is Clifford u applied to survivor s
        new_prefixes = [prefixes[i % count] + (i // count,) for i in kept]
        if k == n - 1:
            return True, LocalCliffordOp(new_prefixes[0])
        states = candidates[kept]
        prefixes = new_prefixes

    raise AssertionError("unreachable")


def verify_measurement_rule(g: Graph, step: MeasurementStep,
                            max_vertices: int = DEFAULT_LC_SEARCH_CAP) -> bool:
    """The rule-versus-physics check for one measurement.

    Projects ``|g>`` onto the +1 outcome of the step's measurement and asks
    whether the remainder is locally Clifford equivalent to the state of the
    graph the rewrite engine produces, with qubits aligned through the step's
    label map.
    """
    if step.op is PauliOp.I:
        raise ValidationError("identity steps have no measurement to verify")
    n = g.vertex_count
    if n > max_vertices:
        raise ResourceLimitError(
            f"measurement-rule verification capped at {max_vertices} vertices, got {n}"
        )
    result = apply_step(g, step)
    sv = build_graph_state(g)
    remainder = project_pauli(sv, step.target - 1, step.op, +1)
    # remainder qubit i is the i-th smallest surviving original label; send it
    # to its new label's position (the identity for order-preserving maps)
    reordering = tuple(
        (i + 1, new) for i, (_, new) in enumerate(result.label_map.pairs)
    )
    remainder = reorder_qubits(remainder, reordering)
    expected = build_graph_state(result.graph)
    equivalent, _ = states_lc_equivalent(remainder, expected,
                                         max_qubits=max(n - 1, 1))
    return equivalent


def verify_all_rules(g: Graph,
                     max_vertices: int = DEFAULT_LC_SEARCH_CAP) -> bool:
    """Run :func:`verify_measurement_rule` for every target, basis and
    special-neighbour choice on ``g``."""
    for a in g.vertex_ids:
        steps = [MeasurementStep(PauliOp.Z, a), MeasurementStep(PauliOp.Y, a)]
        nbrs = sorted(g.neighbours(a))
        if nbrs:
            steps.extend(MeasurementStep(PauliOp.X, a, b) for b in nbrs)
        else:
            steps.append(MeasurementStep(PauliOp.X, a))
        for step in steps:
            if not verify_measurement_rule(g, step, max_vertices=max_vertices):
                return False
    return True
