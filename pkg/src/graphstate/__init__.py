"""Graph-state modelling workbench.

Create and transform labelled simple graphs under the single-qubit
measurement calculus (local complementation; Z/Y/X rewrites), verify every
rule against a dense-statevector oracle at small qubit counts, and persist
graphs as canonical JSON documents with a replayable operation journal.
"""
from .errors import (
    DocumentParseError,
    DuplicateEdgeError,
    EdgeNotFoundError,
    GraphStateError,
    ImpossibleOutcomeError,
    InvalidSpecialNeighbourError,
    JournalIntegrityError,
    LoopEdgeError,
    ResourceLimitError,
    RevisionConflictError,
    ScriptParseError,
    ScriptRunError,
    StepFailedError,
    UnknownSessionError,
    ValidationError,
    VertexNotFoundError,
)
from .graph import (
    Graph,
    LabelMap,
    VertexAttrs,
    VertexId,
    add_edge,
    add_vertex,
    complement,
    local_complement,
    neighbourhood,
    remove_edge,
    remove_vertex,
)
from .oracle import (
    CLIFFORD_1Q,
    LocalCliffordOp,
    PauliString,
    StateVector,
    apply_pauli_string,
    build_graph_state,
    correlation_operator,
    lc_unitary_check,
    pauli_outcome_probabilities,
    project_pauli,
    reorder_qubits,
    states_equal_up_to_phase,
    states_lc_equivalent,
    verify_all_rules,
    verify_measurement_rule,
    verify_stabilizers,
)
from .persistence import (
    GraphDocument,
    Journal,
    OpRecord,
    Script,
    ScriptCommand,
    apply_op,
    deserialize,
    document_from_jsonable,
    document_to_jsonable,
    export_dot,
    parse_script,
    record_op,
    render_script,
    replay,
    run_script,
    serialize,
)
from .transforms import (
    MeasurementStep,
    PauliOp,
    StepResult,
    apply_step,
    asg_reduce,
    default_special_neighbour,
    graphs_lc_equivalent,
    measure_x,
    measure_y,
    measure_z,
)

__version__ = "0.1.0"

__all__ = [
    "CLIFFORD_1Q",
    "DocumentParseError",
    "DuplicateEdgeError",
    "EdgeNotFoundError",
    "Graph",
    "GraphDocument",
    "GraphStateError",
    "ImpossibleOutcomeError",
    "InvalidSpecialNeighbourError",
    "Journal",
    "JournalIntegrityError",
    "LabelMap",
    "LocalCliffordOp",
    "LoopEdgeError",
    "MeasurementStep",
    "OpRecord",
    "PauliOp",
    "PauliString",
    "ResourceLimitError",
    "RevisionConflictError",
    "Script",
    "ScriptCommand",
    "ScriptParseError",
    "ScriptRunError",
    "StateVector",
    "StepFailedError",
    "StepResult",
    "UnknownSessionError",
    "ValidationError",
    "VertexAttrs",
    "VertexId",
    "VertexNotFoundError",
    "add_edge",
    "add_vertex",
    "apply_op",
    "apply_pauli_string",
    "apply_step",
    "asg_reduce",
    "build_graph_state",
    "complement",
    "correlation_operator",
    "default_special_neighbour",
    "deserialize",
    "document_from_jsonable",
    "document_to_jsonable",
    "export_dot",
    "graphs_lc_equivalent",
    "lc_unitary_check",
    "local_complement",
    "measure_x",
    "measure_y",
    "measure_z",
    "neighbourhood",
    "parse_script",
    "pauli_outcome_probabilities",
    "project_pauli",
    "record_op",
    "remove_edge",
    "remove_vertex",
    "render_script",
    "reorder_qubits",
    "replay",
    "run_script",
    "serialize",
    "states_equal_up_to_phase",
    "states_lc_equivalent",
    "verify_all_rules",
    "verify_measurement_rule",
    "verify_stabilizers",
]
