// Wire types for the graph-state session service.

export type EdgePair = [number, number];

export interface VertexEntry {
	is_input: boolean;
	label: number;
	position: [number, number];
}

export interface GraphPayload {
	edges: EdgePair[];
	vertices: VertexEntry[];
}

export interface JournalRecord {
	seq: number;
	op: string;
	args: Record<string, unknown>;
	label_map: EdgePair[];
	consumed: number | null;
}

export interface DocumentPayload {
	format_version: number;
	graph: GraphPayload;
	initial?: GraphPayload;
	journal: JournalRecord[];
	metadata: Record<string, string>;
}

export type OpKind =
	| "add_vertex"
	| "remove_vertex"
	| "move_vertex"
	| "add_edge"
	| "remove_edge"
	| "lc"
	| "z"
	| "y"
	| "x";

export interface OpResponse {
	graph: GraphPayload;
	label_map: EdgePair[];
	revision: number;
}

export interface GraphView {
	document: DocumentPayload;
	revision: number;
}

export function edgeKey(a: number, b: number): EdgePair {
	return a < b ? [a, b] : [b, a];
}

export function hasEdge(graph: GraphPayload, a: number, b: number): boolean {
	const [lo, hi] = edgeKey(a, b);
	return graph.edges.some(([x, y]) => x === lo && y === hi);
}

export function neighbourhood(graph: GraphPayload, label: number): Set<number> {
	const out = new Set<number>();
	for (const [a, b] of graph.edges) {
		if (a === label) out.add(b);
		if (b === label) out.add(a);
	}
	return out;
}

export function vertexEntry(graph: GraphPayload, label: number): VertexEntry | undefined {
	return graph.vertices.find((v) => v.label === label);
}
