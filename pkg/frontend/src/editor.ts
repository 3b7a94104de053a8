// Canvas graph editor. The server is the single authority on graph structure:
// every mutation goes through the session API and the canvas re-renders from
// the returned graph, with local selections re-bound through the label map.
//
// Keystroke tools: v add-vertex, e add-edge, o local complementation,
// z / y measurements, x the two-phase X measurement (click the target, then a
// highlighted special neighbour), d delete the current selection. Any
// keystroke clears pending multi-click state.

import { ApiError, SessionClient } from "./api";
import {
	edgeKey,
	neighbourhood,
	vertexEntry,
	type DocumentPayload,
	type EdgePair,
	type GraphPayload,
	type OpKind,
} from "./types";

export type EditorMode =
	| "select"
	| "add-vertex"
	| "add-edge"
	| "lc"
	| "z"
	| "y"
	| "x-phase-1"
	| "x-phase-2";

export type Selection =
	| { kind: "vertex"; label: number }
	| { kind: "edge"; a: number; b: number };

const KEY_TO_MODE: Record<string, EditorMode> = {
	v: "add-vertex",
	e: "add-edge",
	o: "lc",
	z: "z",
	y: "y",
	x: "x-phase-1",
};

export const VERTEX_RADIUS = 14;

interface QueuedOp {
	kind: OpKind;
	args: Record<string, unknown>;
	// which arg fields name vertices, so queued ops survive renumbering
	labelFields: string[];
}

export interface EditorElements {
	canvas?: HTMLCanvasElement;
	modeIndicator?: HTMLElement;
	revisionIndicator?: HTMLElement;
	toastRegion?: HTMLElement;
	sceneMirror?: HTMLElement; // accessible text mirror of the rendered scene
}

export class Editor {
	readonly client: SessionClient;
	graph: GraphPayload = { edges: [], vertices: [] };
	revision = 0;
	mode: EditorMode = "select";
	selection: Selection | null = null;
	pendingEdgeStart: number | null = null;
	xTarget: number | null = null;
	highlighted: Set<number> = new Set();
	toast: string | null = null;

	private readonly elements: EditorElements;
	private queue: QueuedOp[] = [];
	private inFlight = false;
	private drag: { label: number; x: number; y: number; moved: boolean } | null = null;

	constructor(client: SessionClient, elements: EditorElements = {}) {
		this.client = client;
		this.elements = elements;
	}

	static async connect(client: SessionClient, elements: EditorElements = {}): Promise<Editor> {
		const editor = new Editor(client, elements);
		const view = await client.graph();
		editor.graph = view.document.graph;
		editor.revision = view.revision;
		editor.render();
		return editor;
	}

	// -- keystrokes -----------------------------------------------------------

	handleKey(key: string): void {
		const normalized = key.toLowerCase();
		if (normalized === "d") {
			this.deleteSelection();
			return;
		}
		const mode = KEY_TO_MODE[normalized];
		if (mode === undefined) return; // unbound keys are ignored
		this.resetPending();
		this.mode = mode;
		this.render();
	}

	private resetPending(): void {
		this.pendingEdgeStart = null;
		this.xTarget = null;
		this.highlighted.clear();
	}

	private deleteSelection(): void {
		if (this.selection === null) return;
		if (this.selection.kind === "vertex") {
			this.enqueue("remove_vertex", { vertex: this.selection.label }, ["vertex"]);
		} else {
			this.enqueue(
				"remove_edge",
				{ a: this.selection.a, b: this.selection.b },
				["a", "b"],
			);
		}
		this.selection = null;
		this.render();
	}

	// -- clicks ---------------------------------------------------------------

	/** Hit-test a canvas point and route to the vertex, edge or background handler. */
	clickAt(x: number, y: number): void {
		const vertex = this.vertexAt(x, y);
		if (vertex !== null && this.mode !== "add-vertex") {
			this.clickVertex(vertex);
			return;
		}
		if (this.mode === "select") {
			const edge = this.edgeAt(x, y);
			if (edge !== null) {
				this.clickEdge(edge[0], edge[1]);
				return;
			}
		}
		this.clickCanvas(x, y);
	}

	clickCanvas(x: number, y: number): void {
		if (this.mode === "add-vertex") {
			this.enqueue("add_vertex", { position: [x, y] }, []);
			return;
		}
		if (this.mode === "select") {
			this.selection = null;
			this.render();
		}
	}

	clickVertex(label: number): void {
		switch (this.mode) {
			case "select":
				this.selection = { kind: "vertex", label };
				this.render();
				return;
			case "add-edge":
				if (this.pendingEdgeStart === null) {
					this.pendingEdgeStart = label;
					this.render();
				} else if (this.pendingEdgeStart !== label) {
					const [a, b] = edgeKey(this.pendingEdgeStart, label);
					this.pendingEdgeStart = null;
					this.enqueue("add_edge", { a, b }, ["a", "b"]);
				}
				return;
			case "lc":
				this.enqueue("lc", { vertex: label }, ["vertex"]);
				return;
			case "z":
			case "y":
				this.enqueue(this.mode, { target: label }, ["target"]);
				return;
			case "x-phase-1": {
				const nbrs = neighbourhood(this.graph, label);
				if (nbrs.size === 0) {
					// an isolated target needs no special neighbour
					this.enqueue("x", { target: label }, ["target"]);
					return;
				}
				this.xTarget = label;
				this.highlighted = nbrs;
				this.mode = "x-phase-2";
				this.render();
				return;
			}
			case "x-phase-2":
				if (!this.highlighted.has(label) || this.xTarget === null) {
					return; // only a highlighted neighbour completes the flow
				}
				this.enqueue(
					"x",
					{ target: this.xTarget, special_neighbour: label },
					["target", "special_neighbour"],
				);
				this.resetPending();
				this.mode = "x-phase-1";
				this.render();
				return;
			case "add-vertex":
				return;
		}
	}

	clickEdge(a: number, b: number): void {
		if (this.mode === "select") {
			const [lo, hi] = edgeKey(a, b);
			this.selection = { kind: "edge", a: lo, b: hi };
			this.render();
		}
	}

	// -- dragging (position updates are sent on drop only) ---------------------

	beginDrag(label: number, x: number, y: number): void {
		if (this.mode !== "select") return;
		this.drag = { label, x, y, moved: false };
	}

	moveDrag(x: number, y: number): void {
		if (this.drag === null) return;
		this.drag.x = x;
		this.drag.y = y;
		this.drag.moved = true;
		this.render();
	}

	endDrag(): void {
		if (this.drag === null) return;
		const { label, x, y, moved } = this.drag;
		this.drag = null;
		if (moved) {
			this.enqueue("move_vertex", { vertex: label, position: [x, y] }, ["vertex"]);
		} else {
			this.clickVertex(label);
		}
	}

	// -- documents --------------------------------------------------------------

	async saveDocument(): Promise<string> {
		return this.client.save();
	}

	async loadDocument(doc: DocumentPayload): Promise<void> {
		this.revision = await this.client.load(doc);
		const view = await this.client.graph();
		this.graph = view.document.graph;
		this.revision = view.revision;
		this.selection = null;
		this.resetPending();
		this.mode = "select";
		this.toast = null;
		this.render();
	}

	/** Resolves once every queued mutation has been answered by the server. */
	async idle(): Promise<void> {
		while (this.inFlight || this.queue.length > 0) {
			await new Promise((resolve) => setTimeout(resolve, 5));
		}
	}

	// -- mutation pipeline -------------------------------------------------------
	// One request in flight at a time; later clicks queue up and are re-bound
	// through each response's label map before they are sent.

	private enqueue(kind: OpKind, args: Record<string, unknown>, labelFields: string[]): void {
		this.queue.push({ kind, args: { ...args }, labelFields });
		void this.pump();
	}

	private async pump(): Promise<void> {
		if (this.inFlight) return;
		const next = this.queue.shift();
		if (next === undefined) return;
		this.inFlight = true;
		try {
			const response = await this.client.applyOp(next.kind, next.args, this.revision);
			this.graph = response.graph;
			this.revision = response.revision;
			this.rebind(response.label_map);
			this.toast = null;
		} catch (error) {
			if (error instanceof ApiError) {
				this.toast = `${error.rule}: ${error.message}`;
				if (error.rule === "revision-conflict") {
					// refresh and let the user retry from the authoritative state
					const view = await this.client.graph();
					this.graph = view.document.graph;
					this.revision = view.revision;
				}
			} else {
				this.toast = `network: ${String(error)}`;
			}
		} finally {
			this.inFlight = false;
			this.render();
			if (this.queue.length > 0) void this.pump();
		}
	}

	/** Re-bind every local vertex reference through a response's label map. */
	private rebind(labelMap: EdgePair[]): void {
		const mapping = new Map(labelMap.map(([oldLabel, newLabel]) => [oldLabel, newLabel]));
		const remap = (label: number | null): number | null =>
			label === null ? null : mapping.get(label) ?? null;

		if (this.selection?.kind === "vertex") {
			const label = remap(this.selection.label);
			this.selection = label === null ? null : { kind: "vertex", label };
		} else if (this.selection?.kind === "edge") {
			const a = remap(this.selection.a);
			const b = remap(this.selection.b);
			this.selection = a === null || b === null
				? null
				: { kind: "edge", ...{ a: Math.min(a, b), b: Math.max(a, b) } };
		}
		this.pendingEdgeStart = remap(this.pendingEdgeStart);
		this.xTarget = remap(this.xTarget);
		if (this.xTarget === null && this.mode === "x-phase-2") {
			this.mode = "x-phase-1";
			this.highlighted.clear();
		} else {
			this.highlighted = new Set(
				[...this.highlighted]
					.map((label) => remap(label))
					.filter((label): label is number => label !== null),
			);
		}

		this.queue = this.queue.filter((op) => {
			for (const field of op.labelFields) {
				const value = op.args[field];
				if (typeof value !== "number") continue;
				const mapped = mapping.get(value);
				if (mapped === undefined) return false; // its vertex was consumed
				op.args[field] = mapped;
			}
			return true;
		});
	}

	// -- geometry ----------------------------------------------------------------

	private position(label: number): [number, number] {
		if (this.drag !== null && this.drag.label === label && this.drag.moved) {
			return [this.drag.x, this.drag.y];
		}
		const entry = vertexEntry(this.graph, label);
		return entry === undefined ? [0, 0] : entry.position;
	}

	vertexAt(x: number, y: number): number | null {
		for (const vertex of [...this.graph.vertices].reverse()) {
			const [vx, vy] = this.position(vertex.label);
			if ((vx - x) ** 2 + (vy - y) ** 2 <= VERTEX_RADIUS ** 2) {
				return vertex.label;
			}
		}
		return null;
	}

	edgeAt(x: number, y: number, threshold = 6): EdgePair | null {
		for (const [a, b] of this.graph.edges) {
			const [ax, ay] = this.position(a);
			const [bx, by] = this.position(b);
			const lengthSq = (bx - ax) ** 2 + (by - ay) ** 2;
			if (lengthSq === 0) continue;
			let t = ((x - ax) * (bx - ax) + (y - ay) * (by - ay)) / lengthSq;
			t = Math.max(0, Math.min(1, t));
			const dx = x - (ax + t * (bx - ax));
			const dy = y - (ay + t * (by - ay));
			if (dx * dx + dy * dy <= threshold * threshold) return [a, b];
		}
		return null;
	}

	// -- rendering ----------------------------------------------------------------

	render(): void {
		this.renderCanvas();
		this.renderIndicators();
	}

	private renderIndicators(): void {
		const { modeIndicator, revisionIndicator, toastRegion, sceneMirror } = this.elements;
		if (modeIndicator) modeIndicator.textContent = this.mode;
		if (revisionIndicator) revisionIndicator.textContent = `revision ${this.revision}`;
		if (toastRegion) toastRegion.textContent = this.toast ?? "";
		if (sceneMirror) {
			// textual mirror of the scene, also used by assistive tech
			const vertices = this.graph.vertices
				.map((v) => {
					const marks = [
						this.highlighted.has(v.label) ? "highlighted" : "",
						this.selection?.kind === "vertex" && this.selection.label === v.label
							? "selected"
							: "",
						v.is_input ? "input" : "",
					].filter(Boolean);
					return `vertex ${v.label}${marks.length ? ` (${marks.join(", ")})` : ""}`;
				})
				.join("; ");
			const edges = this.graph.edges.map(([a, b]) => `${a}-${b}`).join("; ");
			sceneMirror.textContent = `${vertices} | edges: ${edges}`;
		}
	}

	private renderCanvas(): void {
		const canvas = this.elements.canvas;
		if (!canvas) return;
		const ctx = canvas.getContext("2d");
		if (!ctx) return; // headless DOM: state is mirrored textually instead
		ctx.clearRect(0, 0, canvas.width, canvas.height);

		ctx.strokeStyle = "#444";
		ctx.lineWidth = 1.5;
		for (const [a, b] of this.graph.edges) {
			const [ax, ay] = this.position(a);
			const [bx, by] = this.position(b);
			const selected =
				this.selection?.kind === "edge" &&
				this.selection.a === Math.min(a, b) &&
				this.selection.b === Math.max(a, b);
			ctx.strokeStyle = selected ? "#c0392b" : "#444";
			ctx.beginPath();
			ctx.moveTo(ax, ay);
			ctx.lineTo(bx, by);
			ctx.stroke();
		}

		for (const vertex of this.graph.vertices) {
			const [x, y] = this.position(vertex.label);
			const highlighted = this.highlighted.has(vertex.label);
			const selected =
				this.selection?.kind === "vertex" && this.selection.label === vertex.label;
			const pendingStart =
				this.pendingEdgeStart === vertex.label || this.xTarget === vertex.label;
			ctx.beginPath();
			ctx.arc(x, y, VERTEX_RADIUS, 0, 2 * Math.PI);
			ctx.fillStyle = highlighted ? "#f9e79f" : vertex.is_input ? "#d6eaf8" : "#fff";
			ctx.fill();
			ctx.strokeStyle = selected || pendingStart ? "#c0392b" : "#222";
			ctx.lineWidth = selected || pendingStart ? 2.5 : 1.5;
			ctx.stroke();
			ctx.fillStyle = "#111";
			ctx.font = "12px sans-serif";
			ctx.textAlign = "center";
			ctx.textBaseline = "middle";
			ctx.fillText(String(vertex.label), x, y);
		}
	}
}
