// Editor flows against the real service: keystroke tools, two-click edges,
// the two-phase X measurement, renumbering, and save/load.

import { describe, expect, it } from "vitest";
import { labels, makeDocument, makeEditor, path3Document } from "./helpers";

describe("keystroke mode transitions", () => {
	it("arms each tool from its key", async () => {
		const { editor, elements } = await makeEditor();
		const table: Array<[string, string]> = [
			["v", "add-vertex"],
			["e", "add-edge"],
			["o", "lc"],
			["z", "z"],
			["y", "y"],
			["x", "x-phase-1"],
		];
		for (const [key, mode] of table) {
			editor.handleKey(key);
			expect(editor.mode).toBe(mode);
			expect(elements.modeIndicator.textContent).toBe(mode);
		}
	});

	it("ignores unbound keys", async () => {
		const { editor } = await makeEditor();
		editor.handleKey("z");
		editor.handleKey("q");
		expect(editor.mode).toBe("z");
	});

	it("accepts uppercase keys", async () => {
		const { editor } = await makeEditor();
		editor.handleKey("V");
		expect(editor.mode).toBe("add-vertex");
	});

	it("any keystroke resets pending multi-click state", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.handleKey("e");
		editor.clickVertex(1);
		expect(editor.pendingEdgeStart).toBe(1);
		editor.handleKey("e");
		expect(editor.pendingEdgeStart).toBeNull();

		editor.handleKey("x");
		editor.clickVertex(2);
		expect(editor.mode).toBe("x-phase-2");
		editor.handleKey("z");
		expect(editor.mode).toBe("z");
		expect(editor.xTarget).toBeNull();
		expect(editor.highlighted.size).toBe(0);
	});
});

describe("vertex and edge creation", () => {
	it("adds a vertex at the clicked position", async () => {
		const { editor } = await makeEditor();
		editor.handleKey("v");
		editor.clickCanvas(150, 250);
		await editor.idle();
		expect(editor.graph.vertices).toEqual([
			{ is_input: false, label: 1, position: [150, 250] },
		]);
		expect(editor.revision).toBe(1);
	});

	it("creates an edge with two clicks", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.handleKey("e");
		editor.clickVertex(1);
		expect(editor.pendingEdgeStart).toBe(1);
		editor.clickVertex(3);
		await editor.idle();
		expect(editor.graph.edges).toContainEqual([1, 3]);
		expect(editor.pendingEdgeStart).toBeNull();
		expect(editor.revision).toBe(1);
	});

	it("clicking the pending vertex again does not self-loop", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.handleKey("e");
		editor.clickVertex(1);
		editor.clickVertex(1);
		await editor.idle();
		expect(editor.pendingEdgeStart).toBe(1);
		expect(editor.revision).toBe(0);
	});

	it("surfaces a duplicate edge as a toast, not a crash", async () => {
		const { editor, elements } = await makeEditor(path3Document());
		editor.handleKey("e");
		editor.clickVertex(1);
		editor.clickVertex(2);
		await editor.idle();
		expect(editor.toast).toContain("duplicate-edge");
		expect(elements.toastRegion.textContent).toContain("duplicate-edge");
		expect(editor.revision).toBe(0);
	});
});

describe("two-phase X measurement", () => {
	it("highlights the neighbourhood and gates on it", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.handleKey("x");
		editor.clickVertex(2);
		expect(editor.mode).toBe("x-phase-2");
		expect(editor.xTarget).toBe(2);
		expect([...editor.highlighted].sort()).toEqual([1, 3]);
		expect(editor.revision).toBe(0); // nothing submitted yet

		editor.clickVertex(2); // the target itself is not highlighted
		await editor.idle();
		expect(editor.mode).toBe("x-phase-2");
		expect(editor.revision).toBe(0);

		editor.clickVertex(1); // a highlighted special neighbour completes it
		await editor.idle();
		expect(editor.revision).toBe(1);
		expect(editor.mode).toBe("x-phase-1");
		expect(editor.highlighted.size).toBe(0);
		expect(labels(editor)).toEqual([1, 2]);
		expect(editor.graph.edges).toEqual([[1, 2]]);
	});

	it("submits an isolated target immediately", async () => {
		const { editor } = await makeEditor(
			makeDocument([[1, [50, 50]], [2, [150, 50]]], []),
		);
		editor.handleKey("x");
		editor.clickVertex(1);
		await editor.idle();
		expect(editor.mode).toBe("x-phase-1");
		expect(editor.revision).toBe(1);
		expect(labels(editor)).toEqual([1]);
	});

	it("records the chosen special neighbour in the journal", async () => {
		const { editor, client } = await makeEditor(path3Document());
		editor.handleKey("x");
		editor.clickVertex(2);
		editor.clickVertex(3);
		await editor.idle();
		const journal = await client.journal();
		expect(journal[0].op).toBe("x");
		expect(journal[0].args).toEqual({ special_neighbour: 3, target: 2 });
	});
});

describe("renumbering after deletions", () => {
	it("re-renders labels 1..n after a z measurement", async () => {
		const { editor, elements } = await makeEditor(path3Document());
		editor.handleKey("z");
		editor.clickVertex(2);
		await editor.idle();
		expect(labels(editor)).toEqual([1, 2]);
		expect(editor.graph.edges).toEqual([]);
		// old vertex 3 kept its position under its new label
		expect(editor.graph.vertices[1].position).toEqual([300, 100]);
		expect(elements.sceneMirror.textContent).toContain("vertex 2");
		expect(elements.sceneMirror.textContent).not.toContain("vertex 3");
	});

	it("re-binds the selection through the label map", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.clickVertex(3); // select mode by default
		expect(editor.selection).toEqual({ kind: "vertex", label: 3 });
		editor.handleKey("z");
		editor.clickVertex(2);
		await editor.idle();
		expect(editor.selection).toEqual({ kind: "vertex", label: 2 });
	});

	it("clears the selection when its vertex is consumed", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.clickVertex(2);
		editor.handleKey("y");
		editor.clickVertex(2);
		await editor.idle();
		expect(editor.selection).toBeNull();
	});

	it("deletes the selected vertex with d", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.clickVertex(2);
		editor.handleKey("d");
		await editor.idle();
		expect(labels(editor)).toEqual([1, 2]);
		expect(editor.graph.edges).toEqual([]);
		expect(editor.revision).toBe(1);
	});

	it("deletes a selected edge with d without renumbering", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.clickEdge(2, 1);
		expect(editor.selection).toEqual({ kind: "edge", a: 1, b: 2 });
		editor.handleKey("d");
		await editor.idle();
		expect(labels(editor)).toEqual([1, 2, 3]);
		expect(editor.graph.edges).toEqual([[2, 3]]);
	});

	it("queued clicks are re-bound through earlier responses", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.handleKey("z");
		editor.clickVertex(1); // relabels 2->1, 3->2
		editor.clickVertex(3); // refers to the pre-response labelling
		await editor.idle();
		// both measurements landed: original vertices 1 and 3 are gone
		expect(editor.revision).toBe(2);
		expect(labels(editor)).toEqual([1]);
		expect(editor.graph.vertices[0].position).toEqual([200, 100]);
	});
});

describe("revision discipline", () => {
	it("revisions grow by exactly one per mutation", async () => {
		const { editor, elements } = await makeEditor();
		editor.handleKey("v");
		editor.clickCanvas(10, 10);
		editor.clickCanvas(60, 10);
		editor.clickCanvas(110, 10);
		await editor.idle();
		expect(editor.revision).toBe(3);
		expect(elements.revisionIndicator.textContent).toBe("revision 3");
	});

	it("the graph only changes when the server answers", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.handleKey("z");
		editor.clickVertex(2);
		expect(labels(editor)).toEqual([1, 2, 3]); // not yet acknowledged
		await editor.idle();
		expect(labels(editor)).toEqual([1, 2]);
	});
});

describe("drag to move", () => {
	it("sends the position once on drop and the server keeps it", async () => {
		const { editor, client } = await makeEditor(path3Document());
		editor.beginDrag(2, 200, 100);
		editor.moveDrag(220, 140);
		editor.moveDrag(260, 180);
		editor.endDrag();
		await editor.idle();
		expect(editor.revision).toBe(1);
		expect(editor.graph.vertices[1].position).toEqual([260, 180]);
		const journal = await client.journal();
		expect(journal).toHaveLength(1);
		expect(journal[0].op).toBe("move_vertex");
		const saved = JSON.parse(await editor.saveDocument());
		expect(saved.graph.vertices[1].position).toEqual([260, 180]);
	});

	it("a drag that never moved is a plain click", async () => {
		const { editor } = await makeEditor(path3Document());
		editor.beginDrag(1, 100, 100);
		editor.endDrag();
		await editor.idle();
		expect(editor.revision).toBe(0);
		expect(editor.selection).toEqual({ kind: "vertex", label: 1 });
	});
});

describe("save and load", () => {
	it("round-trips the canvas, positions included", async () => {
		const { editor } = await makeEditor();
		editor.handleKey("v");
		editor.clickCanvas(120, 80);
		editor.clickCanvas(340, 220);
		await editor.idle();
		editor.handleKey("e");
		editor.clickVertex(1);
		editor.clickVertex(2);
		await editor.idle();
		const saved = await editor.saveDocument();

		const second = await makeEditor();
		await second.editor.loadDocument(JSON.parse(saved));
		expect(second.editor.graph).toEqual(editor.graph);
		expect(second.editor.revision).toBe(0);
		expect(second.editor.graph.vertices.map((v) => v.position)).toEqual([
			[120, 80],
			[340, 220],
		]);
		expect(await second.editor.saveDocument()).toBe(saved);
	});

	it("an invalid document surfaces the rule and leaves the session intact", async () => {
		const { editor } = await makeEditor(path3Document());
		const broken = path3Document();
		broken.graph.edges = [[1, 1]];
		const error = await editor.loadDocument(broken).catch((e) => e);
		expect(String(error)).toContain("loop");
		const view = await editor.client.graph();
		expect(view.document.graph.edges).toEqual([
			[1, 2],
			[2, 3],
		]);
	});

	it("an empty session saves the canonical empty document", async () => {
		const { editor } = await makeEditor();
		const saved = await editor.saveDocument();
		expect(saved).toBe(
			'{"format_version":1,"graph":{"edges":[],"vertices":[]},"journal":[],"metadata":{}}',
		);
	});
});
