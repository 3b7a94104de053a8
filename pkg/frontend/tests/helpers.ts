// Shared test scaffolding: documents, DOM fixtures, editor construction.

import { inject } from "vitest";
import { SessionClient } from "../src/api";
import { Editor, type EditorElements } from "../src/editor";
import type { DocumentPayload, VertexEntry } from "../src/types";

export function apiBase(): string {
	return inject("apiBase");
}

export function makeDocument(
	vertices: Array<[number, [number, number]]>,
	edges: Array<[number, number]>,
): DocumentPayload {
	const entries: VertexEntry[] = vertices.map(([label, position]) => ({
		is_input: false,
		label,
		position,
	}));
	return {
		format_version: 1,
		graph: { edges, vertices: entries },
		journal: [],
		metadata: {},
	};
}

/** A path 1-2-3 laid out left to right, vertices 100px apart. */
export function path3Document(): DocumentPayload {
	return makeDocument(
		[
			[1, [100, 100]],
			[2, [200, 100]],
			[3, [300, 100]],
		],
		[
			[1, 2],
			[2, 3],
		],
	);
}

export interface Fixture {
	editor: Editor;
	client: SessionClient;
	elements: Required<
		Pick<EditorElements, "modeIndicator" | "revisionIndicator" | "toastRegion" | "sceneMirror">
	>;
}

export async function makeEditor(doc?: DocumentPayload): Promise<Fixture> {
	document.body.innerHTML = `
		<span id="mode"></span>
		<span id="revision"></span>
		<div id="toast"></div>
		<div id="scene-mirror"></div>
	`;
	// no canvas element here: jsdom offers no 2D context, so the tests assert
	// on the editor state and the textual scene mirror instead
	const elements = {
		modeIndicator: document.getElementById("mode") as HTMLElement,
		revisionIndicator: document.getElementById("revision") as HTMLElement,
		toastRegion: document.getElementById("toast") as HTMLElement,
		sceneMirror: document.getElementById("scene-mirror") as HTMLElement,
	};
	const client = await SessionClient.create(apiBase(), doc);
	const editor = await Editor.connect(client, elements);
	return { editor, client, elements };
}

export function labels(editor: Editor): number[] {
	return editor.graph.vertices.map((v) => v.label);
}
