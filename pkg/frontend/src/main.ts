// Application bootstrap: create a session, wire the canvas and the toolbar.

import { SessionClient } from "./api";
import { Editor } from "./editor";
import type { DocumentPayload } from "./types";

function apiBase(): string {
	const override = new URLSearchParams(window.location.search).get("api");
	return override ?? "http://127.0.0.1:8000";
}

function canvasPoint(canvas: HTMLCanvasElement, event: MouseEvent): [number, number] {
	const rect = canvas.getBoundingClientRect();
	return [event.clientX - rect.left, event.clientY - rect.top];
}

async function boot(): Promise<void> {
	const canvas = document.getElementById("canvas") as HTMLCanvasElement;
	const client = await SessionClient.create(apiBase());
	const editor = await Editor.connect(client, {
		canvas,
		modeIndicator: document.getElementById("mode") ?? undefined,
		revisionIndicator: document.getElementById("revision") ?? undefined,
		toastRegion: document.getElementById("toast") ?? undefined,
		sceneMirror: document.getElementById("scene-mirror") ?? undefined,
	});

	window.addEventListener("keydown", (event) => {
		if (event.target instanceof HTMLInputElement) return;
		editor.handleKey(event.key);
	});

	canvas.addEventListener("mousedown", (event) => {
		const [x, y] = canvasPoint(canvas, event);
		const vertex = editor.vertexAt(x, y);
		if (vertex !== null && editor.mode === "select") {
			editor.beginDrag(vertex, x, y);
		} else {
			editor.clickAt(x, y);
		}
	});
	canvas.addEventListener("mousemove", (event) => {
		const [x, y] = canvasPoint(canvas, event);
		editor.moveDrag(x, y);
	});
	canvas.addEventListener("mouseup", () => editor.endDrag());

	const saveButton = document.getElementById("save") as HTMLButtonElement;
	saveButton.addEventListener("click", () => {
		void editor.saveDocument().then((text) => {
			const blob = new Blob([text], { type: "application/json" });
			const link = document.createElement("a");
			link.href = URL.createObjectURL(blob);
			link.download = "graph.q2g.json";
			link.click();
			URL.revokeObjectURL(link.href);
		});
	});

	const loadInput = document.getElementById("load") as HTMLInputElement;
	loadInput.addEventListener("change", () => {
		const file = loadInput.files?.[0];
		if (!file) return;
		void file.text().then(async (text) => {
			try {
				await editor.loadDocument(JSON.parse(text) as DocumentPayload);
			} catch (error) {
				const toast = document.getElementById("toast");
				if (toast) toast.textContent = `load failed: ${String(error)}`;
			}
			loadInput.value = "";
		});
	});
}

void boot();
