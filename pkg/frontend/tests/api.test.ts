// SessionClient against the live service: lifecycle, errors, persistence.

import { describe, expect, it } from "vitest";
import { ApiError, SessionClient } from "../src/api";
import { apiBase, path3Document } from "./helpers";

describe("SessionClient", () => {
	it("creates an empty session at revision 0", async () => {
		const client = await SessionClient.create(apiBase());
		const view = await client.graph();
		expect(view.revision).toBe(0);
		expect(view.document.graph.vertices).toEqual([]);
	});

	it("applies operations and bumps the revision", async () => {
		const client = await SessionClient.create(apiBase(), path3Document());
		const response = await client.applyOp("z", { target: 2 }, 0);
		expect(response.revision).toBe(1);
		expect(response.graph.edges).toEqual([]);
		expect(response.label_map).toEqual([
			[1, 1],
			[3, 2],
		]);
	});

	it("rejects stale revisions with a conflict", async () => {
		const client = await SessionClient.create(apiBase(), path3Document());
		await client.applyOp("add_vertex", {}, 0);
		const error = await client.applyOp("add_vertex", {}, 0).catch((e) => e);
		expect(error).toBeInstanceOf(ApiError);
		expect(error.status).toBe(409);
		expect(error.rule).toBe("revision-conflict");
		expect(error.detail.current_revision).toBe(1);
	});

	it("names the violated rule on domain errors", async () => {
		const client = await SessionClient.create(apiBase(), path3Document());
		const error = await client.applyOp("add_edge", { a: 1, b: 1 }, 0).catch((e) => e);
		expect(error).toBeInstanceOf(ApiError);
		expect(error.status).toBe(422);
		expect(error.rule).toBe("loop");
	});

	it("round-trips a document through save and load", async () => {
		const client = await SessionClient.create(apiBase(), path3Document());
		await client.applyOp("y", { target: 2 }, 0);
		const saved = await client.save();

		const fresh = await SessionClient.create(apiBase());
		const revision = await fresh.load(JSON.parse(saved));
		expect(revision).toBe(0);
		expect(await fresh.save()).toBe(saved);
	});

	it("exposes the journal with sequential records", async () => {
		const client = await SessionClient.create(apiBase(), path3Document());
		await client.applyOp("lc", { vertex: 2 }, 0);
		await client.applyOp("z", { target: 1 }, 1);
		const journal = await client.journal();
		expect(journal.map((r) => r.seq)).toEqual([1, 2]);
		expect(journal[1].consumed).toBe(1);
	});
});
