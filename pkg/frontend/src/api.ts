// Typed client for the session HTTP API. Errors surface as ApiError with the
// service's {rule, message, detail} body attached.

import type {
	DocumentPayload,
	GraphView,
	JournalRecord,
	OpKind,
	OpResponse,
} from "./types";

export class ApiError extends Error {
	readonly status: number;
	readonly rule: string;
	readonly detail: unknown;

	constructor(status: number, rule: string, message: string, detail: unknown) {
		super(message);
		this.status = status;
		this.rule = rule;
		this.detail = detail;
	}
}

async function parseError(response: Response): Promise<never> {
	let rule = "error";
	let message = `${response.status} ${response.statusText}`;
	let detail: unknown = null;
	try {
		const body = await response.json();
		if (typeof body.rule === "string") rule = body.rule;
		if (typeof body.message === "string") message = body.message;
		detail = body.detail ?? null;
	} catch {
		// non-JSON error body; keep the status line
	}
	throw new ApiError(response.status, rule, message, detail);
}

export class SessionClient {
	readonly baseUrl: string;
	readonly sessionId: string;

	constructor(baseUrl: string, sessionId: string) {
		this.baseUrl = baseUrl.replace(/\/$/, "");
		this.sessionId = sessionId;
	}

	static async create(baseUrl: string, doc?: DocumentPayload): Promise<SessionClient> {
		const response = await fetch(`${baseUrl.replace(/\/$/, "")}/sessions`, {
			method: "POST",
			headers: { "content-type": "application/json" },
			body: doc === undefined ? null : JSON.stringify(doc),
		});
		if (!response.ok) await parseError(response);
		const body = await response.json();
		return new SessionClient(baseUrl, body.session_id);
	}

	private url(path: string): string {
		return `${this.baseUrl}/sessions/${this.sessionId}${path}`;
	}

	async graph(): Promise<GraphView> {
		const response = await fetch(this.url("/graph"));
		if (!response.ok) await parseError(response);
		return response.json();
	}

	async applyOp(
		kind: OpKind,
		args: Record<string, unknown>,
		expectedRevision: number,
	): Promise<OpResponse> {
		const response = await fetch(this.url("/ops"), {
			method: "POST",
			headers: { "content-type": "application/json" },
			body: JSON.stringify({ kind, args, expected_revision: expectedRevision }),
		});
		if (!response.ok) await parseError(response);
		return response.json();
	}

	async journal(): Promise<JournalRecord[]> {
		const response = await fetch(this.url("/journal"));
		if (!response.ok) await parseError(response);
		return (await response.json()).journal;
	}

	async save(): Promise<string> {
		const response = await fetch(this.url("/save"));
		if (!response.ok) await parseError(response);
		return response.text();
	}

	async load(doc: DocumentPayload): Promise<number> {
		const response = await fetch(this.url("/load"), {
			method: "PUT",
			headers: { "content-type": "application/json" },
			body: JSON.stringify(doc),
		});
		if (!response.ok) await parseError(response);
		return (await response.json()).revision;
	}
}
