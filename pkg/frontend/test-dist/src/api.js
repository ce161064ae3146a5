// Thin typed client for the pipeline service. The fetch implementation is
// injectable so tests can run against stubs or a local service.
export class ConflictError extends Error {
    conflicts;
    constructor(body) {
        super(body.error);
        this.conflicts = body.conflicts ?? [];
    }
}
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(`HTTP ${status}: ${message}`);
        this.status = status;
    }
}
export class ApiClient {
    base;
    fetchImpl;
    constructor(base = "", fetchImpl = (url, init) => fetch(url, init)) {
        this.base = base;
        this.fetchImpl = fetchImpl;
    }
    async get(path) {
        const resp = await this.fetchImpl(this.base + path);
        if (!resp.ok) {
            throw new ApiError(resp.status, await resp.text());
        }
        return (await resp.json());
    }
    async post(path, body) {
        const resp = await this.fetchImpl(this.base + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
        if (resp.status === 409) {
            throw new ConflictError((await resp.json()));
        }
        if (!resp.ok) {
            throw new ApiError(resp.status, await resp.text());
        }
        return (await resp.json());
    }
    sessionState() {
        return this.get("/session/state");
    }
    candidates() {
        return this.get("/session/candidates");
    }
    graph() {
        return this.get("/session/graph");
    }
    postDecisions(decisions) {
        return this.post("/session/decisions", { decisions });
    }
    iterate() {
        return this.post("/session/iterate", {});
    }
    opinionSeries(scope = "whole") {
        return this.get(`/series/opinion?scope=${encodeURIComponent(scope)}`);
    }
    pollSeries() {
        return this.get("/series/polls");
    }
    fitSeries() {
        return this.get("/series/fit");
    }
    baselineSeries() {
        return this.get("/series/baselines");
    }
}
