/** Thin typed client for the model service.
 *
 * Every displayed analytic number comes through this module; the UI
 * performs no coverage math of its own. The client records the
 * X-Model-Revision header of the latest response so callers can spot
 * concurrent writers.
 */
export class ApiError extends Error {
    constructor(status, message, diagnostics = []) {
        super(message);
        this.status = status;
        this.diagnostics = diagnostics;
        this.name = "ApiError";
    }
}
export class ApiClient {
    constructor(baseUrl = "", fetchImpl) {
        this.baseUrl = baseUrl;
        /** Revision of the most recent server response, null before first contact. */
        this.revision = null;
        // wrap the global so the call is not made with a bound `this`
        this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
    }
    async taxonomy() {
        return this.request("GET", "/api/taxonomy");
    }
    async model() {
        return this.request("GET", "/api/model");
    }
    async replaceModel(doc) {
        return this.request("PUT", "/api/model", doc);
    }
    async edits(ops) {
        return this.request("POST", "/api/edits", ops);
    }
    async analyze(body) {
        return this.request("POST", "/api/analyze", body);
    }
    /** URL of the DOT rendering for linking out; no fetch involved. */
    renderDotUrl(scenarioId) {
        return `${this.baseUrl}/api/render/dot?scenario=${encodeURIComponent(scenarioId)}`;
    }
    async request(method, path, body) {
        const init = { method };
        if (body !== undefined) {
            init.body = JSON.stringify(body);
            init.headers = { "Content-Type": "application/json" };
        }
        const response = await this.fetchImpl(this.baseUrl + path, init);
        const revision = response.headers.get("X-Model-Revision");
        if (revision !== null) {
            this.revision = Number(revision);
        }
        const text = await response.text();
        let payload = null;
        if (text) {
            try {
                payload = JSON.parse(text);
            }
            catch {
                payload = null;
            }
        }
        if (!response.ok) {
            const doc = (payload ?? {});
            const diagnostics = doc.diagnostics ?? [];
            const message = doc.error ?? diagnostics.map((d) => d.message).join("; ") ?? `HTTP ${response.status}`;
            throw new ApiError(response.status, message || `HTTP ${response.status}`, diagnostics);
        }
        return payload;
    }
}
