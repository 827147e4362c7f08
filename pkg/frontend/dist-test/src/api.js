/** Typed client for the lspace session service. */
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
export class ApiClient {
    base;
    fetchFn;
    constructor(base = "", fetchFn = (input, init) => fetch(input, init)) {
        this.base = base;
        this.fetchFn = fetchFn;
    }
    async request(method, path, body) {
        const init = { method };
        if (body !== undefined) {
            init.body = JSON.stringify(body);
            init.headers = { "Content-Type": "application/json" };
        }
        const resp = await this.fetchFn(this.base + path, init);
        const payload = await resp.json();
        if (!resp.ok) {
            throw new ApiError(resp.status, payload.error ?? resp.statusText);
        }
        return payload;
    }
    createSpace(format, text) {
        return this.request("POST", "/spaces", { format, text });
    }
    getSpace(id) {
        return this.request("GET", `/spaces/${id}`);
    }
    createSession(spaceId, config = {}) {
        return this.request("POST", "/sessions", { space_id: spaceId, config });
    }
    answer(sessionId, concept, correct) {
        return this.request("POST", `/sessions/${sessionId}/answer`, { concept, correct });
    }
    getSession(id) {
        return this.request("GET", `/sessions/${id}`);
    }
    deleteSession(id) {
        return this.request("DELETE", `/sessions/${id}`);
    }
}
