import assert from "node:assert/strict";
import { test } from "node:test";
import { ApiClient, ApiError } from "../src/api.js";
function fakeFetch(status, payload, log) {
    return (input, init) => {
        log.push({ url: input, method: init?.method, body: init?.body });
        return Promise.resolve(new Response(JSON.stringify(payload), {
            status,
            headers: { "Content-Type": "application/json" },
        }));
    };
}
test("createSpace posts format and text", async () => {
    const log = [];
    const api = new ApiClient("http://svc", fakeFetch(200, { id: "x" }, log));
    await api.createSpace("seqs", "domain: A\nA\n");
    assert.equal(log[0].url, "http://svc/spaces");
    assert.equal(log[0].method, "POST");
    assert.deepEqual(JSON.parse(log[0].body), {
        format: "seqs",
        text: "domain: A\nA\n",
    });
});
test("answer posts to the session answer endpoint", async () => {
    const log = [];
    const api = new ApiClient("", fakeFetch(200, { id: "s" }, log));
    await api.answer("s9", "A", true);
    assert.equal(log[0].url, "/sessions/s9/answer");
    assert.deepEqual(JSON.parse(log[0].body), { concept: "A", correct: true });
});
test("service errors become ApiError with status and message", async () => {
    const log = [];
    const api = new ApiClient("", fakeFetch(409, { error: "not current" }, log));
    await assert.rejects(api.answer("s9", "A", true), (exc) => exc instanceof ApiError && exc.status === 409 && exc.message === "not current");
});
