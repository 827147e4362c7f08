/** Browser wiring: upload a space, configure, answer, review. */
import { ApiClient } from "./api.js";
import { renderReplay, renderSession } from "./render.js";
import { replayView, sessionView } from "./session.js";
const SAMPLE_SPACE = "domain: A,B,C\nA,B,C\nC,B,A\n";
const api = new ApiClient("");
let space = null;
let session = null;
let replayStep = 0;
function el(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing element #${id}`);
    return node;
}
function showError(message) {
    el("error").textContent = message;
}
function configFromInputs() {
    return {
        beta: Number(el("cfg-beta").value),
        eta: Number(el("cfg-eta").value),
        theta_lo: Number(el("cfg-lo").value),
        theta_hi: Number(el("cfg-hi").value),
        seed: Number(el("cfg-seed").value),
    };
}
function paintSession() {
    if (!space || !session)
        return;
    el("session-root").innerHTML = renderSession(sessionView(space, session));
    const yes = document.getElementById("answer-correct");
    const no = document.getElementById("answer-incorrect");
    yes?.addEventListener("click", () => submit(true));
    no?.addEventListener("click", () => submit(false));
    el("session-id").textContent = session.id;
}
async function submit(correct) {
    if (!session || session.question === null)
        return;
    try {
        session = await api.answer(session.id, session.question, correct);
        paintSession();
        if (session.status === "done") {
            await paintReplay(0);
        }
    }
    catch (exc) {
        showError(String(exc));
    }
}
async function paintReplay(step) {
    if (!session)
        return;
    const full = await api.getSession(session.id);
    const events = full.transcript ?? [];
    replayStep = Math.max(0, Math.min(step, events.length));
    el("replay-root").innerHTML = renderReplay(replayView(events, replayStep));
    document.getElementById("replay-back")?.addEventListener("click", () => paintReplay(replayStep - 1));
    document.getElementById("replay-forward")?.addEventListener("click", () => paintReplay(replayStep + 1));
}
async function startSession() {
    showError("");
    try {
        const text = el("space-text").value || SAMPLE_SPACE;
        const format = el("space-format").value;
        space = await api.createSpace(format, text);
        el("space-info").textContent =
            `space ${space.id}: ${space.n} concepts, ` +
                `${space.state_count ?? "many"} states, dimension ${space.dim_c}`;
        session = await api.createSession(space.id, configFromInputs());
        paintSession();
    }
    catch (exc) {
        showError(String(exc));
    }
}
async function resumeSession() {
    showError("");
    try {
        const id = el("resume-id").value.trim();
        session = await api.getSession(id);
        space = await api.getSpace(session.space_id);
        paintSession();
        if (session.status === "done")
            await paintReplay(0);
    }
    catch (exc) {
        showError(String(exc));
    }
}
export function boot() {
    el("space-text").value = SAMPLE_SPACE;
    el("start").addEventListener("click", () => void startSession());
    el("resume").addEventListener("click", () => void resumeSession());
}
if (typeof document !== "undefined") {
    document.addEventListener("DOMContentLoaded", boot);
}
