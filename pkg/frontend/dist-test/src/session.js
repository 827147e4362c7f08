/** Pure view models derived from service payloads.
 *
 * No probability is ever computed here: every number in a view is copied
 * verbatim from a payload.  Settled markers are threshold comparisons on
 * the service's own numbers.
 */
export function sessionView(space, payload) {
    const { theta_lo, theta_hi } = payload.config;
    const bars = space.concepts.map((concept) => {
        const p = payload.marginals[concept] ?? null;
        let settled = null;
        if (p !== null && p <= theta_lo)
            settled = "low";
        if (p !== null && p >= theta_hi)
            settled = "high";
        return {
            concept,
            p,
            label: p === null ? "-" : String(p),
            settled,
            isQuestion: payload.question === concept,
        };
    });
    return {
        status: payload.status,
        question: payload.question,
        counter: `${payload.questions_asked} of at most ${space.n} questions`,
        thetaLo: theta_lo,
        thetaHi: theta_hi,
        bars,
        final: payload.final
            ? {
                state: payload.final.state,
                readyToLearn: payload.final.ready_to_learn,
                recentlyLearned: payload.final.recently_learned,
                forced: payload.final.forced_termination,
            }
            : null,
    };
}
/** Fold the transcript up to `step` events into a replay frame. */
export function replayView(events, step) {
    const upto = Math.max(0, Math.min(step, events.length));
    const marginals = {};
    let description = "start";
    for (const ev of events.slice(0, upto)) {
        if (ev.type === "marginal") {
            marginals[ev.concept] = ev.p;
        }
        else if (ev.type === "ask") {
            description = `asked ${ev.concept}`;
        }
        else if (ev.type === "answer") {
            description = `answered ${ev.concept} ${ev.correct ? "correctly" : "incorrectly"}`;
        }
        else {
            description = `final state ${ev.state}`;
        }
    }
    return { step: upto, total: events.length, description, marginals };
}
