// Curation session controller.
//
// The only client-side state is the decisions buffer; everything rendered is
// re-derived from the last server response, so a reload never loses
// server-side progress. On a 409 conflict the controller resyncs and keeps
// the still-valid buffered decisions for the analyst to resubmit.
import { ConflictError } from "./api.js";
export class SessionController {
    api;
    state = null;
    candidates = null;
    buffer = new Map();
    /** every decision acknowledged by the server, in submission order */
    submitted = [];
    constructor(api) {
        this.api = api;
    }
    async refresh() {
        this.state = await this.api.sessionState();
        this.candidates = await this.api.candidates();
    }
    candidateTags() {
        const tags = new Set();
        if (this.candidates) {
            for (const rows of Object.values(this.candidates.candidates)) {
                for (const row of rows) {
                    tags.add(row.hashtag);
                }
            }
        }
        return tags;
    }
    /** Buffer a decision; only current candidates are accepted (the client
     * guard mirrors the server's). */
    decide(hashtag, action) {
        if (!this.candidateTags().has(hashtag)) {
            return false;
        }
        this.buffer.set(hashtag, action);
        return true;
    }
    undecide(hashtag) {
        this.buffer.delete(hashtag);
    }
    bufferedDecisions() {
        return [...this.buffer.entries()].map(([hashtag, action]) => ({ hashtag, action }));
    }
    get bufferSize() {
        return this.buffer.size;
    }
    /** POST the buffer; the buffer is cleared only on success. On conflict the
     * session is resynced and decisions about vanished candidates dropped, the
     * rest stay buffered for replay. */
    async submit() {
        const decisions = this.bufferedDecisions();
        if (decisions.length === 0) {
            throw new Error("nothing to submit");
        }
        const iteration = this.state?.iteration ?? 0;
        try {
            const state = await this.api.postDecisions(decisions);
            for (const d of decisions) {
                this.submitted.push({ ...d, iteration });
            }
            this.buffer.clear();
            this.state = state;
            this.candidates = await this.api.candidates();
            return { submitted: decisions, dropped: [], state };
        }
        catch (err) {
            if (err instanceof ConflictError) {
                await this.refresh();
                const valid = this.candidateTags();
                const dropped = [];
                for (const [hashtag, action] of [...this.buffer.entries()]) {
                    if (!valid.has(hashtag)) {
                        dropped.push({ hashtag, action });
                        this.buffer.delete(hashtag);
                    }
                }
                return { submitted: [], dropped, state: this.state };
            }
            throw err;
        }
    }
    async iterate() {
        const state = await this.api.iterate();
        this.state = state;
        this.candidates = await this.api.candidates();
        this.buffer.clear();
        return state;
    }
    /** Render the acknowledged decisions in the batch decisions CSV format. */
    decisionsCsv() {
        const lines = ["iteration,hashtag,action"];
        for (const d of this.submitted) {
            lines.push(`${d.iteration},${d.hashtag},${d.action}`);
        }
        return lines.join("\n") + "\n";
    }
}
