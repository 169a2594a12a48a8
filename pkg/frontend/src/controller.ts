/**
 * Session state machine, kept free of DOM concerns so it is testable.
 *
 * One request is in flight at a time; submit() is a no-op unless the phase
 * is "answering", which is what makes double clicks harmless.  A 409
 * conflict from the service means the feedback already landed, so the
 * controller resynchronizes instead of resubmitting.
 */

import { ApiError, EstimatePayload, QueryPayload, SessionApi } from "./api.js";
import { neutralIndex, sliderGrid } from "./grid.js";

export type Phase =
  | "idle"
  | "loading"
  | "answering"
  | "submitting"
  | "finished"
  | "error";

export interface UiState {
  phase: Phase;
  sessionId: string | null;
  epsilon: number;
  grid: number[];
  sliderIndex: number;
  iteration: number;
  rounds: number;
  query: QueryPayload | null;
  estimate: EstimatePayload | null;
  error: string | null;
  rejections: number;
}

export type Listener = (state: UiState) => void;

export class SessionController {
  private state: UiState;
  private listeners: Listener[] = [];

  constructor(
    private readonly api: SessionApi,
    rounds = 10,
  ) {
    this.state = {
      phase: "idle",
      sessionId: null,
      epsilon: 0.1,
      grid: sliderGrid(0.1),
      sliderIndex: neutralIndex(sliderGrid(0.1)),
      iteration: 0,
      rounds,
      query: null,
      estimate: null,
      error: null,
      rejections: 0,
    };
  }

  getState(): UiState {
    return this.state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private update(patch: Partial<UiState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  /** Create a fresh session, or resume an existing one after a page reload. */
  async start(setId: string, options: Parameters<SessionApi["createSession"]>[1] = {},
              existingSessionId?: string): Promise<void> {
    this.update({ phase: "loading", error: null });
    try {
      const sessionId = existingSessionId
        ?? (await this.api.createSession(setId, options)).session_id;
      const estimate = await this.api.estimate(sessionId);
      this.update({ sessionId, iteration: estimate.iteration, estimate });
      await this.fetchQuery();
    } catch (error) {
      this.fail(error);
    }
  }

  /** Pull the pending query (idempotent on the service side). */
  async fetchQuery(): Promise<void> {
    const sessionId = this.state.sessionId;
    if (!sessionId) {
      return;
    }
    if (this.state.iteration >= this.state.rounds) {
      this.update({ phase: "finished", query: null });
      return;
    }
    this.update({ phase: "loading", error: null });
    try {
      const query = await this.api.nextQuery(sessionId);
      const grid = sliderGrid(query.epsilon);
      this.update({
        phase: "answering",
        query,
        epsilon: query.epsilon,
        grid,
        sliderIndex: neutralIndex(grid),  // reset to neutral every round
      });
    } catch (error) {
      this.fail(error);
    }
  }

  setSliderIndex(index: number): void {
    if (this.state.phase !== "answering") {
      return;
    }
    const clamped = Math.min(Math.max(Math.round(index), 0), this.state.grid.length - 1);
    this.update({ sliderIndex: clamped });
  }

  sliderValue(): number {
    return this.state.grid[this.state.sliderIndex]!;
  }

  /** Submit the current slider value; ignored unless a query is answerable. */
  async submit(): Promise<void> {
    if (this.state.phase !== "answering" || !this.state.sessionId) {
      return;
    }
    const sessionId = this.state.sessionId;
    const mu = this.sliderValue();
    this.update({ phase: "submitting" });
    try {
      const result = await this.api.submitFeedback(sessionId, mu);
      const estimate = await this.api.estimate(sessionId);
      this.update({ iteration: result.iteration, estimate });
      await this.fetchQuery();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        // the answer already landed (e.g. a retried request); resync
        const estimate = await this.api.estimate(sessionId).catch(() => null);
        if (estimate) {
          this.update({ iteration: estimate.iteration, estimate });
        }
        await this.fetchQuery();
        return;
      }
      if (error instanceof ApiError && error.status === 422) {
        this.update({ rejections: this.state.rejections + 1 });
      }
      this.fail(error);
    }
  }

  /** Re-run the step that failed; the slider position is preserved. */
  async retry(): Promise<void> {
    if (this.state.phase !== "error") {
      return;
    }
    if (this.state.query !== null && this.state.iteration < this.state.rounds) {
      this.update({ phase: "answering", error: null });
    } else {
      await this.fetchQuery();
    }
  }

  private fail(error: unknown): void {
    const message = error instanceof Error ? error.message : String(error);
    this.update({ phase: "error", error: message });
  }
}
