/** Typed client for the session service endpoints. */

export interface TrajectoryPayload {
  id: string;
  features: number[];
  label: string | null;
  media_ref: string | null;
}

export interface QueryPayload {
  query: { p: string; q: string };
  trajectories: [TrajectoryPayload, TrajectoryPayload];
  epsilon: number;
  iteration: number;
}

export interface FeedbackResult {
  iteration: number;
  w_hat: number[];
  alpha_hat: number;
}

export interface EstimatePayload {
  w_hat: number[];
  alpha_hat: number;
  iteration: number;
  best_trajectory: TrajectoryPayload;
}

export interface SetInfo {
  set_id: string;
  dimension: number;
  size: number;
}

export interface SessionOptions {
  policyKind?: string;
  candidateBudget?: number;
  seed?: number;
  sigma?: number;
  epsilon?: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parse<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(
      response.status,
      (body as { code?: string }).code ?? "unknown_error",
      (body as { message?: string }).message ?? response.statusText,
    );
  }
  return body as T;
}

export class SessionApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  listSets(): Promise<{ sets: SetInfo[] }> {
    return this.fetchFn(`${this.base}/sets`).then((r) => parse(r));
  }

  createSession(setId: string, options: SessionOptions = {}): Promise<{ session_id: string }> {
    const policy: Record<string, unknown> = {
      kind: options.policyKind ?? "info_gain",
      candidate_budget: options.candidateBudget ?? 2000,
    };
    if (options.seed !== undefined) {
      policy.seed = options.seed;
    }
    return this.fetchFn(`${this.base}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        set_id: setId,
        policy,
        sigma: options.sigma ?? 0.35,
        epsilon: options.epsilon ?? 0.1,
      }),
    }).then((r) => parse(r));
  }

  nextQuery(sessionId: string): Promise<QueryPayload> {
    return this.fetchFn(`${this.base}/sessions/${sessionId}/query`).then((r) => parse(r));
  }

  submitFeedback(sessionId: string, mu: number): Promise<FeedbackResult> {
    return this.fetchFn(`${this.base}/sessions/${sessionId}/feedback`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ mu }),
    }).then((r) => parse(r));
  }

  estimate(sessionId: string): Promise<EstimatePayload> {
    return this.fetchFn(`${this.base}/sessions/${sessionId}/estimate`).then((r) => parse(r));
  }
}
