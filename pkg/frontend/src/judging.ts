import { ApiError } from "./api.js";
import {
  HOLISTIC,
  type Criterion,
  type NextPair,
  type SubmitJudgementRequest,
  type SubmitJudgementResponse,
} from "./types.js";

export type JudgingPhase = "loading" | "choosing" | "submitting" | "exhausted";

/** The slice of the API client the judging loop talks to. */
export interface JudgingApi {
  nextPair(sessionId: string, judgeId: string): Promise<NextPair>;
  submitJudgement(
    sessionId: string,
    req: SubmitJudgementRequest,
  ): Promise<SubmitJudgementResponse>;
}

/**
 * What the judging loop needs to know about a session. The full session
 * config satisfies this, and so does a results payload read back on reload
 * (mode, criteria and budget.max_comparisons).
 */
export interface JudgingConfig {
  mode: "BCJ" | "MBCJ";
  criteria: Criterion[];
  max_comparisons: number;
}

/**
 * Winner per criterion id. Storing one winner per criterion is what makes
 * picking a criterion on one pane deselect it on the other.
 */
export type Selections = Record<string, string>;

export interface JudgingView {
  phase: JudgingPhase;
  mode: "BCJ" | "MBCJ";
  left: string | null;
  right: string | null;
  criteria: Array<{ id: string; label: string }>;
  selections: Selections;
  canSubmit: boolean;
  budgetRemaining: number;
  budgetUsed: number;
  maxComparisons: number;
}

export function applySelection(
  selections: Selections,
  criterionId: string,
  itemId: string,
): Selections {
  return { ...selections, [criterionId]: itemId };
}

export function selectionsComplete(
  selections: Selections,
  criteria: Array<{ id: string }>,
): boolean {
  return criteria.every((criterion) => selections[criterion.id] !== undefined);
}

/**
 * Drives one judge through fetch pair, collect choices, submit, repeat.
 *
 * Holds no model state of its own: every pair and budget figure comes from
 * the server, so reloading mid-session just resumes from the pending pair.
 */
export class JudgingSession {
  readonly sessionId: string;
  readonly judgeId: string;
  private readonly client: JudgingApi;
  private readonly config: JudgingConfig;
  private phase: JudgingPhase = "loading";
  private pair: NextPair | null = null;
  private selections: Selections = {};
  private inFlight = false;

  constructor(client: JudgingApi, sessionId: string, judgeId: string, config: JudgingConfig) {
    this.client = client;
    this.sessionId = sessionId;
    this.judgeId = judgeId;
    this.config = config;
  }

  get criteria(): Array<{ id: string; label: string }> {
    return this.config.mode === "BCJ"
      ? [{ id: HOLISTIC, label: "Holistic" }]
      : this.config.criteria;
  }

  view(): JudgingView {
    return {
      phase: this.phase,
      mode: this.config.mode,
      left: this.pair?.left ?? null,
      right: this.pair?.right ?? null,
      criteria: this.criteria,
      selections: { ...this.selections },
      canSubmit:
        this.phase === "choosing" && selectionsComplete(this.selections, this.criteria),
      budgetRemaining: this.pair?.budget_remaining ?? 0,
      budgetUsed: this.config.max_comparisons - (this.pair?.budget_remaining ?? 0),
      maxComparisons: this.config.max_comparisons,
    };
  }

  /** Fetches the pending pair; idempotent, so it doubles as resume-on-reload. */
  async start(): Promise<JudgingView> {
    this.applyNext(await this.client.nextPair(this.sessionId, this.judgeId));
    return this.view();
  }

  select(criterionId: string, itemId: string): JudgingView {
    if (this.phase !== "choosing") {
      throw new Error(`cannot select while ${this.phase}`);
    }
    if (itemId !== this.pair?.left && itemId !== this.pair?.right) {
      throw new Error(`item ${itemId} is not part of the presented pair`);
    }
    if (!this.criteria.some((criterion) => criterion.id === criterionId)) {
      throw new Error(`unknown criterion ${criterionId}`);
    }
    this.selections = applySelection(this.selections, criterionId, itemId);
    return this.view();
  }

  /** BCJ single-tap flow: the per-item choose button submits directly. */
  async choose(itemId: string): Promise<JudgingView> {
    this.select(HOLISTIC, itemId);
    return this.submit();
  }

  async submit(): Promise<JudgingView> {
    if (this.inFlight) {
      throw new Error("a submission is already in flight");
    }
    const view = this.view();
    if (!view.canSubmit || this.pair?.pair == null) {
      throw new Error("submit requires a choice for every criterion");
    }
    this.inFlight = true;
    this.phase = "submitting";
    try {
      const response = await this.client.submitJudgement(this.sessionId, {
        judge_id: this.judgeId,
        pair: this.pair.pair,
        decisions: { ...this.selections },
      });
      this.applyNext(response.next);
    } catch (error) {
      if (error instanceof ApiError && error.errorType === "StalePairError") {
        // The server moved on (another tab or judge); drop the stale
        // choices and resync to the pending pair it actually holds.
        this.applyNext(await this.client.nextPair(this.sessionId, this.judgeId));
        return this.view();
      }
      if (error instanceof ApiError && error.errorType === "BudgetExhaustedError") {
        this.phase = "exhausted";
        this.pair = null;
        return this.view();
      }
      this.phase = "choosing";
      throw error;
    } finally {
      this.inFlight = false;
    }
    return this.view();
  }

  private applyNext(next: NextPair): void {
    this.selections = {};
    this.pair = next;
    this.phase = next.exhausted ? "exhausted" : "choosing";
  }
}
