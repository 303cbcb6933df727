/** Wire types for the session service JSON API. Field names match the server. */

export interface Item {
  id: string;
  title: string;
  content_ref: string;
}

export interface Criterion {
  id: string;
  label: string;
}

export interface Strategy {
  kind: "random" | "entropy" | "combined_entropy";
  rng_seed: number;
}

export interface CreateSessionRequest {
  mode: "BCJ" | "MBCJ";
  items: Array<{ id: string; title?: string; content_ref?: string }>;
  criteria?: Array<{ id: string; label?: string }>;
  weights?: number[];
  strategy?: { kind: string; rng_seed?: number };
  max_comparisons?: number;
  seed?: number;
}

export interface SessionConfig {
  mode: "BCJ" | "MBCJ";
  items: Item[];
  criteria: Criterion[];
  weights: number[];
  strategy: Strategy;
  max_comparisons: number;
  seed: number;
}

export interface SessionCreated {
  session_id: string;
  config: SessionConfig;
}

export interface NextPair {
  session_id: string;
  judge_id: string;
  exhausted: boolean;
  pair?: [string, string] | null;
  left?: string | null;
  right?: string | null;
  budget_remaining: number;
}

export interface SubmitJudgementRequest {
  judge_id: string;
  pair: [string, string];
  decisions: Record<string, string>;
}

export interface JudgementEntry {
  sequence: number;
  judge_id: string;
  pair: [string, string];
  decisions: Record<string, string>;
  wall_time: string;
}

export interface SubmitJudgementResponse {
  acknowledged: JudgementEntry;
  next: NextPair;
}

export interface Budget {
  max_comparisons: number;
  used: number;
  remaining: number;
}

export interface RankedItem {
  rank: number;
  item_id: string;
  title: string;
  expected_rank: number;
  density: number[];
  criterion_densities?: Record<string, number[]>;
  criterion_expected_ranks?: Record<string, number>;
}

export interface TieBreak {
  expected_rank: number;
  tied: string[];
  resolved: string[];
}

export interface AgreementMatrix {
  items: string[];
  map: Array<Array<number | null>>;
  eap: Array<Array<number | null>>;
}

export interface RadarSummary {
  per_criterion: Record<string, number>;
  combined: number;
}

export interface DecisionPdf {
  pair: [string, string];
  alpha: number;
  beta: number;
  grid: number[];
  pdf: number[];
  mode: number;
}

export interface ResultsPayload {
  session_id: string;
  mode: "BCJ" | "MBCJ";
  items: Item[];
  budget: Budget;
  ranking: RankedItem[];
  tie_breaks: TieBreak[];
  agreement: Record<string, AgreementMatrix>;
  criteria: Criterion[];
  weights?: number[];
  radar?: Record<string, RadarSummary>;
  decision_pdfs: Record<string, DecisionPdf[]>;
}

export interface AgreementPayload {
  session_id: string;
  judge_id?: string | null;
  matrices: Record<string, AgreementMatrix>;
}

export interface AuditPayload {
  session_id: string;
  judge_id?: string | null;
  entries: JudgementEntry[];
}

export interface Health {
  status: string;
  sessions: number;
}

/** BCJ sessions carry their single implicit criterion under this key. */
export const HOLISTIC = "holistic";
