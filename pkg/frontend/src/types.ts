// Payload shapes of the pipeline service HTTP endpoints.

export interface SessionState {
  session_id: string;
  iteration: number;
  stable: boolean;
  classes: string[];
  assigned_counts: Record<string, number>;
  candidate_counts: Record<string, number>;
  rejected_count: number;
}

export interface CandidateNeighbor {
  hashtag: string;
  s: number;
  class: string | null;
}

export interface CandidateRow {
  hashtag: string;
  score: number;
  class_scores: Record<string, number>;
  occurrences: number;
  top_neighbors: CandidateNeighbor[];
}

export interface CandidatesView {
  iteration: number;
  candidates: Record<string, CandidateRow[]>;
}

export interface GraphNodePayload {
  id: string;
  count: number;
  community?: number;
  class?: string;
  provenance?: string;
  candidate_for?: string;
}

export interface GraphLinkPayload {
  source: string;
  target: string;
  s: number;
  k: number;
}

export interface GraphPayload {
  nodes: GraphNodePayload[];
  links: GraphLinkPayload[];
}

export interface SeriesPayload {
  days: string[];
  series: Record<string, (number | null)[]>;
  scope?: string;
}

export interface FitPayload {
  params: {
    w: number;
    A: number;
    b: number;
    t_d: number;
    T_d: number;
    pearson_r: number | null;
    rmse_pp: number;
  };
  days: string[];
  series: { fitted: number[] };
}

export type DecisionAction = "accept" | "reject";

export interface Decision {
  hashtag: string;
  action: DecisionAction;
}

export interface ConflictBody {
  error: string;
  conflicts: string[];
}
