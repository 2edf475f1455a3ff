// Wire types mirroring the annotation service API.

export type EventType =
  | "current_event"
  | "old_event"
  | "risk_event"
  | "general"
  | "irrelevant";

export type InformationType =
  | "descriptive_epidemiology"
  | "distribution"
  | "preventive_control_measures"
  | "transmission_pathway"
  | "concern_risk_factors"
  | "economic_political_consequences"
  | "general_epidemiology";

export type Phase =
  | "metadata_read"
  | "article_read"
  | "event_pass"
  | "info_pass"
  | "complete";

export interface DocumentSummary {
  id: string;
  title: string;
  source: string;
  url: string | null;
  publication_date: string; // YYYY-MM-DD
}

export interface DocumentDetail extends DocumentSummary {
  body: string;
}

export interface SentenceRecord {
  doc_id: string;
  index: number;
  char_start: number;
  char_end: number;
  text: string;
}

export interface SessionView {
  id: string;
  doc_id: string;
  annotator_id: string;
  n_sentences: number;
  reference_date: string;
  phase: Phase;
  event_labels: Record<string, EventType>;
  info_labels: Record<string, InformationType>;
  candidates: Record<string, InformationType[]>;
  overrides: number[];
  pending_info_indices: number[];
  revision?: number;
}

export interface Resolution {
  main: InformationType;
  ambiguous: boolean;
  rationale: string;
}

export interface ApiErrorPayload {
  code: string;
  message: string;
  details?: unknown;
}

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly details?: unknown;

  constructor(status: number, payload: ApiErrorPayload) {
    super(payload.message);
    this.code = payload.code;
    this.status = status;
    this.details = payload.details;
  }
}
