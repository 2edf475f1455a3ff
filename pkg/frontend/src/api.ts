// Thin fetch client for the annotation service. Every method maps to
// one endpoint; errors are rethrown as ApiError with the server's code.

import { ApiError } from "./types.js";
import type {
  ApiErrorPayload,
  DocumentDetail,
  DocumentSummary,
  EventType,
  InformationType,
  Resolution,
  SentenceRecord,
  SessionView,
} from "./types.js";

export interface AnnotationApi {
  listDocuments(): Promise<DocumentSummary[]>;
  getDocument(docId: string): Promise<DocumentDetail>;
  getSentences(docId: string): Promise<SentenceRecord[]>;
  createSession(docId: string, annotator: string): Promise<SessionView>;
  ackReading(sessionId: string): Promise<SessionView>;
  putEventLabel(
    sessionId: string,
    sentenceIndex: number,
    label: EventType,
  ): Promise<SessionView>;
  putInfoLabel(
    sessionId: string,
    sentenceIndex: number,
    label: InformationType,
    candidates?: InformationType[],
    override?: boolean,
  ): Promise<SessionView>;
  resolve(candidates: InformationType[]): Promise<Resolution>;
  help(label: string): Promise<string>;
}

export class HttpAnnotationApi implements AnnotationApi {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body = (await response.json()) as unknown;
    if (!response.ok) {
      throw new ApiError(response.status, body as ApiErrorPayload);
    }
    return body as T;
  }

  listDocuments(): Promise<DocumentSummary[]> {
    return this.request("/api/documents");
  }

  getDocument(docId: string): Promise<DocumentDetail> {
    return this.request(`/api/documents/${encodeURIComponent(docId)}`);
  }

  getSentences(docId: string): Promise<SentenceRecord[]> {
    return this.request(`/api/documents/${encodeURIComponent(docId)}/sentences`);
  }

  createSession(docId: string, annotator: string): Promise<SessionView> {
    return this.request("/api/sessions", {
      method: "POST",
      body: JSON.stringify({ doc_id: docId, annotator }),
    });
  }

  ackReading(sessionId: string): Promise<SessionView> {
    return this.request(`/api/sessions/${sessionId}/ack-reading`, {
      method: "POST",
    });
  }

  putEventLabel(
    sessionId: string,
    sentenceIndex: number,
    label: EventType,
  ): Promise<SessionView> {
    return this.request(`/api/sessions/${sessionId}/event-label`, {
      method: "PUT",
      body: JSON.stringify({ sentence_index: sentenceIndex, label }),
    });
  }

  putInfoLabel(
    sessionId: string,
    sentenceIndex: number,
    label: InformationType,
    candidates?: InformationType[],
    override = false,
  ): Promise<SessionView> {
    return this.request(`/api/sessions/${sessionId}/info-label`, {
      method: "PUT",
      body: JSON.stringify({
        sentence_index: sentenceIndex,
        label,
        candidates: candidates ?? null,
        override,
      }),
    });
  }

  resolve(candidates: InformationType[]): Promise<Resolution> {
    return this.request("/api/resolve", {
      method: "POST",
      body: JSON.stringify({ candidates }),
    });
  }

  async help(label: string): Promise<string> {
    const payload = await this.request<{ label: string; help: string }>(
      `/api/help/${encodeURIComponent(label)}`,
    );
    return payload.help;
  }
}
