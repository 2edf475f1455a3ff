// Annotator view model: one session, one document, phase-gated controls.
//
// The invariant this module exists for: the model never emits a request
// the service would reject as an error. Controls that would produce an
// illegal combination are not enabled in the first place, so submission
// paths only ever see legal picks. Label writes apply optimistically
// and reconcile against the session view (and its revision number)
// returned by the service; a rejected write rolls the local state back.

import type { AnnotationApi } from "./api.js";
import { allowedInfoTypes, EVENT_TYPES } from "./labels.js";
import type {
  DocumentDetail,
  EventType,
  InformationType,
  Phase,
  Resolution,
  SentenceRecord,
  SessionView,
} from "./types.js";

export interface HelperState {
  candidates: InformationType[];
  suggestion: Resolution;
  /** Set when the annotator asked to deviate from the suggestion. */
  overridePick: InformationType | null;
}

export interface ModelSnapshot {
  phase: Phase;
  selected: number;
  eventLabels: ReadonlyMap<number, EventType>;
  infoLabels: ReadonlyMap<number, InformationType>;
}

export class AnnotatorModel {
  document: DocumentDetail | null = null;
  sentences: SentenceRecord[] = [];
  sessionId = "";
  phase: Phase = "metadata_read";
  referenceDate = "";
  selected = 0;
  helpTarget: string | null = null;
  helpText = "";
  /** Multi-topic picks for the selected sentence, before resolution. */
  pendingCandidates: InformationType[] = [];
  helper: HelperState | null = null;
  lastRevision = 0;

  private eventLabels = new Map<number, EventType>();
  private infoLabels = new Map<number, InformationType>();
  private listeners: Array<() => void> = [];

  constructor(private readonly api: AnnotationApi) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  // -- lifecycle ---------------------------------------------------------

  async start(docId: string, annotator: string): Promise<void> {
    this.document = await this.api.getDocument(docId);
    this.sentences = await this.api.getSentences(docId);
    const view = await this.api.createSession(docId, annotator);
    this.applyView(view);
    this.selected = 0;
    this.notify();
  }

  /** Acknowledge the current reading step (metadata, then full article). */
  async acknowledgeReading(): Promise<void> {
    if (this.phase !== "metadata_read" && this.phase !== "article_read") {
      return; // control is not shown outside the reading phases
    }
    this.applyView(await this.api.ackReading(this.sessionId));
    this.notify();
  }

  private applyView(view: SessionView): void {
    if (view.revision !== undefined && view.revision < this.lastRevision) {
      return; // stale response from an out-of-order reply
    }
    if (view.revision !== undefined) this.lastRevision = view.revision;
    this.sessionId = view.id;
    this.phase = view.phase;
    this.referenceDate = view.reference_date;
    this.eventLabels = new Map(
      Object.entries(view.event_labels).map(([i, label]) => [Number(i), label]),
    );
    this.infoLabels = new Map(
      Object.entries(view.info_labels).map(([i, label]) => [Number(i), label]),
    );
  }

  // -- derived state -----------------------------------------------------

  get labelsEnabled(): boolean {
    return this.phase === "event_pass" || this.phase === "info_pass";
  }

  eventLabelOf(index: number): EventType | undefined {
    return this.eventLabels.get(index);
  }

  infoLabelOf(index: number): InformationType | undefined {
    return this.infoLabels.get(index);
  }

  /** Event controls are live only during the event pass. */
  enabledEventLabels(): readonly EventType[] {
    return this.phase === "event_pass" ? EVENT_TYPES : [];
  }

  /**
   * Information controls for one sentence, already filtered down to
   * what the service will accept for its event label. Empty for
   * irrelevant sentences (greyed out, kept visible for context).
   */
  enabledInfoLabels(index: number): readonly InformationType[] {
    if (this.phase !== "info_pass") return [];
    return allowedInfoTypes(this.eventLabels.get(index));
  }

  /** Irrelevant sentences stay on screen but take no info label. */
  isGreyedOut(index: number): boolean {
    return (
      this.phase === "info_pass" && this.eventLabels.get(index) === "irrelevant"
    );
  }

  snapshot(): ModelSnapshot {
    return {
      phase: this.phase,
      selected: this.selected,
      eventLabels: new Map(this.eventLabels),
      infoLabels: new Map(this.infoLabels),
    };
  }

  // -- selection and help --------------------------------------------------

  selectSentence(index: number): void {
    if (index < 0 || index >= this.sentences.length) return;
    this.selected = index;
    this.pendingCandidates = [];
    this.helper = null;
    this.notify();
  }

  selectNext(delta = 1): void {
    this.selectSentence(this.selected + delta);
  }

  async showHelp(label: string): Promise<void> {
    this.helpTarget = label;
    this.helpText = await this.api.help(label);
    this.notify();
  }

  // -- event pass ----------------------------------------------------------

  async assignEventLabel(label: EventType): Promise<void> {
    if (!this.enabledEventLabels().includes(label)) return;
    const index = this.selected;
    const before = new Map(this.eventLabels);
    this.eventLabels.set(index, label); // optimistic
    this.notify();
    try {
      this.applyView(await this.api.putEventLabel(this.sessionId, index, label));
    } catch (error) {
      this.eventLabels = before;
      throw error;
    } finally {
      this.notify();
    }
  }

  // -- info pass -----------------------------------------------------------

  /** Single-topic shortcut: assign one information label directly. */
  async assignInfoLabel(label: InformationType): Promise<void> {
    if (!this.enabledInfoLabels(this.selected).includes(label)) return;
    await this.submitInfoLabel(this.selected, label);
  }

  /**
   * Toggle a label in the multi-topic candidate set. The helper opens
   * once the set is resolved via confirmCandidates().
   *
   * general_epidemiology is exclusive: it merges the event-description
   * and transmission-pathway content of a General sentence, so it never
   * co-occurs with other picks and never reaches the resolver. Picking
   * it clears the set; picking anything else drops it.
   */
  toggleCandidate(label: InformationType): void {
    if (!this.enabledInfoLabels(this.selected).includes(label)) return;
    if (label === "general_epidemiology") {
      this.pendingCandidates = this.pendingCandidates.includes(label) ? [] : [label];
    } else {
      const picks = this.pendingCandidates.filter(
        (pick) => pick !== "general_epidemiology",
      );
      this.pendingCandidates = picks.includes(label)
        ? picks.filter((pick) => pick !== label)
        : [...picks, label];
    }
    this.helper = null;
    this.notify();
  }

  /**
   * Resolve the pending picks. A single pick assigns directly (the
   * helper stays hidden); two or more ask the service for the main
   * label and open the helper with its rationale.
   */
  async confirmCandidates(): Promise<void> {
    const picks = [...this.pendingCandidates];
    if (picks.length === 0) return;
    if (picks.length === 1) {
      await this.submitInfoLabel(this.selected, picks[0]);
      this.pendingCandidates = [];
      return;
    }
    const suggestion = await this.api.resolve(picks);
    this.helper = { candidates: picks, suggestion, overridePick: null };
    this.notify();
  }

  /** Accept the helper's suggested main label. */
  async acceptSuggestion(): Promise<void> {
    if (!this.helper) return;
    const { candidates, suggestion } = this.helper;
    await this.submitInfoLabel(this.selected, suggestion.main, candidates, false);
    this.helper = null;
    this.pendingCandidates = [];
    this.notify();
  }

  /** First override click: arm the confirmation step. */
  requestOverride(label: InformationType): void {
    if (!this.helper || !this.helper.candidates.includes(label)) return;
    this.helper = { ...this.helper, overridePick: label };
    this.notify();
  }

  /** Second, explicit confirmation actually records the override. */
  async confirmOverride(): Promise<void> {
    if (!this.helper || this.helper.overridePick === null) return;
    const { candidates, overridePick } = this.helper;
    await this.submitInfoLabel(this.selected, overridePick, candidates, true);
    this.helper = null;
    this.pendingCandidates = [];
    this.notify();
  }

  private async submitInfoLabel(
    index: number,
    label: InformationType,
    candidates?: InformationType[],
    override = false,
  ): Promise<void> {
    const before = new Map(this.infoLabels);
    this.infoLabels.set(index, label); // optimistic
    this.notify();
    try {
      this.applyView(
        await this.api.putInfoLabel(this.sessionId, index, label, candidates, override),
      );
    } catch (error) {
      this.infoLabels = before;
      throw error;
    } finally {
      this.notify();
    }
  }
}
