// Pure HTML rendering from model state. Event wiring happens in
// main.ts via delegation on data-* attributes, so everything here is
// testable as plain strings.

import { DISPLAY_NAMES, EVENT_TYPES, INFO_TYPES, isSoftFlagged } from "./labels.js";
import type { AnnotatorModel } from "./model.js";
import type { EventType, InformationType } from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderMetadataGate(model: AnnotatorModel): string {
  const doc = model.document;
  if (!doc) return "<p>Loading…</p>";
  const step =
    model.phase === "metadata_read"
      ? "Read the metadata, then acknowledge to open the article."
      : "Read the whole article (as many times as needed), then acknowledge to start labelling.";
  return `
<section class="metadata-gate">
  <div class="reference-banner">Date of reference: <strong>${escapeHtml(doc.publication_date)}</strong> — judge temporality as if this were today.</div>
  <h1>${escapeHtml(doc.title)}</h1>
  <p class="meta">${escapeHtml(doc.source)} · ${escapeHtml(doc.publication_date)}${doc.url ? ` · <a href="${escapeHtml(doc.url)}">source</a>` : ""}</p>
  ${model.phase === "article_read" ? `<article class="full-text">${escapeHtml(doc.body)}</article>` : ""}
  <p class="instruction">${step}</p>
  <button data-action="ack">Acknowledge (Enter)</button>
</section>`;
}

function eventButtons(model: AnnotatorModel, index: number): string {
  const enabled = model.enabledEventLabels();
  const current = model.eventLabelOf(index);
  return EVENT_TYPES.map((label: EventType, position: number) => {
    const isOn = current === label;
    const disabled = !enabled.includes(label) || index !== model.selected;
    return `<button data-action="event" data-label="${label}" ${disabled ? "disabled" : ""} class="label-btn${isOn ? " active" : ""}">${position + 1} ${DISPLAY_NAMES[label]}</button>`;
  }).join("");
}

function infoButtons(model: AnnotatorModel, index: number): string {
  const enabled = model.enabledInfoLabels(index);
  const current = model.infoLabelOf(index);
  const event = model.eventLabelOf(index);
  return INFO_TYPES.map((label: InformationType, position: number) => {
    const isOn = current === label;
    const picked = index === model.selected && model.pendingCandidates.includes(label);
    const disabled = !enabled.includes(label) || index !== model.selected;
    const soft = event && !disabled && isSoftFlagged(event, label) ? " soft-flag" : "";
    return `<button data-action="info" data-label="${label}" ${disabled ? "disabled" : ""} class="label-btn${isOn ? " active" : ""}${picked ? " picked" : ""}${soft}">${position + 1} ${DISPLAY_NAMES[label]}</button>`;
  }).join("");
}

export function renderSentences(model: AnnotatorModel): string {
  const rows = model.sentences.map((sentence) => {
    const index = sentence.index;
    const greyed = model.isGreyedOut(index);
    const selected = index === model.selected;
    const event = model.eventLabelOf(index);
    const info = model.infoLabelOf(index);
    const badges = [
      event ? `<span class="badge event">${DISPLAY_NAMES[event]}</span>` : "",
      info ? `<span class="badge info">${DISPLAY_NAMES[info]}</span>` : "",
    ].join("");
    const controls =
      model.phase === "event_pass"
        ? eventButtons(model, index)
        : model.phase === "info_pass" && !greyed
          ? infoButtons(model, index)
          : "";
    return `
<li class="sentence${selected ? " selected" : ""}${greyed ? " greyed" : ""}" data-action="select" data-index="${index}">
  <span class="text">${escapeHtml(sentence.text)}</span>
  ${badges}
  <div class="controls">${controls}</div>
</li>`;
  });
  return `<ol class="sentences">${rows.join("")}</ol>`;
}

export function renderHelper(model: AnnotatorModel): string {
  if (model.phase === "info_pass" && model.pendingCandidates.length > 1 && !model.helper) {
    return `<div class="helper"><button data-action="confirm-candidates">Resolve ${model.pendingCandidates.length} picked topics (Enter)</button></div>`;
  }
  const helper = model.helper;
  if (!helper) return "";
  const { suggestion, candidates, overridePick } = helper;
  const overrideButtons = candidates
    .filter((label) => label !== suggestion.main)
    .map(
      (label) =>
        `<button data-action="request-override" data-label="${label}">Keep ${DISPLAY_NAMES[label]} instead</button>`,
    )
    .join("");
  return `
<div class="helper open">
  <p>Suggested main label: <strong>${DISPLAY_NAMES[suggestion.main]}</strong>
  ${suggestion.ambiguous ? '<span class="badge ambiguous">ambiguous — confirm manually</span>' : ""}</p>
  <blockquote class="rationale">${escapeHtml(suggestion.rationale)}</blockquote>
  <button data-action="accept-suggestion">Accept ${DISPLAY_NAMES[suggestion.main]}</button>
  ${overrideButtons}
  ${
    overridePick !== null
      ? `<div class="override-confirm">Override the suggestion with ${DISPLAY_NAMES[overridePick]}? This is recorded. <button data-action="confirm-override">Confirm override</button></div>`
      : ""
  }
</div>`;
}

export function renderHelpPanel(model: AnnotatorModel): string {
  if (!model.helpTarget) return "";
  return `
<aside class="help-panel">
  <h2>${escapeHtml(model.helpTarget)}</h2>
  <pre class="help-text">${escapeHtml(model.helpText)}</pre>
</aside>`;
}

export function renderApp(model: AnnotatorModel): string {
  if (model.phase === "metadata_read" || model.phase === "article_read") {
    return renderMetadataGate(model) + renderHelpPanel(model);
  }
  const banner = model.document
    ? `<div class="reference-banner">Date of reference: <strong>${escapeHtml(model.referenceDate)}</strong></div>`
    : "";
  const phaseNote =
    model.phase === "event_pass"
      ? "Event pass: label every sentence (keys 1–5)."
      : model.phase === "info_pass"
        ? "Information pass: label every non-irrelevant sentence (keys 1–7; pick several to resolve a multi-topic sentence)."
        : "Session complete.";
  return `${banner}<p class="phase">${phaseNote}</p>${renderSentences(model)}${renderHelper(model)}${renderHelpPanel(model)}`;
}
