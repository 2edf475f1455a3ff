// Bootstrap: pick a document and annotator, run the session loop.

import { HttpAnnotationApi } from "./api.js";
import { handleKey } from "./keyboard.js";
import { AnnotatorModel } from "./model.js";
import { renderApp } from "./render.js";
import type { EventType, InformationType } from "./types.js";

const IGNORED_TAGS = new Set(["INPUT", "TEXTAREA", "SELECT"]);

function showError(root: HTMLElement, message: string): void {
  const note = document.createElement("div");
  note.className = "error-toast";
  note.textContent = message;
  root.prepend(note);
  setTimeout(() => note.remove(), 4000);
}

async function pickDocument(api: HttpAnnotationApi): Promise<string | null> {
  const docs = await api.listDocuments();
  if (docs.length === 0) return null;
  const fromHash = window.location.hash.replace(/^#/, "");
  if (fromHash && docs.some((doc) => doc.id === fromHash)) return fromHash;
  return docs[0].id;
}

export async function boot(root: HTMLElement): Promise<void> {
  const api = new HttpAnnotationApi("");
  const annotator =
    new URLSearchParams(window.location.search).get("annotator") ??
    window.prompt("Annotator id?") ??
    "anonymous";
  const docId = await pickDocument(api);
  if (docId === null) {
    root.innerHTML = "<p>No documents in the store. Ingest a corpus first.</p>";
    return;
  }

  const model = new AnnotatorModel(api);
  const redraw = () => {
    root.innerHTML = renderApp(model);
  };
  model.onChange(redraw);
  await model.start(docId, annotator);
  redraw();

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target || target.hasAttribute("disabled")) return;
    const action = target.dataset.action;
    const label = target.dataset.label;
    const run = async () => {
      switch (action) {
        case "ack":
          return model.acknowledgeReading();
        case "select":
          return model.selectSentence(Number(target.dataset.index));
        case "event":
          return model.assignEventLabel(label as EventType);
        case "info":
          return model.toggleCandidate(label as InformationType);
        case "confirm-candidates":
          return model.confirmCandidates();
        case "accept-suggestion":
          return model.acceptSuggestion();
        case "request-override":
          return model.requestOverride(label as InformationType);
        case "confirm-override":
          return model.confirmOverride();
      }
    };
    run().catch((error: unknown) => {
      showError(root, error instanceof Error ? error.message : String(error));
    });
  });

  window.addEventListener("keydown", (event) => {
    const target = event.target as HTMLElement | null;
    if (target && (IGNORED_TAGS.has(target.tagName) || target.isContentEditable)) {
      return;
    }
    handleKey(model, event.key)
      .then((consumed) => {
        if (consumed) event.preventDefault();
      })
      .catch((error: unknown) => {
        showError(root, error instanceof Error ? error.message : String(error));
      });
  });
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    void boot(root);
  }
}
