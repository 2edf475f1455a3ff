// Keyboard-first label entry: digits map to labels by their position
// in wire-name order (1 = current_event / descriptive_epidemiology,
// and so on). Sentence throughput is the bottleneck in annotation
// campaigns, so everything reachable by click is reachable by key.

import { EVENT_TYPES, INFO_TYPES } from "./labels.js";
import type { AnnotatorModel } from "./model.js";
import type { EventType, InformationType } from "./types.js";

export function eventLabelForKey(digit: number): EventType | undefined {
  return EVENT_TYPES[digit - 1];
}

export function infoLabelForKey(digit: number): InformationType | undefined {
  return INFO_TYPES[digit - 1];
}

/**
 * Route one key press. Returns true when the key was consumed.
 * Digits assign labels (event pass) or toggle candidate picks (info
 * pass); Enter acknowledges reading or confirms the picks; arrows move
 * the sentence cursor. Keys for disabled labels fall through silently.
 */
export async function handleKey(model: AnnotatorModel, key: string): Promise<boolean> {
  if (key === "Enter") {
    if (model.phase === "metadata_read" || model.phase === "article_read") {
      await model.acknowledgeReading();
      return true;
    }
    if (model.phase === "info_pass") {
      await model.confirmCandidates();
      return true;
    }
    return false;
  }
  if (key === "ArrowDown" || key === "j") {
    model.selectNext(1);
    return true;
  }
  if (key === "ArrowUp" || key === "k") {
    model.selectNext(-1);
    return true;
  }
  if (!/^[1-9]$/.test(key)) return false;
  const digit = Number(key);

  if (model.phase === "event_pass") {
    const label = eventLabelForKey(digit);
    if (label && model.enabledEventLabels().includes(label)) {
      await model.assignEventLabel(label);
      model.selectNext(1);
      return true;
    }
    return false;
  }
  if (model.phase === "info_pass") {
    const label = infoLabelForKey(digit);
    if (label && model.enabledInfoLabels(model.selected).includes(label)) {
      model.toggleCandidate(label);
      return true;
    }
    return false;
  }
  return false;
}
