// Label universes in wire-name order. The order matters: number keys
// map to labels by position, and the backend declares its enums in
// exactly this order.

import type { EventType, InformationType } from "./types.js";

export const EVENT_TYPES: readonly EventType[] = [
  "current_event",
  "old_event",
  "risk_event",
  "general",
  "irrelevant",
];

export const INFO_TYPES: readonly InformationType[] = [
  "descriptive_epidemiology",
  "distribution",
  "preventive_control_measures",
  "transmission_pathway",
  "concern_risk_factors",
  "economic_political_consequences",
  "general_epidemiology",
];

export const DISPLAY_NAMES: Record<EventType | InformationType, string> = {
  current_event: "Current event",
  old_event: "Old event",
  risk_event: "Risk event",
  general: "General",
  irrelevant: "Irrelevant",
  descriptive_epidemiology: "Descriptive epidemiology",
  distribution: "Distribution",
  preventive_control_measures: "Preventive and control measures",
  transmission_pathway: "Transmission pathway",
  concern_risk_factors: "Concern and risk factors",
  economic_political_consequences: "Economic and political consequences",
  general_epidemiology: "General epidemiology",
};

/**
 * Information types the service will accept for a sentence whose event
 * label is `event`. Mirrors the server-side rules so illegal choices
 * are disabled before they can ever be submitted:
 * - irrelevant sentences take no information type at all (E1);
 * - general_epidemiology only exists under general (E2);
 * - under general, event description and transmission pathway are
 *   merged into general_epidemiology and therefore disabled (E3).
 */
export function allowedInfoTypes(
  event: EventType | undefined,
): readonly InformationType[] {
  if (event === undefined || event === "irrelevant") return [];
  if (event === "general") {
    return INFO_TYPES.filter(
      (label) =>
        label !== "descriptive_epidemiology" && label !== "transmission_pathway",
    );
  }
  return INFO_TYPES.filter((label) => label !== "general_epidemiology");
}

/** Soft-flagged combinations: legal but worth a second look (W1). */
export function isSoftFlagged(
  event: EventType,
  info: InformationType,
): boolean {
  return event === "general" && info !== "general_epidemiology";
}
