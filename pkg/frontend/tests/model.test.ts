import { describe, expect, it } from "vitest";

import { allowedInfoTypes, EVENT_TYPES, INFO_TYPES } from "../src/labels.js";
import { AnnotatorModel } from "../src/model.js";
import type { EventType, InformationType } from "../src/types.js";
import { FakeServer, makeFixture, referenceVerdict } from "./fakeServer.js";

/** Deterministic RNG so failures replay exactly. */
function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function pick<T>(rng: () => number, items: readonly T[]): T {
  return items[Math.floor(rng() * items.length)];
}

async function startedModel(nSentences: number): Promise<{
  model: AnnotatorModel;
  server: FakeServer;
}> {
  const { doc, sentences } = makeFixture(nSentences);
  const server = new FakeServer(doc, sentences);
  const model = new AnnotatorModel(server);
  await model.start(doc.id, "tester");
  return { model, server };
}

/**
 * Drive one whole session choosing uniformly among whatever controls
 * the model currently enables. This is the point of the UI layer: a
 * user clicking only live controls can never produce a rejected
 * request.
 */
async function randomSession(seed: number): Promise<FakeServer> {
  const rng = mulberry32(seed);
  const nSentences = 1 + Math.floor(rng() * 6);
  const { model, server } = await startedModel(nSentences);

  await model.acknowledgeReading();
  await model.acknowledgeReading();

  // event pass: label in random order, occasionally relabeling
  while (model.phase === "event_pass") {
    const index = Math.floor(rng() * nSentences);
    model.selectSentence(index);
    const enabled = model.enabledEventLabels();
    expect(enabled.length).toBeGreaterThan(0);
    await model.assignEventLabel(pick(rng, enabled));
  }

  // info pass: use direct picks, multi-topic resolution, and overrides
  let guard = 0;
  while (model.phase === "info_pass" && guard < 200) {
    guard += 1;
    const pending = Array.from({ length: nSentences }, (_, i) => i).filter(
      (i) => model.enabledInfoLabels(i).length > 0 && model.infoLabelOf(i) === undefined,
    );
    if (pending.length === 0) break;
    const index = pick(rng, pending);
    model.selectSentence(index);
    const enabled = model.enabledInfoLabels(index);
    const nPicks = 1 + Math.floor(rng() * Math.min(3, enabled.length));
    const shuffled = [...enabled].sort(() => rng() - 0.5);
    for (const label of shuffled.slice(0, nPicks)) {
      model.toggleCandidate(label);
    }
    await model.confirmCandidates();
    if (model.helper) {
      const overridable = model.helper.candidates.filter(
        (label) => label !== model.helper!.suggestion.main,
      );
      if (overridable.length > 0 && rng() < 0.4) {
        model.requestOverride(pick(rng, overridable));
        await model.confirmOverride();
      } else {
        await model.acceptSuggestion();
      }
    }
  }
  expect(model.phase).toBe("complete");
  return server;
}

describe("constraint parity with the service rules", () => {
  it("enables exactly the info labels the service accepts", () => {
    for (const event of [...EVENT_TYPES, undefined]) {
      const enabled = new Set(allowedInfoTypes(event as EventType | undefined));
      for (const info of INFO_TYPES) {
        const legal =
          event !== undefined &&
          referenceVerdict(event as EventType, info) !== "error";
        expect(enabled.has(info)).toBe(legal);
      }
    }
  });

  it("never emits a request the service rejects, over 200 random sessions", async () => {
    for (let seed = 0; seed < 200; seed += 1) {
      const server = await randomSession(seed);
      expect(server.rejections).toEqual([]);
      // independent re-check of everything the fake accepted
      const eventAt = new Map<number, EventType>();
      for (const request of server.requests) {
        if (request.kind === "event") {
          eventAt.set(request.sentenceIndex, request.event!);
        } else {
          const event = eventAt.get(request.sentenceIndex);
          expect(event).toBeDefined();
          expect(referenceVerdict(event!, request.info!)).not.toBe("error");
        }
      }
    }
  }, 30_000);
});

describe("phase gating", () => {
  it("keeps label controls disabled until both readings are acknowledged", async () => {
    const { model } = await startedModel(2);
    expect(model.phase).toBe("metadata_read");
    expect(model.labelsEnabled).toBe(false);
    expect(model.enabledEventLabels()).toEqual([]);
    await model.acknowledgeReading();
    expect(model.phase).toBe("article_read");
    expect(model.enabledEventLabels()).toEqual([]);
    await model.acknowledgeReading();
    expect(model.phase).toBe("event_pass");
    expect(model.enabledEventLabels()).toEqual(EVENT_TYPES);
  });

  it("shows the publication date as the reference date", async () => {
    const { model } = await startedModel(1);
    expect(model.referenceDate).toBe("2019-09-09");
    expect(model.document?.publication_date).toBe("2019-09-09");
  });

  it("greys out irrelevant sentences during the info pass instead of hiding them", async () => {
    const { model } = await startedModel(2);
    await model.acknowledgeReading();
    await model.acknowledgeReading();
    model.selectSentence(0);
    await model.assignEventLabel("current_event");
    model.selectSentence(1);
    await model.assignEventLabel("irrelevant");
    expect(model.phase).toBe("info_pass");
    expect(model.isGreyedOut(1)).toBe(true);
    expect(model.isGreyedOut(0)).toBe(false);
    expect(model.enabledInfoLabels(1)).toEqual([]);
    expect(model.sentences).toHaveLength(2); // still rendered, not removed
  });

  it("ignores assignment calls for disabled labels instead of emitting them", async () => {
    const { model, server } = await startedModel(1);
    await model.assignEventLabel("current_event"); // still in metadata_read
    expect(server.requests).toEqual([]);
    await model.acknowledgeReading();
    await model.acknowledgeReading();
    await model.assignEventLabel("general");
    expect(model.phase).toBe("info_pass");
    await model.assignInfoLabel("descriptive_epidemiology"); // disabled under general
    expect(server.requests.filter((r) => r.kind === "info")).toEqual([]);
  });
});

describe("optimistic updates", () => {
  it("applies labels locally before the service confirms", async () => {
    const { model, server } = await startedModel(1);
    await model.acknowledgeReading();
    await model.acknowledgeReading();

    let observedDuringFlight: EventType | undefined;
    const original = server.putEventLabel.bind(server);
    server.putEventLabel = async (session, index, label) => {
      observedDuringFlight = model.eventLabelOf(0);
      return original(session, index, label);
    };
    await model.assignEventLabel("risk_event");
    expect(observedDuringFlight).toBe("risk_event");
    expect(model.lastRevision).toBe(1);
  });

  it("rolls back when the service rejects the write", async () => {
    const { model, server } = await startedModel(1);
    await model.acknowledgeReading();
    await model.acknowledgeReading();
    await model.assignEventLabel("current_event");

    server.putInfoLabel = async () => {
      throw new Error("boom");
    };
    await expect(model.assignInfoLabel("distribution")).rejects.toThrow("boom");
    expect(model.infoLabelOf(0)).toBeUndefined();
  });

  it("ignores stale session views by revision number", async () => {
    const { model } = await startedModel(2);
    await model.acknowledgeReading();
    await model.acknowledgeReading();
    await model.assignEventLabel("current_event");
    model.selectSentence(1);
    await model.assignEventLabel("old_event");
    const fresh = model.lastRevision;

    // a delayed duplicate of the first label response arrives now
    model["applyView"]({
      id: "session-1",
      doc_id: "doc-1",
      annotator_id: "tester",
      n_sentences: 2,
      reference_date: "2019-09-09",
      phase: "event_pass",
      event_labels: { "0": "current_event" },
      info_labels: {},
      candidates: {},
      overrides: [],
      pending_info_indices: [0],
      revision: 1,
    });
    expect(model.lastRevision).toBe(fresh);
    expect(model.eventLabelOf(1)).toBe("old_event");
  });
});
