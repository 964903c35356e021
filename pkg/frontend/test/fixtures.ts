import type { EventRecord, Snapshot } from "../src/types";

export function snapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    t: 0.0,
    paused: true,
    seq: 1,
    mode: "FULL",
    store_version: 0,
    visible_version: 0,
    robots: {
      alpha: {
        position: [-20, -5, -6],
        heading: 0,
        battery: 90,
        docked: false,
        carried_object: null,
      },
      beta: {
        position: [-24, -9, -2],
        heading: 0,
        battery: 100,
        docked: true,
        carried_object: null,
      },
    },
    stations: { dock1: { position: [-25, -8, -2] } },
    objects: {
      sphere_1: {
        object_id: "sphere_1",
        position: [-10, -4.5, -8],
        classification: "sphere",
        confidence: 0.8,
        source: "self_sensed",
      },
      o7: {
        object_id: "o7",
        position: [4, 2, -7],
        classification: "Unknown",
        confidence: 0.0,
        source: "self_sensed",
      },
    },
    links: [],
    knowledge: { graph: { nodes: [], edges: [] }, taxonomy: { classes: [] } },
    ...overrides,
  };
}

export function event(
  seq: number,
  kind: string,
  payload: Record<string, unknown>,
  t = seq * 0.1,
): EventRecord {
  return { seq, t, kind, payload };
}
