/** Console view model: a pure fold over /state snapshots and the event
 * stream. The console never simulates; everything rendered traces back
 * to a snapshot field or a server event.
 */

import type { EventRecord, Intervention, ObjectRecord, Snapshot } from "./types.js";
import { UNKNOWN_CLASS } from "./types.js";

export type RobotStatus = "idle" | "active" | "override" | "docked";

export interface RobotView {
  id: string;
  position: [number, number, number];
  heading: number;
  battery: number;
  docked: boolean;
  carriedObject: string | null;
  lowBattery: boolean;
  status: RobotStatus;
}

export interface ObjectView {
  id: string;
  position: [number, number, number];
  classification: string;
  confidence: number;
  source: string;
  /** Unknown-class markers get the classify affordance in the UI. */
  needsClassify: boolean;
}

export type MissionStatus = "active" | "succeeded" | "failed" | "aborted" | "rejected";

export interface MissionView {
  id: string;
  robot: string;
  status: MissionStatus;
  detail?: string;
}

export type PendingStatus = "pending" | "applied" | "rejected";

export interface PendingIntervention {
  id: number;
  intervention: Intervention;
  status: PendingStatus;
  detail?: string;
  ackSeq?: number;
}

export interface ViewModel {
  t: number;
  seq: number;
  paused: boolean;
  mode: string;
  storeVersion: number;
  visibleVersion: number;
  robots: Record<string, RobotView>;
  stations: Record<string, { id: string; position: [number, number, number] }>;
  objects: Record<string, ObjectView>;
  links: string[]; // sorted "a|b" keys
  missions: Record<string, MissionView>;
  feed: EventRecord[];
  pending: PendingIntervention[];
  /** Sticky notice, e.g. a knowledge patch waiting for the refresh tick. */
  banner: string | null;
  knowledge: Snapshot["knowledge"];
}

const FEED_CAP = 200;

export function linkKey(a: string, b: string): string {
  return a < b ? `${a}|${b}` : `${b}|${a}`;
}

function objectView(rec: ObjectRecord): ObjectView {
  return {
    id: rec.object_id,
    position: rec.position,
    classification: rec.classification,
    confidence: rec.confidence,
    source: rec.source,
    needsClassify: rec.classification === UNKNOWN_CLASS,
  };
}

export function initViewModel(snapshot: Snapshot): ViewModel {
  const robots: Record<string, RobotView> = {};
  for (const [id, r] of Object.entries(snapshot.robots)) {
    robots[id] = {
      id,
      position: r.position,
      heading: r.heading,
      battery: r.battery,
      docked: r.docked,
      carriedObject: r.carried_object,
      lowBattery: false,
      status: r.docked ? "docked" : "idle",
    };
  }
  const stations: ViewModel["stations"] = {};
  for (const [id, s] of Object.entries(snapshot.stations)) {
    stations[id] = { id, position: s.position };
  }
  const objects: Record<string, ObjectView> = {};
  for (const [id, rec] of Object.entries(snapshot.objects)) {
    objects[id] = objectView(rec);
  }
  return {
    t: snapshot.t,
    seq: snapshot.seq,
    paused: snapshot.paused,
    mode: snapshot.mode,
    storeVersion: snapshot.store_version,
    visibleVersion: snapshot.visible_version,
    robots,
    stations,
    objects,
    links: [...snapshot.links].sort(),
    missions: {},
    feed: [],
    pending: [],
    banner: snapshot.store_version > snapshot.visible_version
      ? "knowledge patch active at next refresh tick"
      : null,
    knowledge: snapshot.knowledge,
  };
}

function robot(vm: ViewModel, id: unknown): RobotView | undefined {
  return typeof id === "string" ? vm.robots[id] : undefined;
}

function setMission(vm: ViewModel, event: EventRecord, status: MissionStatus): void {
  const id = event.payload["mission_id"];
  if (typeof id !== "string") return;
  const existing = vm.missions[id];
  vm.missions[id] = {
    id,
    robot: typeof event.payload["robot"] === "string"
      ? (event.payload["robot"] as string)
      : (existing?.robot ?? ""),
    status,
    detail: typeof event.payload["reason"] === "string"
      ? (event.payload["reason"] as string)
      : undefined,
  };
}

function reconcile(vm: ViewModel, event: EventRecord): void {
  for (const row of vm.pending) {
    if (row.status !== "pending") continue;
    if (matchesAck(row.intervention, event)) {
      row.status = "applied";
      row.ackSeq = event.seq;
    } else if (event.kind === "InterventionRejected") {
      row.status = "rejected";
      row.detail = typeof event.payload["reason"] === "string"
        ? (event.payload["reason"] as string)
        : "rejected";
      break; // rejections acknowledge one intervention
    }
  }
}

function matchesAck(intervention: Intervention, event: EventRecord): boolean {
  switch (intervention.type) {
    case "ClassifyObject":
      return (
        event.kind === "ClassificationCorrected" &&
        event.payload["object"] === intervention.object &&
        event.payload["class"] === intervention.class &&
        event.payload["source"] === "human"
      );
    case "DeployRobot":
      return event.kind === "DeployRobot" && event.payload["robot"] === intervention.robot;
    case "PatchKnowledge":
      return event.kind === "KnowledgePatched";
    case "AbortMission":
      return (
        event.kind === "MissionAborted" && event.payload["mission_id"] === intervention.mission
      );
  }
}

/** Fold one event into the view. Mutates and returns `vm`. */
export function applyEvent(vm: ViewModel, event: EventRecord): ViewModel {
  vm.seq = Math.max(vm.seq, event.seq);
  vm.t = Math.max(vm.t, event.t);
  vm.feed.push(event);
  if (vm.feed.length > FEED_CAP) vm.feed.splice(0, vm.feed.length - FEED_CAP);

  const p = event.payload;
  switch (event.kind) {
    case "MissionValidated":
      setMission(vm, event, "active");
      {
        const r = robot(vm, p["robot"]);
        if (r) r.status = "active";
      }
      break;
    case "MissionRejected":
      setMission(vm, event, "rejected");
      break;
    case "MissionSucceeded":
      setMission(vm, event, "succeeded");
      break;
    case "MissionFailed":
      setMission(vm, event, "failed");
      break;
    case "MissionAborted":
      setMission(vm, event, "aborted");
      break;
    case "ObjectDetected":
    case "ObservationRecorded": {
      const id = p["object"];
      const cls = p["class"];
      if (typeof id === "string" && typeof cls === "string") {
        const existing = vm.objects[id];
        // Human records are final; a sensed re-detection never downgrades one.
        if (!existing || existing.source !== "human") {
          vm.objects[id] = {
            id,
            position: existing?.position ?? [0, 0, 0],
            classification: cls,
            confidence: event.kind === "ObservationRecorded" ? 0.95 : 0.8,
            source: "self_sensed",
            needsClassify: cls === UNKNOWN_CLASS,
          };
        }
      }
      break;
    }
    case "ClassificationCorrected": {
      const id = p["object"];
      const cls = p["class"];
      if (typeof id === "string" && typeof cls === "string") {
        const existing = vm.objects[id];
        const human = p["source"] === "human";
        vm.objects[id] = {
          id,
          position: existing?.position ?? [0, 0, 0],
          classification: cls,
          confidence: human ? 1.0 : 0.95,
          source: human ? "human" : "self_sensed",
          needsClassify: cls === UNKNOWN_CLASS,
        };
      }
      break;
    }
    case "LowBattery": {
      const r = robot(vm, p["robot"]);
      if (r) {
        r.lowBattery = true;
        if (typeof p["battery"] === "number") r.battery = p["battery"];
      }
      break;
    }
    case "Override": {
      const r = robot(vm, p["robot"]);
      if (r) r.status = "override";
      break;
    }
    case "OverrideCompleted":
    case "Resume": {
      const r = robot(vm, p["robot"]);
      if (r) r.status = "active";
      break;
    }
    case "Docked": {
      const r = robot(vm, p["robot"]);
      if (r) {
        r.docked = true;
        r.status = "docked";
        r.lowBattery = false;
      }
      break;
    }
    case "Undocked": {
      const r = robot(vm, p["robot"]);
      if (r) {
        r.docked = false;
        if (r.status === "docked") r.status = "idle";
      }
      break;
    }
    case "VlcConnected": {
      if (typeof p["a"] === "string" && typeof p["b"] === "string") {
        const key = linkKey(p["a"], p["b"]);
        if (!vm.links.includes(key)) {
          vm.links.push(key);
          vm.links.sort();
        }
      }
      break;
    }
    case "VlcDisconnected": {
      if (typeof p["a"] === "string" && typeof p["b"] === "string") {
        const key = linkKey(p["a"], p["b"]);
        vm.links = vm.links.filter((k) => k !== key);
      }
      break;
    }
    case "KnowledgePatched":
      vm.storeVersion += 1;
      vm.banner = "knowledge patch active at next refresh tick";
      break;
    case "KnowledgeRefreshed":
      vm.visibleVersion = vm.storeVersion;
      vm.banner = null;
      break;
    default:
      break;
  }
  reconcile(vm, event);
  return vm;
}

let pendingCounter = 0;

/** Record an intervention the user just submitted as a pending row.
 * The affected marker/mission only changes when the server's
 * acknowledging event arrives through the feed.
 */
export function addPending(vm: ViewModel, intervention: Intervention): PendingIntervention {
  const row: PendingIntervention = { id: ++pendingCounter, intervention, status: "pending" };
  vm.pending.push(row);
  return row;
}

/** Mark a pending row rejected from a synchronous API error. */
export function rejectPending(vm: ViewModel, row: PendingIntervention, detail: string): void {
  row.status = "rejected";
  row.detail = detail;
}
