import { describe, expect, it } from "vitest";

import {
  addPending,
  applyEvent,
  initViewModel,
  rejectPending,
  type ViewModel,
} from "../src/model";
import type { EventRecord } from "../src/types";
import { event, snapshot } from "./fixtures";

function fold(vm: ViewModel, events: EventRecord[]): ViewModel {
  for (const e of events) applyEvent(vm, e);
  return vm;
}

describe("initViewModel", () => {
  it("mirrors the snapshot without inventing state", () => {
    const vm = initViewModel(snapshot());
    expect(Object.keys(vm.robots).sort()).toEqual(["alpha", "beta"]);
    expect(vm.robots["beta"]?.status).toBe("docked");
    expect(vm.robots["alpha"]?.lowBattery).toBe(false);
    expect(vm.links).toEqual([]);
    expect(vm.missions).toEqual({});
  });

  it("flags Unknown-class objects for classification", () => {
    const vm = initViewModel(snapshot());
    expect(vm.objects["o7"]?.needsClassify).toBe(true);
    expect(vm.objects["sphere_1"]?.needsClassify).toBe(false);
  });

  it("shows the refresh banner when a patch is committed but not visible", () => {
    const vm = initViewModel(snapshot({ store_version: 2, visible_version: 1 }));
    expect(vm.banner).toMatch(/refresh/);
  });
});

describe("event folding", () => {
  it("LowBattery puts the robot gauge in the warning state", () => {
    const vm = initViewModel(snapshot());
    applyEvent(vm, event(2, "LowBattery", { robot: "alpha", battery: 15.0 }));
    expect(vm.robots["alpha"]?.lowBattery).toBe(true);
    expect(vm.robots["alpha"]?.battery).toBe(15.0);
  });

  it("VlcConnected draws a link edge and VlcDisconnected removes it", () => {
    const vm = initViewModel(snapshot());
    applyEvent(vm, event(2, "VlcConnected", { a: "beta", b: "alpha", quality: 0.4 }));
    expect(vm.links).toEqual(["alpha|beta"]);
    applyEvent(vm, event(3, "VlcConnected", { a: "beta", b: "alpha", quality: 0.4 }));
    expect(vm.links).toEqual(["alpha|beta"]); // no duplicates
    applyEvent(vm, event(4, "VlcDisconnected", { a: "alpha", b: "beta", state: "Misaligned" }));
    expect(vm.links).toEqual([]);
  });

  it("tracks mission lifecycle", () => {
    const vm = initViewModel(snapshot());
    fold(vm, [
      event(2, "MissionValidated", { robot: "alpha", mission_id: "m1", plan_id: "m1" }),
      event(3, "MissionSucceeded", { robot: "alpha", mission_id: "m1", plan_id: "m1" }),
      event(4, "MissionRejected", { robot: "beta", mission_id: "m2", reason: "nope" }),
    ]);
    expect(vm.missions["m1"]?.status).toBe("succeeded");
    expect(vm.missions["m2"]?.status).toBe("rejected");
    expect(vm.missions["m2"]?.detail).toBe("nope");
  });

  it("ClassificationCorrected from a human becomes final", () => {
    const vm = initViewModel(snapshot());
    applyEvent(
      vm,
      event(2, "ClassificationCorrected", {
        object: "o7",
        class: "torus",
        previous: "Unknown",
        source: "human",
      }),
    );
    expect(vm.objects["o7"]?.classification).toBe("torus");
    expect(vm.objects["o7"]?.source).toBe("human");
    expect(vm.objects["o7"]?.needsClassify).toBe(false);
    // A later passive re-detection must not downgrade the human record.
    applyEvent(vm, event(3, "ObjectDetected", { robot: "alpha", object: "o7", class: "cube" }));
    expect(vm.objects["o7"]?.classification).toBe("torus");
    expect(vm.objects["o7"]?.source).toBe("human");
  });

  it("KnowledgePatched raises the refresh banner until KnowledgeRefreshed", () => {
    const vm = initViewModel(snapshot());
    applyEvent(vm, event(2, "KnowledgePatched", { version: 1 }));
    expect(vm.banner).toMatch(/refresh/);
    expect(vm.storeVersion).toBe(1);
    applyEvent(vm, event(3, "KnowledgeRefreshed", { version: 1 }));
    expect(vm.banner).toBeNull();
    expect(vm.visibleVersion).toBe(1);
  });

  it("Override and Resume move the robot status", () => {
    const vm = initViewModel(snapshot());
    fold(vm, [
      event(2, "MissionValidated", { robot: "alpha", mission_id: "m1" }),
      event(3, "Override", { robot: "alpha", plan_id: "safety", reason: "low battery" }),
    ]);
    expect(vm.robots["alpha"]?.status).toBe("override");
    applyEvent(vm, event(4, "Resume", { robot: "alpha", plan_id: "m1" }));
    expect(vm.robots["alpha"]?.status).toBe("active");
  });
});

describe("intervention reconciliation", () => {
  it("shows applied only after the acknowledging server event", () => {
    const vm = initViewModel(snapshot());
    const row = addPending(vm, { type: "ClassifyObject", object: "o7", class: "torus" });
    expect(row.status).toBe("pending");
    // Unrelated event: still pending.
    applyEvent(vm, event(2, "VlcConnected", { a: "alpha", b: "beta", quality: 0.1 }));
    expect(row.status).toBe("pending");
    applyEvent(
      vm,
      event(3, "ClassificationCorrected", {
        object: "o7",
        class: "torus",
        previous: "Unknown",
        source: "human",
      }),
    );
    expect(row.status).toBe("applied");
    expect(row.ackSeq).toBe(3);
    // The marker change came from the event, same fold.
    expect(vm.objects["o7"]?.classification).toBe("torus");
  });

  it("marks the row rejected on an InterventionRejected event", () => {
    const vm = initViewModel(snapshot());
    const row = addPending(vm, { type: "AbortMission", mission: "ghost" });
    applyEvent(vm, event(2, "InterventionRejected", { reason: "unknown mission ghost" }));
    expect(row.status).toBe("rejected");
    expect(row.detail).toMatch(/ghost/);
  });

  it("marks the row rejected on a synchronous API error", () => {
    const vm = initViewModel(snapshot());
    const row = addPending(vm, { type: "DeployRobot", robot: "omega", mission: "x" });
    rejectPending(vm, row, "unknown robot omega");
    expect(row.status).toBe("rejected");
  });

  it("DeployRobot reconciles against the DeployRobot event", () => {
    const vm = initViewModel(snapshot());
    const row = addPending(vm, {
      type: "DeployRobot",
      robot: "beta",
      mission: "mission m normal\nbeta undock\n",
    });
    applyEvent(vm, event(2, "DeployRobot", { robot: "beta", source: "api" }));
    expect(row.status).toBe("applied");
  });
});

describe("reload reconstruction", () => {
  it("a client joining later converges to the same view", () => {
    const events: EventRecord[] = [
      event(2, "MissionValidated", { robot: "alpha", mission_id: "m1" }),
      event(3, "VlcConnected", { a: "alpha", b: "dock1", quality: 0.3 }),
      event(4, "LowBattery", { robot: "alpha", battery: 15.0 }),
      event(5, "ClassificationCorrected", {
        object: "o7",
        class: "torus",
        previous: "Unknown",
        source: "human",
      }),
      event(6, "MissionAborted", { robot: "alpha", mission_id: "m1" }),
    ];
    const early = fold(initViewModel(snapshot()), events);
    const late = fold(initViewModel(snapshot({ seq: 3 })), events.slice(2));
    // Fields derivable from snapshot + folded events must agree; the
    // late joiner saw seq 2-3 only through its snapshot, so only
    // event-carried state from seq >= 4 is compared.
    expect(late.robots["alpha"]?.lowBattery).toBe(early.robots["alpha"]?.lowBattery);
    expect(late.objects["o7"]).toEqual(early.objects["o7"]);
    expect(late.missions["m1"]?.status).toBe(early.missions["m1"]?.status);
    expect(late.seq).toBe(early.seq);
  });
});
