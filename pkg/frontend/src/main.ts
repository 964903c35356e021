/** Browser entry point: wires the API client, the gap-free event feed,
 * the view-model fold, and the DOM together.
 */

import { ApiClient, ApiError } from "./api.js";
import { EventFeed, pollingTransport, sseTransport } from "./feed.js";
import {
  addPending,
  applyEvent,
  initViewModel,
  rejectPending,
  type ViewModel,
} from "./model.js";
import { drawMap, mapPrimitives, type Viewport } from "./map.js";
import type { Intervention } from "./types.js";

const api = new ApiClient("");
let vm: ViewModel | null = null;
let feed: EventFeed | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function render(): void {
  if (!vm) return;
  const canvas = el<HTMLCanvasElement>("map");
  const ctx = canvas.getContext("2d");
  if (ctx) {
    const vp: Viewport = {
      width: canvas.width,
      height: canvas.height,
      scale: 0.12,
      centerX: 0,
      centerY: 0,
    };
    drawMap(ctx, vp, mapPrimitives(vm));
  }

  el("clock").textContent = `t=${vm.t.toFixed(1)}s seq=${vm.seq} ${vm.paused ? "PAUSED" : "running"} mode=${vm.mode}`;

  el("robots").innerHTML = Object.values(vm.robots)
    .map((r) => {
      const cls = r.lowBattery ? "gauge warn" : "gauge";
      return `<div class="robot"><b>${r.id}</b> ${r.status}${r.docked ? " (docked)" : ""}
        <div class="${cls}"><span style="width:${Math.max(0, Math.min(100, r.battery))}%"></span></div>
        <small>${r.battery.toFixed(1)}%</small></div>`;
    })
    .join("");

  el("links").textContent = vm.links.length ? vm.links.join("   ") : "no optical links";

  el("objects").innerHTML = Object.values(vm.objects)
    .map((o) => {
      const flag = o.needsClassify
        ? ` <button data-classify="${o.id}">classify</button>`
        : "";
      return `<li>${o.id}: <b>${o.classification}</b> (${o.confidence.toFixed(2)}, ${o.source})${flag}</li>`;
    })
    .join("");

  el("missions").innerHTML = Object.values(vm.missions)
    .map((m) => `<li>${m.id} [${m.robot}] ${m.status}${m.detail ? ` - ${m.detail}` : ""}</li>`)
    .join("");

  el("pending").innerHTML = vm.pending
    .map(
      (p) =>
        `<li>${p.intervention.type} ${p.status}${p.ackSeq ? ` @seq ${p.ackSeq}` : ""}${p.detail ? ` - ${p.detail}` : ""}</li>`,
    )
    .join("");

  el("feed").innerHTML = vm.feed
    .slice(-40)
    .reverse()
    .map((e) => `<li>${e.seq} t=${e.t.toFixed(1)} <b>${e.kind}</b> ${JSON.stringify(e.payload)}</li>`)
    .join("");

  const banner = el("banner");
  banner.textContent = vm.banner ?? "";
  banner.style.display = vm.banner ? "block" : "none";
}

async function connect(): Promise<void> {
  const disconnected = el("disconnected");
  try {
    const snapshot = await api.getState();
    vm = initViewModel(snapshot);
    disconnected.style.display = "none";
    feed?.disconnect();
    const transport =
      typeof EventSource !== "undefined"
        ? sseTransport("")
        : pollingTransport((since) => api.getEvents(since));
    feed = new EventFeed(
      transport,
      (since) => api.getEvents(since),
      (event) => {
        if (vm) {
          applyEvent(vm, event);
          render();
        }
      },
      snapshot.seq,
    );
    feed.connect();
    render();
  } catch {
    disconnected.style.display = "block";
    setTimeout(() => void connect(), 1500);
  }
}

async function sendIntervention(intervention: Intervention): Promise<void> {
  if (!vm) return;
  const row = addPending(vm, intervention);
  render();
  try {
    await api.submitIntervention(intervention);
  } catch (err) {
    rejectPending(vm, row, err instanceof ApiError ? err.message : String(err));
  }
  render();
}

function wireForms(): void {
  el("mission-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const robot = el<HTMLInputElement>("mission-robot").value.trim();
    const text = el<HTMLTextAreaElement>("mission-text").value;
    void api
      .submitMission(robot, text)
      .then((verdict) => {
        el("mission-result").textContent = JSON.stringify(verdict);
      })
      .catch((err: unknown) => {
        el("mission-result").textContent =
          err instanceof ApiError ? err.message : String(err);
      });
  });

  el("objects").addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    const objectId = target.dataset["classify"];
    if (!objectId) return;
    const cls = prompt(`class for ${objectId}?`);
    if (cls) void sendIntervention({ type: "ClassifyObject", object: objectId, class: cls });
  });

  el("classify-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void sendIntervention({
      type: "ClassifyObject",
      object: el<HTMLInputElement>("classify-object").value.trim(),
      class: el<HTMLInputElement>("classify-class").value.trim(),
    });
  });

  el("deploy-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void sendIntervention({
      type: "DeployRobot",
      robot: el<HTMLInputElement>("deploy-robot").value.trim(),
      mission: el<HTMLTextAreaElement>("deploy-mission").value,
    });
  });

  el("abort-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void sendIntervention({
      type: "AbortMission",
      mission: el<HTMLInputElement>("abort-mission").value.trim(),
    });
  });

  el("patch-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    try {
      const patch = JSON.parse(el<HTMLTextAreaElement>("patch-json").value) as {
        version: number;
        ops: Record<string, unknown>[];
      };
      void sendIntervention({ type: "PatchKnowledge", patch });
    } catch (err) {
      el("mission-result").textContent = `bad patch JSON: ${String(err)}`;
    }
  });

  el("pause").addEventListener("click", () => void api.control("pause").then(refreshPaused));
  el("resume").addEventListener("click", () => void api.control("resume").then(refreshPaused));
}

function refreshPaused(result: { paused: boolean }): void {
  if (vm) {
    vm.paused = result.paused;
    render();
  }
}

window.addEventListener("DOMContentLoaded", () => {
  wireForms();
  void connect();
});
