/** Top-down 2D map. The z coordinate is shown as a text label rather
 * than rendered; mission logic is planar.
 *
 * Rendering is split in two: a pure function from view model to a list
 * of draw primitives (testable without a canvas), and a small canvas
 * painter for those primitives.
 */

import type { ViewModel } from "./model.js";

export type Primitive =
  | { kind: "robot"; id: string; x: number; y: number; heading: number; lowBattery: boolean; docked: boolean; label: string }
  | { kind: "station"; id: string; x: number; y: number }
  | { kind: "object"; id: string; x: number; y: number; classification: string; needsClassify: boolean; label: string }
  | { kind: "link"; a: string; b: string; x1: number; y1: number; x2: number; y2: number };

function planar(position: [number, number, number]): { x: number; y: number } {
  return { x: position[0], y: position[1] };
}

export function mapPrimitives(vm: ViewModel): Primitive[] {
  const prims: Primitive[] = [];
  const anchors: Record<string, { x: number; y: number }> = {};

  for (const station of Object.values(vm.stations)) {
    const { x, y } = planar(station.position);
    anchors[station.id] = { x, y };
    prims.push({ kind: "station", id: station.id, x, y });
  }
  for (const obj of Object.values(vm.objects)) {
    const { x, y } = planar(obj.position);
    prims.push({
      kind: "object",
      id: obj.id,
      x,
      y,
      classification: obj.classification,
      needsClassify: obj.needsClassify,
      label: `${obj.id}: ${obj.classification} z=${obj.position[2].toFixed(1)}`,
    });
  }
  for (const robot of Object.values(vm.robots)) {
    const { x, y } = planar(robot.position);
    anchors[robot.id] = { x, y };
    prims.push({
      kind: "robot",
      id: robot.id,
      x,
      y,
      heading: robot.heading,
      lowBattery: robot.lowBattery,
      docked: robot.docked,
      label: `${robot.id} ${robot.battery.toFixed(0)}% z=${robot.position[2].toFixed(1)}`,
    });
  }
  for (const key of vm.links) {
    const [a, b] = key.split("|") as [string, string];
    const pa = anchors[a];
    const pb = anchors[b];
    if (pa && pb) {
      prims.push({ kind: "link", a, b, x1: pa.x, y1: pa.y, x2: pb.x, y2: pb.y });
    }
  }
  return prims;
}

export interface Viewport {
  width: number;
  height: number;
  /** world meters per pixel */
  scale: number;
  centerX: number;
  centerY: number;
}

export function worldToScreen(vp: Viewport, x: number, y: number): { sx: number; sy: number } {
  return {
    sx: vp.width / 2 + (x - vp.centerX) / vp.scale,
    sy: vp.height / 2 - (y - vp.centerY) / vp.scale,
  };
}

const COLORS = {
  robot: "#3fa7d6",
  robotLow: "#e0565b",
  station: "#9a8f5f",
  object: "#7fb069",
  unknown: "#f2b134",
  link: "#59cd90",
};

export function drawMap(ctx: CanvasRenderingContext2D, vp: Viewport, prims: Primitive[]): void {
  ctx.clearRect(0, 0, vp.width, vp.height);
  ctx.font = "11px sans-serif";
  for (const p of prims) {
    if (p.kind === "link") {
      const a = worldToScreen(vp, p.x1, p.y1);
      const b = worldToScreen(vp, p.x2, p.y2);
      ctx.strokeStyle = COLORS.link;
      ctx.setLineDash([4, 3]);
      ctx.beginPath();
      ctx.moveTo(a.sx, a.sy);
      ctx.lineTo(b.sx, b.sy);
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }
  for (const p of prims) {
    if (p.kind === "station") {
      const { sx, sy } = worldToScreen(vp, p.x, p.y);
      ctx.fillStyle = COLORS.station;
      ctx.fillRect(sx - 5, sy - 5, 10, 10);
      ctx.fillText(p.id, sx + 8, sy + 4);
    } else if (p.kind === "object") {
      const { sx, sy } = worldToScreen(vp, p.x, p.y);
      ctx.fillStyle = p.needsClassify ? COLORS.unknown : COLORS.object;
      ctx.beginPath();
      ctx.arc(sx, sy, 4, 0, Math.PI * 2);
      ctx.fill();
      ctx.fillText(p.label, sx + 7, sy + 4);
    } else if (p.kind === "robot") {
      const { sx, sy } = worldToScreen(vp, p.x, p.y);
      ctx.fillStyle = p.lowBattery ? COLORS.robotLow : COLORS.robot;
      ctx.save();
      ctx.translate(sx, sy);
      ctx.rotate(-p.heading);
      ctx.beginPath();
      ctx.moveTo(8, 0);
      ctx.lineTo(-5, 5);
      ctx.lineTo(-5, -5);
      ctx.closePath();
      ctx.fill();
      ctx.restore();
      ctx.fillText(p.label, sx + 10, sy - 6);
    }
  }
}
