/** Wire types for the engine HTTP API. */

export interface RobotState {
  position: [number, number, number];
  heading: number;
  battery: number;
  docked: boolean;
  carried_object: string | null;
}

export interface StationState {
  position: [number, number, number];
}

export interface ObjectRecord {
  object_id: string;
  position: [number, number, number];
  classification: string;
  confidence: number;
  source: "self_sensed" | "transferred" | "human";
}

export interface GraphNode {
  id: string;
  kind: string;
  attributes: Record<string, unknown>;
}

export interface GraphEdge {
  from: string;
  to: string;
  relation: string;
}

export interface TaxonomyClass {
  name: string;
  primitives: string[];
  affordances: string[];
}

export interface Snapshot {
  t: number;
  paused: boolean;
  seq: number;
  mode: string;
  store_version: number;
  visible_version: number;
  robots: Record<string, RobotState>;
  stations: Record<string, StationState>;
  objects: Record<string, ObjectRecord>;
  links: string[]; // "a|b" pairs, sorted
  knowledge: {
    graph: { nodes: GraphNode[]; edges: GraphEdge[] };
    taxonomy: { classes: TaxonomyClass[] };
  };
}

export interface EventRecord {
  seq: number;
  t: number;
  kind: string;
  payload: Record<string, unknown>;
}

export type Intervention =
  | { type: "ClassifyObject"; object: string; class: string }
  | { type: "DeployRobot"; robot: string; mission: string }
  | { type: "PatchKnowledge"; patch: { version: number; ops: Record<string, unknown>[] } }
  | { type: "AbortMission"; mission: string };

export interface MissionVerdict {
  accepted?: boolean;
  reason?: string;
  queued?: boolean;
  [key: string]: unknown;
}

export const UNKNOWN_CLASS = "Unknown";
