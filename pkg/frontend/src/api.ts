/** Thin typed client for the engine HTTP API.
 *
 * The fetch implementation is injectable so tests can run against a
 * scripted transport; browsers pass the real one.
 */

import type { EventRecord, Intervention, MissionVerdict, Snapshot } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function unwrap<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  getState(): Promise<Snapshot> {
    return this.fetchImpl(`${this.base}/state`).then((r) => unwrap<Snapshot>(r));
  }

  /** Events with seq strictly greater than `since`. */
  getEvents(since: number): Promise<EventRecord[]> {
    return this.fetchImpl(`${this.base}/events?since=${since}`).then((r) =>
      unwrap<EventRecord[]>(r),
    );
  }

  submitMission(robot: string, text: string): Promise<MissionVerdict> {
    return this.post("/missions", { robot, text });
  }

  submitIntervention(intervention: Intervention): Promise<{ applied?: boolean; queued?: boolean; seq?: number }> {
    return this.post("/interventions", intervention);
  }

  control(action: "pause" | "resume" | "seed", value?: number): Promise<{ paused: boolean }> {
    return this.post("/control", value === undefined ? { action } : { action, value });
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchImpl(`${this.base}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }
}
