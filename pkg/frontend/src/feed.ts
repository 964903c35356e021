/** Ordered, gap-free event delivery.
 *
 * The server's event log is strictly sequential, so the console can
 * detect a dropped message purely from seq arithmetic: anything other
 * than lastSeq + 1 triggers a backfill fetch from /events?since=lastSeq
 * before delivery resumes. Duplicates (seq <= lastSeq) are discarded.
 */

import type { EventRecord } from "./types.js";

export interface EventSink {
  (event: EventRecord): void;
}

/** Push source of raw, possibly gappy or duplicated, event records. */
export interface Transport {
  /** Begin pushing events with seq > since. Returns a stop function. */
  start(since: number, push: EventSink): () => void;
}

export type Backfill = (since: number) => Promise<EventRecord[]>;

export class EventFeed {
  private lastSeq: number;
  private stop: (() => void) | null = null;
  private backfilling = false;
  private buffer: EventRecord[] = [];

  constructor(
    private readonly transport: Transport,
    private readonly backfill: Backfill,
    private readonly sink: EventSink,
    startSeq = 0,
  ) {
    this.lastSeq = startSeq;
  }

  get cursor(): number {
    return this.lastSeq;
  }

  connect(): void {
    if (this.stop) return;
    this.stop = this.transport.start(this.lastSeq, (e) => this.onRaw(e));
  }

  disconnect(): void {
    if (this.stop) {
      this.stop();
      this.stop = null;
    }
  }

  private onRaw(event: EventRecord): void {
    if (this.backfilling) {
      this.buffer.push(event);
      return;
    }
    this.accept(event);
  }

  private accept(event: EventRecord): void {
    if (event.seq <= this.lastSeq) return; // duplicate
    if (event.seq === this.lastSeq + 1) {
      this.lastSeq = event.seq;
      this.sink(event);
      return;
    }
    // Gap: hold this event, fetch the missing range, then drain.
    this.buffer.push(event);
    this.backfilling = true;
    void this.backfill(this.lastSeq)
      .then((events) => {
        for (const e of [...events].sort((a, b) => a.seq - b.seq)) {
          if (e.seq === this.lastSeq + 1) {
            this.lastSeq = e.seq;
            this.sink(e);
          }
        }
      })
      .finally(() => {
        this.backfilling = false;
        const held = this.buffer;
        this.buffer = [];
        for (const e of held) this.accept(e);
      });
  }
}

/** Transport over the browser's EventSource (server-sent events). */
export function sseTransport(base = ""): Transport {
  return {
    start(since, push) {
      const source = new EventSource(`${base}/events?since=${since}&follow=1`);
      source.onmessage = (msg) => push(JSON.parse(msg.data) as EventRecord);
      return () => source.close();
    },
  };
}

/** Polling fallback for environments without EventSource. */
export function pollingTransport(backfill: Backfill, intervalMs = 250): Transport {
  return {
    start(since, push) {
      let cursor = since;
      let live = true;
      const tick = async () => {
        while (live) {
          const events = await backfill(cursor);
          for (const e of events) {
            cursor = Math.max(cursor, e.seq);
            push(e);
          }
          await new Promise((r) => setTimeout(r, intervalMs));
        }
      };
      void tick();
      return () => {
        live = false;
      };
    },
  };
}
