// WebSocket session client: opens the stream, keeps seq monotone, drops
// frames under back-pressure instead of queueing, reconnects with backoff.

import {
  ClientMsg,
  Handed,
  Kind,
  ServerMsg,
  parseServerMsg,
} from './protocol';

export type Status = 'connecting' | 'connected' | 'closed' | 'error';

// minimal structural type so tests can inject the `ws` package in Node
export interface WebSocketLike {
  readyState: number;
  bufferedAmount: number;
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
}

export interface StudioClientOptions {
  user?: string;
  kind?: Kind;
  // injected in tests; defaults to the browser global
  webSocketImpl?: new (url: string) => WebSocketLike;
  // drop frames once this many bytes sit unsent in the socket
  maxBufferedBytes?: number;
  maxRetryMs?: number;
  onStatus?: (status: Status, detail?: string) => void;
  onResult?: (result: ServerMsg & { t: 'result' }) => void;
  onError?: (code: string, msg: string) => void;
}

const OPEN = 1;

export class StudioClient {
  readonly url: string;
  sid: string | null = null;
  framesSent = 0;
  framesDropped = 0;

  private opts: Required<Pick<StudioClientOptions, 'user' | 'kind' | 'maxBufferedBytes' | 'maxRetryMs'>> &
    StudioClientOptions;
  private ws: WebSocketLike | null = null;
  private seq = 0;
  private retryMs = 500;
  private stopped = false;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private sentTimes: number[] = [];

  constructor(url: string, opts: StudioClientOptions = {}) {
    this.url = url;
    this.opts = {
      user: opts.user ?? 'studio',
      kind: opts.kind ?? 'hand',
      maxBufferedBytes: opts.maxBufferedBytes ?? 64 * 1024,
      maxRetryMs: opts.maxRetryMs ?? 8000,
      ...opts,
    };
  }

  connect(): void {
    this.stopped = false;
    this.open();
  }

  private impl(): new (url: string) => WebSocketLike {
    const ctor =
      this.opts.webSocketImpl ??
      ((globalThis as Record<string, unknown>).WebSocket as new (url: string) => WebSocketLike);
    if (!ctor) throw new Error('no WebSocket implementation available');
    return ctor;
  }

  private open(): void {
    this.opts.onStatus?.('connecting');
    let ws: WebSocketLike;
    try {
      ws = new (this.impl())(this.url);
    } catch (err) {
      this.opts.onStatus?.('error', String(err));
      this.scheduleRetry();
      return;
    }
    this.ws = ws;

    ws.onopen = () => {
      this.retryMs = 500;
      this.sendRaw({ t: 'open', user: this.opts.user, kind: this.opts.kind });
    };
    ws.onmessage = (ev) => {
      const msg = parseServerMsg(String(ev.data));
      if (!msg) return;
      if (msg.t === 'opened') {
        this.sid = msg.sid;
        this.opts.onStatus?.('connected');
      } else if (msg.t === 'result') {
        this.opts.onResult?.(msg);
      } else {
        this.opts.onError?.(msg.code, msg.msg);
      }
    };
    ws.onerror = () => {
      // onclose follows and owns the retry
    };
    ws.onclose = () => {
      this.sid = null;
      this.ws = null;
      if (!this.stopped) {
        this.opts.onStatus?.('error', 'connection lost');
        this.scheduleRetry();
      } else {
        this.opts.onStatus?.('closed');
      }
    };
  }

  private scheduleRetry(): void {
    if (this.stopped || this.retryTimer) return;
    this.retryTimer = setTimeout(() => {
      this.retryTimer = null;
      if (!this.stopped) this.open();
    }, this.retryMs);
    this.retryMs = Math.min(this.retryMs * 2, this.opts.maxRetryMs);
  }

  get connected(): boolean {
    return this.ws !== null && this.ws.readyState === OPEN && this.sid !== null;
  }

  /** Send one landmark frame; returns the seq used, or null if dropped. */
  sendFrame(lm: number[], handed: Handed, ts: number): number | null {
    if (!this.connected || !this.ws || !this.sid) return null;
    if (this.ws.bufferedAmount > this.opts.maxBufferedBytes) {
      this.framesDropped += 1; // drop, never queue unboundedly
      return null;
    }
    const seq = ++this.seq;
    this.sendRaw({ t: 'frame', sid: this.sid, seq, ts, handed, lm });
    this.framesSent += 1;
    const now = Date.now();
    this.sentTimes.push(now);
    while (this.sentTimes.length && this.sentTimes[0] < now - 3000) this.sentTimes.shift();
    return seq;
  }

  /** Sent-frame rate over the last three seconds. */
  fps(): number {
    if (this.sentTimes.length < 2) return 0;
    const span = (this.sentTimes[this.sentTimes.length - 1] - this.sentTimes[0]) / 1000;
    return span > 0 ? (this.sentTimes.length - 1) / span : 0;
  }

  /** Graceful end: tell the server, then close the socket. */
  close(): void {
    this.stopped = true;
    if (this.retryTimer) {
      clearTimeout(this.retryTimer);
      this.retryTimer = null;
    }
    if (this.ws && this.ws.readyState === OPEN && this.sid) {
      this.sendRaw({ t: 'close', sid: this.sid });
    }
    this.ws?.close();
  }

  /** Drop the link without a close message (tab crash, network loss). */
  abort(): void {
    this.stopped = true;
    if (this.retryTimer) {
      clearTimeout(this.retryTimer);
      this.retryTimer = null;
    }
    this.ws?.close();
  }

  private sendRaw(msg: ClientMsg): void {
    this.ws?.send(JSON.stringify(msg));
  }
}
