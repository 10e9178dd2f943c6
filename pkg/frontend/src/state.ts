// Studio view state: pairs sent frames with their results by seq so the
// overlay only draws when the two match and are fresh.

import { ResultMsg, UNSTABLE } from './protocol';

const MAX_PAIR_AGE_MS = 2000;
const HISTORY = 60;

export interface SentFrame {
  seq: number;
  lm: number[];
  sentAt: number;
}

export interface OverlayData {
  lm: number[];
  result: ResultMsg;
}

export class StudioState {
  status = 'idle';
  latestResult: ResultMsg | null = null;
  labelHistory: string[] = [];

  private sent = new Map<number, SentFrame>();

  noteFrameSent(seq: number, lm: number[], now = Date.now()): void {
    this.sent.set(seq, { seq, lm, sentAt: now });
    // keep the map small; results for old frames are stale anyway
    for (const key of this.sent.keys()) {
      if (this.sent.size <= 120) break;
      this.sent.delete(key);
    }
  }

  noteResult(result: ResultMsg): void {
    this.latestResult = result;
    this.labelHistory.push(result.label);
    if (this.labelHistory.length > HISTORY) this.labelHistory.shift();
  }

  /** Frame+result pair for drawing, or null when unmatched/stale. */
  overlay(now = Date.now()): OverlayData | null {
    const result = this.latestResult;
    if (!result) return null;
    const frame = this.sent.get(result.seq);
    if (!frame || now - frame.sentAt > MAX_PAIR_AGE_MS) return null;
    return { lm: frame.lm, result };
  }

  stable(): boolean {
    return this.latestResult !== null && this.latestResult.label !== UNSTABLE;
  }

  clear(): void {
    this.latestResult = null;
    this.sent.clear();
  }
}
