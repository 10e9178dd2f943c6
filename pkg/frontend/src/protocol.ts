// Wire protocol v1 (one JSON document per WebSocket text message).

export type Kind = 'hand' | 'body';
export type Handed = 'left' | 'right' | 'na';

export interface OpenMsg {
  t: 'open';
  user: string;
  kind: Kind;
}

export interface FrameMsg {
  t: 'frame';
  sid: string;
  seq: number;
  ts: number;
  handed: Handed;
  lm: number[]; // flat x,y,confidence triples
}

export interface CloseMsg {
  t: 'close';
  sid: string;
}

export interface OpenedMsg {
  t: 'opened';
  sid: string;
}

export interface FixItem {
  name: string;
  msg: string;
  excess: number;
  dir: 'increase' | 'decrease';
  observed: number;
  target: number;
}

export interface ResultMsg {
  t: 'result';
  sid: string;
  seq: number;
  raw: string;
  label: string; // smoothed label or "unstable"
  conf: number;
  fix: FixItem[];
  missing: number[];
  lat_ms: number;
}

export interface ErrMsg {
  t: 'err';
  code: 'out_of_order' | 'unknown_session' | 'bad_frame' | 'internal';
  msg: string;
}

export type ServerMsg = OpenedMsg | ResultMsg | ErrMsg;
export type ClientMsg = OpenMsg | FrameMsg | CloseMsg;

export const UNSTABLE = 'unstable';

export function parseServerMsg(data: string): ServerMsg | null {
  try {
    const doc = JSON.parse(data);
    if (doc && (doc.t === 'opened' || doc.t === 'result' || doc.t === 'err')) {
      return doc as ServerMsg;
    }
  } catch {
    // fall through: not a protocol message
  }
  return null;
}
