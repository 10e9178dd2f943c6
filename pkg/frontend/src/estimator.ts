// Landmark sources. The studio never ships pixels to the server: either a
// browser hand tracker produces 21 landmarks per frame, or a recorded
// fixture replays them (CI, demos, camera-less machines).

import { Handed } from './protocol';

export interface EstimatedFrame {
  lm: number[]; // flat x,y,confidence; any z from the tracker is dropped
  handed: Handed;
}

export interface LandmarkSource {
  start(onFrame: (frame: EstimatedFrame) => void): Promise<void>;
  stop(): void;
}

export interface FixtureFrame {
  lm: number[];
  handed: Handed;
}

/** Replays recorded frames in a loop at a fixed rate. */
export class FixtureEstimator implements LandmarkSource {
  private timer: ReturnType<typeof setInterval> | null = null;
  private index = 0;

  constructor(private frames: FixtureFrame[], private fps = 30) {
    if (frames.length === 0) throw new Error('fixture has no frames');
  }

  async start(onFrame: (frame: EstimatedFrame) => void): Promise<void> {
    this.stop();
    this.timer = setInterval(() => {
      const frame = this.frames[this.index % this.frames.length];
      this.index += 1;
      onFrame({ lm: frame.lm, handed: frame.handed });
    }, 1000 / this.fps);
  }

  stop(): void {
    if (this.timer) clearInterval(this.timer);
    this.timer = null;
  }
}

declare const Hands: new (opts: { locateFile: (f: string) => string }) => {
  setOptions(opts: Record<string, unknown>): void;
  onResults(cb: (results: MediaPipeResults) => void): void;
  send(input: { image: HTMLVideoElement }): Promise<void>;
};

interface MediaPipeResults {
  multiHandLandmarks?: { x: number; y: number; z: number }[][];
  multiHandedness?: { label: string; score: number }[];
}

/** Browser hand tracker (MediaPipe Hands, loaded from its CDN script).
 * Sends nothing while no hand is in view. */
export class CameraEstimator implements LandmarkSource {
  private running = false;

  constructor(private video: HTMLVideoElement) {}

  async start(onFrame: (frame: EstimatedFrame) => void): Promise<void> {
    if (typeof Hands === 'undefined') {
      throw new Error('hand tracker script not loaded; use ?fixture=1 instead');
    }
    const hands = new Hands({
      locateFile: (f: string) => `https://cdn.jsdelivr.net/npm/@mediapipe/hands/${f}`,
    });
    hands.setOptions({ maxNumHands: 1, modelComplexity: 1, minDetectionConfidence: 0.5 });
    hands.onResults((results) => {
      const pts = results.multiHandLandmarks?.[0];
      if (!pts) return;
      const score = results.multiHandedness?.[0]?.score ?? 1;
      const label = results.multiHandedness?.[0]?.label?.toLowerCase();
      const handed: Handed = label === 'left' || label === 'right' ? label : 'na';
      const lm: number[] = [];
      for (const p of pts) lm.push(p.x, p.y, score); // z dropped on purpose
      onFrame({ lm, handed });
    });

    const stream = await navigator.mediaDevices.getUserMedia({
      video: { facingMode: 'user', width: 640, height: 480 },
    });
    this.video.srcObject = stream;
    await this.video.play();
    this.running = true;
    const pump = async () => {
      if (!this.running) return;
      await hands.send({ image: this.video });
      requestAnimationFrame(pump);
    };
    requestAnimationFrame(pump);
  }

  stop(): void {
    this.running = false;
    const stream = this.video.srcObject as MediaStream | null;
    stream?.getTracks().forEach((t) => t.stop());
    this.video.srcObject = null;
  }
}
