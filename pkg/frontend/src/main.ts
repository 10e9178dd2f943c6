// Page wiring: query params pick the server and landmark source, one
// capture loop feeds the socket, results drive the overlay.
//
//   ?server=ws://127.0.0.1:7872   service endpoint (default: page host)
//   ?kind=hand                    frame kind
//   ?fixture=1                    replay the recorded fixture instead of
//                                 the camera (no tracker/camera needed)

import { StudioClient } from './client';
import { CameraEstimator, FixtureEstimator, FixtureFrame, LandmarkSource } from './estimator';
import { drawSkeleton, renderBadge, renderHints, renderStatus } from './overlay';
import { Kind } from './protocol';
import { StudioState } from './state';

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

async function loadFixture(): Promise<FixtureFrame[]> {
  const res = await fetch('./test/fixtures/prana_frames.json');
  return (await res.json()) as FixtureFrame[];
}

export async function startStudio(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const server =
    params.get('server') ?? `ws://${location.hostname}:7872`;
  const kind = (params.get('kind') ?? 'hand') as Kind;

  const video = $('video') as HTMLVideoElement;
  const canvas = $('overlay') as HTMLCanvasElement;
  const ctx = canvas.getContext('2d');
  const badge = $('badge');
  const hints = $('hints');
  const statusEl = $('status');
  const fpsEl = $('fps');

  const state = new StudioState();
  const client = new StudioClient(server, {
    kind,
    onStatus: (status, detail) => renderStatus(statusEl, status, detail),
    onResult: (result) => {
      state.noteResult(result);
      renderBadge(badge, result);
      renderHints(hints, result);
    },
    onError: (code, msg) => renderStatus(statusEl, 'error', `${code}: ${msg}`),
  });
  client.connect();

  const source: LandmarkSource = params.get('fixture')
    ? new FixtureEstimator(await loadFixture(), 30)
    : new CameraEstimator(video);

  let lastSeen = Date.now();
  await source.start((frame) => {
    lastSeen = Date.now();
    const seq = client.sendFrame(frame.lm, frame.handed, Date.now());
    if (seq !== null) state.noteFrameSent(seq, frame.lm);
  });

  const paint = () => {
    const now = Date.now();
    fpsEl.textContent = `${client.fps().toFixed(0)} fps`;
    const data = state.overlay(now);
    if (ctx) {
      if (data && now - lastSeen < 1000) {
        const ok = data.result.fix.length === 0 && data.result.label !== 'unstable';
        drawSkeleton(ctx, data.lm, canvas.width, canvas.height, true, ok);
      } else {
        ctx.clearRect(0, 0, canvas.width, canvas.height); // hand out of view
      }
    }
    requestAnimationFrame(paint);
  };
  requestAnimationFrame(paint);

  // best effort on tab close; the server also closes on disconnect
  window.addEventListener('beforeunload', () => client.close());
}

if (typeof document !== 'undefined' && document.getElementById('overlay')) {
  startStudio().catch((err) => {
    const el = document.getElementById('status');
    if (el) el.textContent = `failed to start: ${err}`;
  });
}
