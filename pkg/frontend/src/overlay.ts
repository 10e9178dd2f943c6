// Rendering: skeleton over the mirrored video, pose badge, correction hints.

import { FixItem, ResultMsg, UNSTABLE } from './protocol';

// bone list matching the server's hand topology (docs/topology.md)
export const HAND_EDGES: [number, number][] = [
  [0, 1], [1, 2], [2, 3], [3, 4],
  [0, 5], [5, 6], [6, 7], [7, 8],
  [0, 9], [9, 10], [10, 11], [11, 12],
  [0, 13], [13, 14], [14, 15], [15, 16],
  [0, 17], [17, 18], [18, 19], [19, 20],
];

export function drawSkeleton(
  ctx: CanvasRenderingContext2D,
  lm: number[],
  width: number,
  height: number,
  mirrored = true,
  correct = false,
): void {
  ctx.clearRect(0, 0, width, height);
  const px = (i: number) => {
    const x = lm[3 * i];
    return (mirrored ? 1 - x : x) * width;
  };
  const py = (i: number) => lm[3 * i + 1] * height;
  ctx.strokeStyle = correct ? '#2e7d32' : '#ff8f00';
  ctx.lineWidth = 2;
  for (const [a, b] of HAND_EDGES) {
    ctx.beginPath();
    ctx.moveTo(px(a), py(a));
    ctx.lineTo(px(b), py(b));
    ctx.stroke();
  }
  ctx.fillStyle = '#ffffff';
  for (let i = 0; i < lm.length / 3; i++) {
    ctx.beginPath();
    ctx.arc(px(i), py(i), 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

/** Pose label + confidence; green when correct, amber while deviating,
 * neutral while the label is still unstable. */
export function renderBadge(el: HTMLElement, result: ResultMsg | null): void {
  if (!result || result.label === UNSTABLE) {
    el.textContent = result ? 'detecting…' : 'no signal';
    el.className = 'badge neutral';
    return;
  }
  const pct = Math.round(result.conf * 100);
  if (result.fix.length === 0 && result.missing.length === 0) {
    el.textContent = `${result.label} ✓ (${pct}%)`;
    el.className = 'badge correct';
  } else {
    el.textContent = `${result.label} (${pct}%)`;
    el.className = 'badge deviating';
  }
}

/** Hint rows ordered by how far past tolerance each joint sits. */
export function renderHints(listEl: HTMLElement, result: ResultMsg | null): void {
  listEl.textContent = '';
  if (!result || result.label === UNSTABLE) return;
  const doc = listEl.ownerDocument;
  const items = [...result.fix].sort((a, b) => b.excess - a.excess);
  for (const item of items) {
    const li = doc.createElement('li');
    li.textContent = item.msg;
    li.setAttribute('data-joint', item.name);
    listEl.appendChild(li);
  }
  if (result.missing.length > 0) {
    const li = doc.createElement('li');
    li.className = 'missing';
    li.textContent = `not visible: landmarks ${result.missing.join(', ')}`;
    listEl.appendChild(li);
  }
}

export function renderStatus(el: HTMLElement, status: string, detail?: string): void {
  el.textContent = detail ? `${status}: ${detail}` : status;
  el.className = `status ${status}`;
}

export function hintOrder(fix: FixItem[]): string[] {
  return [...fix].sort((a, b) => b.excess - a.excess).map((f) => f.name);
}
