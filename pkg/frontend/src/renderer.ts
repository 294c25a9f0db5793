import type { FrameMessage } from "./protocol.js";
import { projectPositions, radiusToPixels, type Viewport } from "./transform.js";

// Canvas drawing. A translucent fill instead of a clear leaves short
// trails, which reads as motion even at low particle counts.

const TRAIL_ALPHA = 0.22;

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  frame: FrameMessage,
  degraded: boolean,
): void {
  ctx.fillStyle = `rgba(8, 10, 18, ${TRAIL_ALPHA})`;
  ctx.fillRect(0, 0, vp.width, vp.height);

  // faint guide circle at the ring's outer reach
  ctx.strokeStyle = "rgba(120, 140, 200, 0.12)";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.arc(vp.width / 2, vp.height / 2, radiusToPixels(vp, 1.25), 0, Math.PI * 2);
  ctx.stroke();

  // calm is cool blue, restless drifts warm
  const hue = 210 - 170 * (1 - frame.m);
  const alpha = degraded ? 0.35 : 0.9;
  ctx.fillStyle = `hsla(${hue}, 80%, ${45 + 20 * frame.m}%, ${alpha})`;

  const dot = Math.max(1.5, radiusToPixels(vp, 0.012));
  for (const [px, py] of projectPositions(vp, frame.positions)) {
    ctx.beginPath();
    ctx.arc(px, py, dot, 0, Math.PI * 2);
    ctx.fill();
  }
}

export function clearCanvas(ctx: CanvasRenderingContext2D, vp: Viewport): void {
  ctx.fillStyle = "rgb(8, 10, 18)";
  ctx.fillRect(0, 0, vp.width, vp.height);
}
