// World-to-canvas mapping.
//
// Particle coordinates live in a square centered on the origin. With the
// default engine parameters the ring reaches radius 1.25 and the noise
// cloud stays inside +/- 1.1, so a half extent of 1.5 leaves a margin
// around both regimes.

export const DEFAULT_WORLD_HALF = 1.5;

export interface Viewport {
  width: number;
  height: number;
  /** World units from center to the nearest canvas edge. */
  worldHalf: number;
}

/** Pixels per world unit. The square world is fit inside the shorter axis. */
export function scaleOf(vp: Viewport): number {
  return Math.min(vp.width, vp.height) / (2 * vp.worldHalf);
}

export function toCanvas(vp: Viewport, x: number, y: number): [number, number] {
  const s = scaleOf(vp);
  // canvas y grows downward, world y grows upward
  return [vp.width / 2 + x * s, vp.height / 2 - y * s];
}

export function projectPositions(
  vp: Viewport,
  positions: [number, number][],
): [number, number][] {
  const s = scaleOf(vp);
  const cx = vp.width / 2;
  const cy = vp.height / 2;
  return positions.map(([x, y]) => [cx + x * s, cy - y * s]);
}

/** Radius in pixels of a world-space circle, for drawing the ring guide. */
export function radiusToPixels(vp: Viewport, r: number): number {
  return r * scaleOf(vp);
}
