import { EngineSocket } from "./socket.js";
import { SessionStore } from "./store.js";
import { buildControls } from "./controls.js";
import { clearCanvas, drawFrame } from "./renderer.js";
import { DEFAULT_WORLD_HALF, type Viewport } from "./transform.js";

const store = new SessionStore();
let connected = false;

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const panelRoot = document.getElementById("panel")!;

function viewport(): Viewport {
  return { width: canvas.width, height: canvas.height, worldHalf: DEFAULT_WORLD_HALF };
}

function resize(): void {
  const dpr = window.devicePixelRatio || 1;
  canvas.width = Math.floor(canvas.clientWidth * dpr);
  canvas.height = Math.floor(canvas.clientHeight * dpr);
  clearCanvas(ctx, viewport());
}
window.addEventListener("resize", resize);
resize();

const wsUrl = location.origin.replace(/^http/, "ws") + "/ws";
const socket = new EngineSocket(wsUrl, {
  onMessage: (msg) => store.apply(msg),
  onConnected: (up) => {
    connected = up;
  },
});

const panel = buildControls(panelRoot, (control) => socket.send(control));

function tick(): void {
  if (store.frame) {
    drawFrame(ctx, viewport(), store.frame, store.status?.degraded ?? false);
  }
  panel.update(store.status, connected, store.latestError());
  requestAnimationFrame(tick);
}
requestAnimationFrame(tick);
