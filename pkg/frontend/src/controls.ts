import { setM, setMode, setParam, type ControlMessage, type StatusMessage } from "./protocol.js";

export interface ControlPanel {
  update(status: StatusMessage | null, connected: boolean, error: string | null): void;
}

interface ParamSpec {
  name: string;
  label: string;
  min: number;
  max: number;
  step: number;
  value: number;
}

const PARAMS: ParamSpec[] = [
  { name: "noise_amplitude", label: "noise amplitude", min: 0, max: 3, step: 0.05, value: 1.1 },
  { name: "time_constant", label: "smoothing (s)", min: 0, max: 10, step: 0.1, value: 1.0 },
  { name: "base_rate", label: "grain rate", min: 0.1, max: 4, step: 0.1, value: 1.0 },
];

export function buildControls(
  root: HTMLElement,
  send: (control: ControlMessage) => void,
): ControlPanel {
  const title = document.createElement("h1");
  title.textContent = "neuromandala";
  root.appendChild(title);

  const statusLine = document.createElement("div");
  statusLine.className = "status";
  statusLine.textContent = "connecting";
  root.appendChild(statusLine);

  // manual m slider
  const mRow = document.createElement("label");
  mRow.className = "row";
  mRow.textContent = "meditation";
  const mSlider = document.createElement("input");
  mSlider.type = "range";
  mSlider.min = "0";
  mSlider.max = "1";
  mSlider.step = "0.01";
  mSlider.value = "0.5";
  mSlider.addEventListener("input", () => {
    send(setM(Number(mSlider.value)));
  });
  mRow.appendChild(mSlider);
  root.appendChild(mRow);

  // mapping direction
  const modeBtn = document.createElement("button");
  let mode: "forward" | "reverse" = "forward";
  modeBtn.textContent = "mode: forward";
  modeBtn.addEventListener("click", () => {
    mode = mode === "forward" ? "reverse" : "forward";
    send(setMode(mode));
  });
  root.appendChild(modeBtn);

  for (const p of PARAMS) {
    const row = document.createElement("label");
    row.className = "row";
    row.textContent = p.label;
    const input = document.createElement("input");
    input.type = "number";
    input.min = String(p.min);
    input.max = String(p.max);
    input.step = String(p.step);
    input.value = String(p.value);
    input.addEventListener("change", () => {
      const v = Number(input.value);
      if (Number.isFinite(v)) send(setParam(p.name, v));
    });
    row.appendChild(input);
    root.appendChild(row);
  }

  const errorLine = document.createElement("div");
  errorLine.className = "error";
  root.appendChild(errorLine);

  return {
    update(status, connected, error) {
      if (!connected) {
        statusLine.textContent = "reconnecting...";
      } else if (status) {
        const parts = [status.source, `mode ${status.mode}`];
        if (status.poorSignal > 0) parts.push(`signal ${status.poorSignal}`);
        if (status.degraded) parts.push("degraded");
        statusLine.textContent = parts.join(" | ");
        mSlider.disabled = status.source !== "manual";
        if (status.mode !== mode) {
          mode = status.mode;
          modeBtn.textContent = `mode: ${mode}`;
        } else {
          modeBtn.textContent = `mode: ${mode}`;
        }
      }
      errorLine.textContent = error ?? "";
    },
  };
}
