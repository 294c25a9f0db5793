import type { FrameMessage, StatusMessage, ServerMessage } from "./protocol.js";

// Only the newest frame is ever drawn, so the store keeps exactly one.
// Errors are kept in a short ring for the status panel; old ones fall off
// the front so a chatty server cannot grow memory.

const MAX_ERRORS = 20;

export class SessionStore {
  frame: FrameMessage | null = null;
  status: StatusMessage | null = null;
  errors: string[] = [];
  framesSeen = 0;
  droppedMessages = 0;

  apply(msg: ServerMessage): void {
    if (msg.type === "frame") {
      this.frame = msg;
      this.framesSeen += 1;
    } else if (msg.type === "status") {
      this.status = msg;
    } else {
      this.errors.push(msg.message);
      while (this.errors.length > MAX_ERRORS) {
        this.errors.shift();
        this.droppedMessages += 1;
      }
    }
  }

  latestError(): string | null {
    return this.errors.length ? this.errors[this.errors.length - 1]! : null;
  }
}
