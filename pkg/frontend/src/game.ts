/**
 * Canvas presentation and the fixed-timestep loop. The simulation advances
 * only with tick count (never wall-clock interpolation), so frame-rate
 * variation cannot alter the trajectory for a given input sequence. Input
 * is sampled once per tick.
 */

import { GameConfig, GameState, SessionLog } from "./engine.js";

export type InputMode = "keys" | "mouse";

export class InputSampler {
  private keys = new Set<string>();
  mouseY: number | null = null;
  mode: InputMode = "keys";

  attach(target: HTMLElement): void {
    window.addEventListener("keydown", (e) => this.keys.add(e.key));
    window.addEventListener("keyup", (e) => this.keys.delete(e.key));
    target.addEventListener("mousemove", (e) => {
      const rect = (e.currentTarget as HTMLElement).getBoundingClientRect();
      this.mouseY = (e.clientY - rect.top) / rect.height;
    });
    target.addEventListener("mouseleave", () => {
      this.mouseY = null;
    });
  }

  /** Command in [-u_max, u_max] for the current tick. */
  sample(uMax: number, riderScreenFrac: number): number {
    if (this.mode === "mouse" && this.mouseY !== null) {
      // steer toward the cursor, proportional, saturating at u_max
      const offset = riderScreenFrac - this.mouseY;
      return Math.max(-uMax, Math.min(uMax, 4.0 * offset * uMax));
    }
    let u = 0.0;
    if (this.keys.has("ArrowUp") || this.keys.has("ArrowLeft") || this.keys.has("a")) {
      u += uMax;
    }
    if (this.keys.has("ArrowDown") || this.keys.has("ArrowRight") || this.keys.has("d")) {
      u -= uMax;
    }
    return u;
  }
}

export class GameView {
  private ctx: CanvasRenderingContext2D;
  private unitsPerHalf = 4.0; // vertical world units mapped to half the canvas

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  private yPix(worldY: number): number {
    const h = this.canvas.height;
    return h / 2 - (worldY / this.unitsPerHalf) * (h / 2);
  }

  render(state: GameState): void {
    const { ctx, canvas } = this;
    const cfg = state.config;
    ctx.fillStyle = "#10141a";
    ctx.fillRect(0, 0, canvas.width, canvas.height);

    const riderCol = Math.floor(canvas.width * 0.25);
    const colWidth = Math.max(
      6,
      Math.floor((canvas.width - riderCol) / Math.max(cfg.preview_window, 1))
    );

    // trail: the value under the rider plus the preview strip
    ctx.strokeStyle = "#4f9dff";
    ctx.lineWidth = 2;
    ctx.beginPath();
    const trailNow = state.currentTrail();
    ctx.moveTo(riderCol, this.yPix(trailNow));
    state.preview().forEach((value, i) => {
      ctx.lineTo(riderCol + (i + 1) * colWidth, this.yPix(value));
    });
    ctx.stroke();

    // rider: trail position plus the (possibly coarsened) error display
    const error = state.displayedError();
    const riderY = this.yPix(trailNow + error);
    ctx.fillStyle = Math.abs(error) < 0.2 ? "#6ee76e" : "#ff7a5c";
    ctx.beginPath();
    ctx.arc(riderCol, riderY, 8, 0, 2 * Math.PI);
    ctx.fill();

    // HUD
    ctx.fillStyle = "#d7dde6";
    ctx.font = "14px monospace";
    ctx.fillText(`step ${state.t}/${cfg.horizon}`, 12, 20);
    ctx.fillText(`score ${state.score().toFixed(3)} (${cfg.score_norm})`, 12, 40);
    ctx.fillText(`error ${error.toFixed(3)}`, 12, 60);
  }

  riderScreenFrac(state: GameState): number {
    return this.yPix(state.currentTrail() + state.displayedError()) / this.canvas.height;
  }
}

export interface SessionHooks {
  onFinish(log: SessionLog): void;
}

/** Drive a session at the config's fixed tick, decoupled from rendering. */
export function runSession(
  config: GameConfig,
  canvas: HTMLCanvasElement,
  input: InputSampler,
  hooks: SessionHooks
): () => void {
  const state = new GameState(config);
  const view = new GameView(canvas);
  let accumulator = 0;
  let last = performance.now();
  let raf = 0;
  let finished = false;

  const frame = (now: number) => {
    accumulator += now - last;
    last = now;
    while (accumulator >= config.tick_ms && !state.done) {
      const u = input.sample(config.u_max, view.riderScreenFrac(state));
      state.tick(u, now);
      accumulator -= config.tick_ms;
    }
    view.render(state);
    if (state.done && !finished) {
      finished = true;
      hooks.onFinish(state.exportLog());
      return;
    }
    raf = requestAnimationFrame(frame);
  };
  raf = requestAnimationFrame(frame);
  return () => cancelAnimationFrame(raf);
}
