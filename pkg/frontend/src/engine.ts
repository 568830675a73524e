/**
 * Headless game engine: plant recurrence, disturbance generation, input
 * delay, scoring, and session-log export. Everything here is deterministic
 * given (config, input sequence); rendering and wall-clock concerns live in
 * game.ts. The numeric conventions mirror the analysis pipeline exactly:
 *
 *   x(t+1) = a*x(t) + u(t) + w(t),   w(t) = v(t) + r(t - advance_warning)
 *
 * with v drawn first (one value per step) and then the trail increments,
 * all from one SplitMix64 stream seeded by config.seed.
 */

import { SplitMix64 } from "./rng.js";

export type ScoreNorm = "linf" | "rms";
export type DisturbanceKind = "seeded-random" | "vertex-adversarial";

export interface QuantizerConfig {
  kind: "none" | "uniform";
  R?: number;
  M?: number;
}

export interface GameConfig {
  seed: number;
  horizon: number;
  a: number;
  x0: number;
  w_bound: number;
  r_step_bound: number;
  advance_warning: number;
  preview_window: number;
  input_delay: number;
  u_max: number;
  tick_ms: number;
  score_norm: ScoreNorm;
  disturbance_kind: DisturbanceKind;
  display_quantizer?: QuantizerConfig;
}

export interface Frame {
  t: number;
  r: number;
  v: number;
  x: number;
  u_player: number;
  wallclock_ms: number;
}

export interface SessionLog {
  schema_version: 1;
  config: GameConfig;
  frames: Frame[];
  score: number;
}

export function validateConfig(cfg: GameConfig): string | null {
  if (!Number.isInteger(cfg.horizon) || cfg.horizon < 1) return "horizon must be >= 1";
  if (!Number.isInteger(cfg.tick_ms) || cfg.tick_ms < 10) return "tick_ms must be >= 10";
  if (!Number.isInteger(cfg.preview_window) || cfg.preview_window < 0)
    return "preview_window must be >= 0";
  if (!Number.isInteger(cfg.input_delay) || cfg.input_delay < 0)
    return "input_delay must be >= 0";
  if (!Number.isInteger(cfg.advance_warning) || cfg.advance_warning < 0)
    return "advance_warning must be >= 0";
  if (!(cfg.w_bound >= 0)) return "w_bound must be >= 0";
  if (!(cfg.r_step_bound >= 0)) return "r_step_bound must be >= 0";
  if (!(cfg.u_max > 0)) return "u_max must be > 0";
  if (cfg.score_norm !== "linf" && cfg.score_norm !== "rms")
    return "score_norm must be linf or rms";
  if (cfg.disturbance_kind !== "seeded-random" && cfg.disturbance_kind !== "vertex-adversarial")
    return "disturbance_kind must be seeded-random or vertex-adversarial";
  return null;
}

/** v first for every step, then the trail increments -- one stream. */
export function makeDisturbances(cfg: GameConfig): { v: number[]; r: number[] } {
  const gen = new SplitMix64(cfg.seed);
  const n = cfg.horizon;
  const v: number[] = [];
  const r: number[] = [0.0];
  if (cfg.disturbance_kind === "seeded-random") {
    for (let t = 0; t < n; t++) v.push(gen.nextSignedUnit() * cfg.w_bound);
    for (let t = 1; t < n; t++) r.push(r[t - 1] + gen.nextSignedUnit() * cfg.r_step_bound);
  } else {
    for (let t = 0; t < n; t++) v.push(gen.nextSign() * cfg.w_bound);
    for (let t = 1; t < n; t++) r.push(r[t - 1] + gen.nextSign() * cfg.r_step_bound);
  }
  return { v, r };
}

export function quantizeUniform(x: number, R: number, M: number): number {
  const cells = 2 ** R;
  const width = (2 * M) / cells;
  let code = Math.floor((x + M) / width);
  code = Math.min(Math.max(code, 0), cells - 1);
  return -M + (code + 0.5) * width;
}

export class GameState {
  readonly config: GameConfig;
  readonly v: number[];
  readonly r: number[];
  t = 0;
  x: number;
  private delayBuffer: number[];
  private frames: Frame[] = [];
  private states: number[];

  constructor(config: GameConfig) {
    const problem = validateConfig(config);
    if (problem !== null) throw new Error(`invalid config: ${problem}`);
    this.config = config;
    const { v, r } = makeDisturbances(config);
    this.v = v;
    this.r = r;
    this.x = config.x0;
    this.states = [config.x0];
    this.delayBuffer = new Array(config.input_delay).fill(0.0);
  }

  get done(): boolean {
    return this.t >= this.config.horizon;
  }

  /** The trail value currently under the rider (enters the plant now). */
  currentTrail(): number {
    const idx = this.t - this.config.advance_warning;
    return idx >= 0 && idx < this.r.length ? this.r[idx] : 0.0;
  }

  /** Upcoming trail values for the preview strip. */
  preview(): number[] {
    const out: number[] = [];
    const base = this.t - this.config.advance_warning;
    for (let k = 1; k <= this.config.preview_window; k++) {
      const idx = base + k;
      if (idx >= 0 && idx < this.r.length) out.push(this.r[idx]);
    }
    return out;
  }

  /** The error signal as the display shows it (possibly coarsened). */
  displayedError(): number {
    const q = this.config.display_quantizer;
    if (!q || q.kind === "none") return this.x;
    return quantizeUniform(this.x, q.R ?? 1, q.M ?? 1.0);
  }

  /**
   * Advance one step: enqueue the player's command, apply the one delayed
   * by input_delay ticks, drive the plant, and record the frame. Commands
   * clamp to +/- u_max. Pass the wall-clock timestamp for the log; replay
   * ignores it.
   */
  tick(playerInput: number, wallclockMs = 0): void {
    if (this.done) throw new Error("session already ended");
    const cfg = this.config;
    const clamped = Math.min(Math.max(playerInput, -cfg.u_max), cfg.u_max);
    let applied: number;
    if (cfg.input_delay === 0) {
      applied = clamped;
    } else {
      applied = this.delayBuffer.shift() as number;
      this.delayBuffer.push(clamped);
    }
    const t = this.t;
    const w = this.v[t] + (t >= cfg.advance_warning ? this.r[t - cfg.advance_warning] : 0.0);
    this.frames.push({
      t,
      r: this.r[t],
      v: this.v[t],
      x: this.x,
      u_player: applied,
      wallclock_ms: Math.round(wallclockMs),
    });
    this.x = cfg.a * this.x + applied + w;
    this.states.push(this.x);
    this.t = t + 1;
  }

  /** Cost over x(1..horizon); the initial state is excluded. */
  score(): number {
    const xs = this.states.slice(1);
    if (xs.length === 0) return 0.0;
    if (this.config.score_norm === "linf") {
      let peak = 0.0;
      for (const s of xs) peak = Math.max(peak, Math.abs(s));
      return peak;
    }
    let sum = 0.0;
    for (const s of xs) sum += s * s;
    return Math.sqrt(sum / xs.length);
  }

  trajectory(): number[] {
    return [...this.states];
  }

  exportLog(): SessionLog {
    if (!this.done) throw new Error("session still running");
    return {
      schema_version: 1,
      config: this.config,
      frames: this.frames,
      score: this.score(),
    };
  }
}

export const DEFAULT_CONFIG: GameConfig = {
  seed: 7,
  horizon: 600,
  a: 1.0,
  x0: 0.0,
  w_bound: 0.25,
  r_step_bound: 0.15,
  advance_warning: 12,
  preview_window: 12,
  input_delay: 2,
  u_max: 1.5,
  tick_ms: 50,
  score_norm: "linf",
  disturbance_kind: "seeded-random",
  display_quantizer: { kind: "none" },
};
