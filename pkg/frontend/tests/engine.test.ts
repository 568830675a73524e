import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import {
  DEFAULT_CONFIG,
  GameConfig,
  GameState,
  makeDisturbances,
  validateConfig,
} from "../src/engine.js";

const zeroRun = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "zero_run_seed99.json"), "utf-8")
);

function config(overrides: Partial<GameConfig> = {}): GameConfig {
  return { ...DEFAULT_CONFIG, ...overrides };
}

function playZero(cfg: GameConfig): GameState {
  const state = new GameState(cfg);
  while (!state.done) state.tick(0.0, state.t * cfg.tick_ms);
  return state;
}

describe("config validation", () => {
  it("accepts the default", () => {
    expect(validateConfig(DEFAULT_CONFIG)).toBeNull();
  });

  it("rejects sub-10ms ticks", () => {
    expect(validateConfig(config({ tick_ms: 5 }))).toMatch(/tick_ms/);
    expect(() => new GameState(config({ tick_ms: 5 }))).toThrow(/tick_ms/);
  });

  it("rejects negative preview", () => {
    expect(validateConfig(config({ preview_window: -1 }))).toMatch(/preview/);
  });
});

describe("disturbance generation", () => {
  it("is reproducible for a seed", () => {
    const a = makeDisturbances(config({ seed: 7 }));
    const b = makeDisturbances(config({ seed: 7 }));
    expect(a.v.slice(0, 100)).toEqual(b.v.slice(0, 100));
    expect(a.r.slice(0, 100)).toEqual(b.r.slice(0, 100));
  });

  it("respects the bounds", () => {
    const { v, r } = makeDisturbances(config({ seed: 3 }));
    for (const val of v) expect(Math.abs(val)).toBeLessThanOrEqual(DEFAULT_CONFIG.w_bound);
    for (let i = 1; i < r.length; i++) {
      expect(Math.abs(r[i] - r[i - 1])).toBeLessThanOrEqual(
        DEFAULT_CONFIG.r_step_bound + 1e-15
      );
    }
  });

  it("vertex kind takes only extreme values", () => {
    const { v } = makeDisturbances(
      config({ seed: 1, disturbance_kind: "vertex-adversarial" })
    );
    for (const val of v) expect(Math.abs(val)).toBe(DEFAULT_CONFIG.w_bound);
  });
});

describe("tick semantics", () => {
  it("delays applied commands by input_delay", () => {
    const cfg = config({ input_delay: 2, horizon: 10, seed: 4 });
    const state = new GameState(cfg);
    const pressed = [0.5, -0.25, 0.125, 0.75, -0.5, 0.25, 0.0, 0.5, 0.25, -0.125];
    pressed.forEach((p) => state.tick(p));
    const log = state.exportLog();
    expect(log.frames[0].u_player).toBe(0.0);
    expect(log.frames[1].u_player).toBe(0.0);
    for (let t = 2; t < 10; t++) {
      expect(log.frames[t].u_player).toBe(pressed[t - 2]);
    }
  });

  it("clamps commands to u_max", () => {
    const cfg = config({ input_delay: 0, horizon: 3, u_max: 1.0 });
    const state = new GameState(cfg);
    state.tick(42.0);
    state.tick(-42.0);
    state.tick(0.5);
    const log = state.exportLog();
    expect(log.frames.map((f) => f.u_player)).toEqual([1.0, -1.0, 0.5]);
  });

  it("deadbeat play holds the state at zero without disturbances", () => {
    const cfg = config({
      input_delay: 0,
      horizon: 50,
      w_bound: 0.0,
      r_step_bound: 0.0,
      a: 1.0,
    });
    const state = new GameState(cfg);
    while (!state.done) state.tick(-state.x);
    expect(state.trajectory().every((x) => x === 0.0)).toBe(true);
  });

  it("depends on tick count only, never wall-clock", () => {
    const cfg = config({ horizon: 40, seed: 9 });
    const a = new GameState(cfg);
    const b = new GameState(cfg);
    let t = 0;
    while (!a.done) a.tick(0.25, 1000 + 16.7 * t++);
    while (!b.done) b.tick(0.25, 0);
    expect(a.trajectory()).toEqual(b.trajectory());
  });
});

describe("cross-implementation trajectory parity", () => {
  it("zero input matches the analysis pipeline within 1e-9 over 500 steps", () => {
    const state = playZero(zeroRun.config as GameConfig);
    const expected: number[] = zeroRun.x;
    const got = state.trajectory();
    expect(got.length).toBe(expected.length);
    for (let t = 0; t < expected.length; t++) {
      expect(Math.abs(got[t] - expected[t])).toBeLessThanOrEqual(1e-9);
    }
  });

  it("disturbance streams match exactly", () => {
    const { v, r } = makeDisturbances(zeroRun.config as GameConfig);
    expect(v).toEqual(zeroRun.v);
    expect(r).toEqual(zeroRun.r);
  });
});

describe("session export", () => {
  it("produces a schema-1 log with increasing frames and matching score", () => {
    const cfg = config({ horizon: 30, seed: 2 });
    const state = new GameState(cfg);
    while (!state.done) state.tick(0.1, state.t * cfg.tick_ms);
    const log = state.exportLog();
    expect(log.schema_version).toBe(1);
    expect(log.frames.length).toBe(30);
    log.frames.forEach((f, i) => expect(f.t).toBe(i));
    const xs = state.trajectory().slice(1);
    const linf = Math.max(...xs.map(Math.abs));
    expect(Math.abs(log.score - linf)).toBeLessThanOrEqual(1e-12);
  });

  it("refuses to export a running session", () => {
    const state = new GameState(config({ horizon: 5 }));
    state.tick(0);
    expect(() => state.exportLog()).toThrow(/running/);
  });

  it("preview window honors its length and zero disables it", () => {
    const cfg = config({ horizon: 40, preview_window: 0 });
    const state = new GameState(cfg);
    expect(state.preview()).toEqual([]);
    const cfg2 = config({ horizon: 40, preview_window: 6, advance_warning: 6 });
    const s2 = new GameState(cfg2);
    for (let i = 0; i < 10; i++) s2.tick(0);
    expect(s2.preview().length).toBe(6);
  });
});
