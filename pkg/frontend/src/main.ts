/** Page bootstrap: config loading, session control, log download. */

import { DEFAULT_CONFIG, GameConfig, SessionLog, validateConfig } from "./engine.js";
import { InputSampler, runSession } from "./game.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function download(log: SessionLog): void {
  const blob = new Blob([JSON.stringify(log, null, 2)], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = `session_seed${log.config.seed}.json`;
  a.click();
  URL.revokeObjectURL(a.href);
}

function readConfig(): GameConfig {
  const text = byId<HTMLTextAreaElement>("config").value;
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch (err) {
    throw new Error(`config is not valid JSON: ${err}`);
  }
  const cfg = { ...DEFAULT_CONFIG, ...(parsed as Partial<GameConfig>) };
  const problem = validateConfig(cfg);
  if (problem !== null) throw new Error(`invalid config field: ${problem}`);
  return cfg;
}

function start(): void {
  const status = byId<HTMLParagraphElement>("status");
  let cfg: GameConfig;
  try {
    cfg = readConfig();
  } catch (err) {
    window.alert(String(err));
    return;
  }
  const canvas = byId<HTMLCanvasElement>("arena");
  const input = new InputSampler();
  input.mode = byId<HTMLSelectElement>("inputmode").value === "mouse" ? "mouse" : "keys";
  input.attach(canvas);
  status.textContent = "session running: arrows/WASD steer (or mouse mode)";
  let lastLog: SessionLog | null = null;
  runSession(cfg, canvas, input, {
    onFinish(log) {
      lastLog = log;
      status.textContent = `finished: score ${log.score.toFixed(4)} (${log.config.score_norm})`;
      byId<HTMLButtonElement>("export").disabled = false;
      byId<HTMLButtonElement>("export").onclick = () => lastLog && download(lastLog);
    },
  });
}

window.addEventListener("DOMContentLoaded", () => {
  byId<HTMLTextAreaElement>("config").value = JSON.stringify(DEFAULT_CONFIG, null, 2);
  byId<HTMLButtonElement>("start").addEventListener("click", start);
});
