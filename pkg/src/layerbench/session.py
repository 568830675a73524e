"""Game-session log ingestion: validation, replay, scoring, decomposition.

A session log is the JSON the tracking game exports: the game configuration
(seed and plant parameters), one frame per tick with the trail value, bump
value, plant state, and the command applied at the actuator, plus the score
the game displayed. Ingestion re-derives everything independently: the
disturbances are replayed from the declared seed, the state is replayed
through the plant recurrence, the score is recomputed under the declared
norm, and the player's commands are regressed onto the synthesized two-layer
decomposition for the same seed and configuration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .components import QuantizerSpec
from .controllers import LayerSpec
from .dynamics import DisturbanceSpec, PlantConfig, Trajectory, evaluate_cost, make_disturbances
from .architectures import simulate_layered
from .synthesis import synthesize_bump_controller, synthesize_trail_controller

__all__ = ["SessionError", "SessionLog", "ingest_session", "analyze_log"]

SCHEMA_VERSION = 1
_REPLAY_TOL = 1e-9
_SCORE_TOL = 1e-6


class SessionError(ValueError):
    """Schema violation or replay inconsistency in a session log."""


_CONFIG_FIELDS = {
    "seed": int,
    "horizon": int,
    "a": (int, float),
    "x0": (int, float),
    "w_bound": (int, float),
    "r_step_bound": (int, float),
    "advance_warning": int,
    "preview_window": int,
    "input_delay": int,
    "u_max": (int, float),
    "tick_ms": int,
    "score_norm": str,
    "disturbance_kind": str,
}

_FRAME_FIELDS = {
    "t": int,
    "r": (int, float),
    "v": (int, float),
    "x": (int, float),
    "u_player": (int, float),
    "wallclock_ms": int,
}


@dataclass
class SessionLog:
    config: dict
    frames: list[dict]
    score: float

    @property
    def horizon(self) -> int:
        return self.config["horizon"]


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise SessionError(message)


def parse_session(doc: dict) -> SessionLog:
    """Validate the raw JSON document against the schema."""
    _require(isinstance(doc, dict), "log root must be an object")
    _require(doc.get("schema_version") == SCHEMA_VERSION,
             f"schema_version must be {SCHEMA_VERSION}")
    config = doc.get("config")
    _require(isinstance(config, dict), "missing config object")
    for field, types in _CONFIG_FIELDS.items():
        _require(field in config, f"config missing field {field!r}")
        _require(isinstance(config[field], types) and not isinstance(config[field], bool),
                 f"config field {field!r} has wrong type")
    _require(config["horizon"] >= 1, "config horizon must be >= 1")
    _require(config["tick_ms"] >= 10, "config tick_ms must be >= 10")
    _require(config["preview_window"] >= 0, "config preview_window must be >= 0")
    _require(config["input_delay"] >= 0, "config input_delay must be >= 0")
    _require(config["score_norm"] in ("linf", "rms"), "score_norm must be linf or rms")
    _require(config["disturbance_kind"] in ("seeded-random", "vertex-adversarial"),
             "disturbance_kind must be seeded-random or vertex-adversarial")

    frames = doc.get("frames")
    _require(isinstance(frames, list) and frames, "missing or empty frames array")
    _require(len(frames) == config["horizon"],
             f"expected {config['horizon']} frames, got {len(frames)}")
    prev_t = -1
    for i, frame in enumerate(frames):
        _require(isinstance(frame, dict), f"frame {i}: not an object")
        for field, types in _FRAME_FIELDS.items():
            _require(field in frame, f"frame {i}: missing field {field!r}")
            _require(
                isinstance(frame[field], types) and not isinstance(frame[field], bool),
                f"frame {i}: field {field!r} has wrong type",
            )
            if field != "t" and not math.isfinite(float(frame[field])):
                raise SessionError(f"frame {i}: field {field!r} is not finite")
        _require(frame["t"] > prev_t, f"frame {i}: t={frame['t']} not strictly increasing")
        _require(frame["t"] == i, f"frame {i}: t={frame['t']} not contiguous from 0")
        prev_t = frame["t"]

    score = doc.get("score")
    _require(isinstance(score, (int, float)) and not isinstance(score, bool),
             "missing numeric score")
    return SessionLog(config=config, frames=frames, score=float(score))


def _plant_config(config: dict) -> PlantConfig:
    return PlantConfig(
        a=float(config["a"]),
        w_bound=float(config["w_bound"]),
        r_step_bound=float(config["r_step_bound"]),
        T_r=int(config["advance_warning"]),
        horizon=int(config["horizon"]),
        x0=float(config["x0"]),
    )


def _replay_trajectory(log: SessionLog, cfg: PlantConfig) -> Trajectory:
    """Rebuild the full trajectory from the frames via the plant recurrence."""
    n = log.horizon
    frames = log.frames
    v = [float(f["v"]) for f in frames]
    r = [float(f["r"]) for f in frames]
    u = [float(f["u_player"]) for f in frames]
    x = [cfg.x0]
    w = []
    for t in range(n):
        w_t = v[t] + (r[t - cfg.T_r] if t >= cfg.T_r else 0.0)
        w.append(w_t)
        x.append(cfg.a * x[t] + u[t] + w_t)
    pad = lambda seq: seq + [0.0]
    return Trajectory(a=cfg.a, x=x, u=pad(u), u_L=pad(list(u)),
                      u_H=pad([0.0] * n), w=pad(w), v=pad(v), r=pad(r))


def _predicted_commands(log: SessionLog, cfg: PlantConfig) -> tuple[list[float], list[float]]:
    """Synthesized per-layer commands for the same seed and configuration.

    Both model layers run at the player's input delay, unquantized; the
    predictions are the model's own closed-loop commands on the replayed
    disturbances.
    """
    d = int(log.config["input_delay"])
    n = log.horizon
    low_delay = min(d, n - 1)
    high_delay = min(d, n - 1)
    low_ctrl = synthesize_bump_controller(cfg.a, low_delay, QuantizerSpec(),
                                          w_bound=cfg.w_bound)
    high_ctrl = synthesize_trail_controller(cfg.T_r, high_delay, QuantizerSpec())
    low = LayerSpec("low", low_delay, controller=low_ctrl)
    high = LayerSpec("high", high_delay, controller=high_ctrl)
    dist = DisturbanceSpec(kind=log.config["disturbance_kind"],
                           seed=int(log.config["seed"]))
    traj = simulate_layered(cfg, low, high, dist)
    return traj.u_L[:n], traj.u_H[:n]


def analyze_log(log: SessionLog) -> dict:
    """Full ingestion analysis; raises SessionError on any inconsistency."""
    cfg = _plant_config(log.config)
    dist = DisturbanceSpec(kind=log.config["disturbance_kind"],
                           seed=int(log.config["seed"]))
    v_ref, r_ref = make_disturbances(dist, cfg)
    for i, frame in enumerate(log.frames):
        if abs(float(frame["v"]) - v_ref[i]) > _REPLAY_TOL or (
            abs(float(frame["r"]) - r_ref[i]) > _REPLAY_TOL
        ):
            raise SessionError(
                f"frame {i}: log inconsistent with declared seed"
            )

    traj = _replay_trajectory(log, cfg)
    for i, frame in enumerate(log.frames):
        if abs(float(frame["x"]) - traj.x[i]) > _REPLAY_TOL:
            raise SessionError(
                f"frame {i}: recorded state diverges from plant replay"
            )

    norm = log.config["score_norm"]
    recomputed = evaluate_cost(traj, norm)
    if abs(recomputed - log.score) > _SCORE_TOL:
        raise SessionError(
            f"embedded score {log.score!r} does not match recomputed {recomputed!r}"
        )

    # additive two-layer decomposition of the player's commands
    u_L_pred, u_H_pred = _predicted_commands(log, cfg)
    u_player = np.array([float(f["u_player"]) for f in log.frames])
    design = np.column_stack([u_L_pred, u_H_pred, np.ones(log.horizon)])
    coef, _, _, _ = np.linalg.lstsq(design, u_player, rcond=None)
    residuals = u_player - design @ coef
    residual_rms = float(np.sqrt(np.mean(residuals**2)))

    open_loop = [cfg.x0]
    for t in range(log.horizon):
        open_loop.append(cfg.a * open_loop[t] + traj.w[t])
    open_loop_traj = Trajectory(
        a=cfg.a, x=open_loop,
        u=[0.0] * (log.horizon + 1), u_L=[0.0] * (log.horizon + 1),
        u_H=[0.0] * (log.horizon + 1), w=list(traj.w), v=list(traj.v),
        r=list(traj.r),
    )

    return {
        "frames": log.horizon,
        "score_embedded": log.score,
        "score_recomputed": recomputed,
        "score_norm": norm,
        "cost_linf": evaluate_cost(traj, "linf"),
        "cost_rms": evaluate_cost(traj, "rms"),
        "open_loop_cost": evaluate_cost(open_loop_traj, norm),
        "regression": {
            "coef_low": float(coef[0]),
            "coef_high": float(coef[1]),
            "intercept": float(coef[2]),
            "residual_rms": residual_rms,
        },
        "seed": int(log.config["seed"]),
        "seed_replay_ok": True,
    }


def ingest_session(path: str) -> dict:
    """Load, validate, and analyze a session log file."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SessionError(f"not valid JSON: {exc}") from exc
    log = parse_session(doc)
    return analyze_log(log)
