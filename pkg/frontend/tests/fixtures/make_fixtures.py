"""Regenerate the cross-implementation fixtures from the analysis package:

    python frontend/tests/fixtures/make_fixtures.py

The game's engine tests compare bit-for-bit (RNG) and to 1e-9 (trajectories)
against these values, so the two implementations cannot drift silently.
"""

from __future__ import annotations

import json
from pathlib import Path

from layerbench.architectures import simulate_layered
from layerbench.controllers import LayerSpec
from layerbench.dynamics import DisturbanceSpec, PlantConfig, make_disturbances
from layerbench.rng import SplitMix64
from layerbench.synthesis import synthesize_bump_controller, synthesize_trail_controller

HERE = Path(__file__).parent


def rng_reference() -> dict:
    out = {}
    for seed in (0, 7, 42, 2**63 + 11):
        gen = SplitMix64(seed)
        u64 = [str(gen.next_u64()) for _ in range(8)]
        gen = SplitMix64(seed)
        doubles = [gen.next_double() for _ in range(8)]
        gen = SplitMix64(seed)
        signed = [gen.next_signed_unit() for _ in range(8)]
        gen = SplitMix64(seed)
        signs = [gen.next_sign() for _ in range(8)]
        out[str(seed)] = {"u64": u64, "double": doubles, "signed_unit": signed,
                          "sign": signs}
    return out


ZERO_CONFIG = {
    "seed": 99,
    "horizon": 500,
    "a": 1.0,
    "x0": 0.0,
    "w_bound": 0.25,
    "r_step_bound": 0.15,
    "advance_warning": 12,
    "preview_window": 12,
    "input_delay": 2,
    "u_max": 1.5,
    "tick_ms": 50,
    "score_norm": "linf",
    "disturbance_kind": "seeded-random",
}

PERFECT_CONFIG = dict(ZERO_CONFIG, seed=55, horizon=120, input_delay=0)


def _plant(c: dict) -> PlantConfig:
    return PlantConfig(a=c["a"], w_bound=c["w_bound"], r_step_bound=c["r_step_bound"],
                       T_r=c["advance_warning"], horizon=c["horizon"], x0=c["x0"])


def zero_run() -> dict:
    cfg = _plant(ZERO_CONFIG)
    dist = DisturbanceSpec(kind=ZERO_CONFIG["disturbance_kind"], seed=ZERO_CONFIG["seed"])
    traj = simulate_layered(cfg, LayerSpec("low", 0), LayerSpec("high", 0), dist)
    v, r = make_disturbances(dist, cfg)
    return {"config": ZERO_CONFIG, "x": traj.x, "v": v, "r": r}


def perfect_inputs() -> dict:
    cfg = _plant(PERFECT_CONFIG)
    d = PERFECT_CONFIG["input_delay"]
    low = LayerSpec("low", d, controller=synthesize_bump_controller(cfg.a, d, w_bound=cfg.w_bound))
    high = LayerSpec("high", d, controller=synthesize_trail_controller(cfg.T_r, d))
    dist = DisturbanceSpec(kind=PERFECT_CONFIG["disturbance_kind"], seed=PERFECT_CONFIG["seed"])
    traj = simulate_layered(cfg, low, high, dist)
    n = cfg.horizon
    return {
        "config": PERFECT_CONFIG,
        "inputs": [traj.u_L[t] + traj.u_H[t] for t in range(n)],
    }


if __name__ == "__main__":
    (HERE / "rng_reference.json").write_text(
        json.dumps(rng_reference(), indent=2) + "\n", encoding="utf-8")
    (HERE / "zero_run_seed99.json").write_text(
        json.dumps(zero_run(), indent=2) + "\n", encoding="utf-8")
    (HERE / "perfect_inputs.json").write_text(
        json.dumps(perfect_inputs(), indent=2) + "\n", encoding="utf-8")
    print("fixtures written to", HERE)
