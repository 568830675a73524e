"""Worst-case evaluation, DESS sweeps, and the layer-separation check.

Worst cases are searched over vertex ensembles: bump sequences take only the
extreme values +/- w_bound, trail walks take extreme increments, and (for
oracle comparisons) quantized measurement channels contribute adversarial
cell-placement errors at the extremes +/- M/2^R, matching the oracle's game.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .architectures import simulate_layered
from .components import QuantizerSpec, SatFrontier, frontier_points
from .controllers import BumpPredictorController, ControllerSpec, LayerSpec
from .dynamics import DisturbanceSpec, PlantConfig, evaluate_cost, make_disturbances
from .oracle import BudgetError
from .rng import SplitMix64
from .synthesis import synthesize_bump_controller, synthesize_trail_controller

__all__ = [
    "Allocation",
    "SweepResult",
    "SeparationReport",
    "vertex_ensemble",
    "trail_ensemble",
    "worst_case_layered",
    "sector_worst_case",
    "dess_sweep",
    "layer_separation_check",
]

_ENUM_CAP = 1 << 22  # simulated scenarios per allocation before budget error


def vertex_ensemble(horizon: int, w_bound: float) -> np.ndarray:
    """All 2^horizon bump sequences with entries +/- w_bound: (N, horizon)."""
    if w_bound == 0.0:
        return np.zeros((1, horizon))
    combos = np.array(list(product((-w_bound, w_bound), repeat=horizon)))
    return combos.reshape(-1, horizon)


def trail_ensemble(cfg: PlantConfig) -> np.ndarray:
    """All extreme-increment trails over the indices that enter the loop.

    Only r(0 .. horizon-1-T_r) reaches the plant within the horizon; later
    values are held flat. r(0) = 0 always.
    """
    n = cfg.horizon
    active = max(n - 1 - cfg.T_r, 0)
    if active == 0 or cfg.r_step_bound == 0.0:
        return np.zeros((1, n))
    steps = np.array(list(product((-cfg.r_step_bound, cfg.r_step_bound), repeat=active)))
    walks = np.concatenate(
        [np.zeros((steps.shape[0], 1)), np.cumsum(steps, axis=1)], axis=1
    )
    if walks.shape[1] < n:
        pad = np.repeat(walks[:, -1:], n - walks.shape[1], axis=1)
        walks = np.concatenate([walks, pad], axis=1)
    return walks


def _batch_quantizer(spec: QuantizerSpec):
    """Vectorized reconstruction for the quantizer kinds the sweep uses."""
    if spec.kind == "none":
        return lambda x: x
    if spec.kind == "uniform":
        R, M = spec.R, spec.M
        if M is None:
            raise ValueError("uniform quantizer range M unresolved")
        cells = 1 << R
        width = 2.0 * M / cells
        def q(x):
            code = np.clip(np.floor((x + M) / width), 0, cells - 1)
            return -M + (code + 0.5) * width
        return q
    raise ValueError(f"batch evaluation does not support quantizer {spec.kind!r}")


def _batch_layered_costs(
    cfg: PlantConfig, low: LayerSpec, high: LayerSpec, v: np.ndarray, r: np.ndarray
) -> np.ndarray:
    """linf costs of the synthesized two-layer loop over scenario rows.

    Supports zero and synthesized controllers with none/uniform quantizers;
    the scalar `simulate_layered` is the reference implementation and the
    two are cross-checked in the test suite.
    """
    n = cfg.horizon
    a = cfg.a
    N = v.shape[0]
    lc, hc = low.controller, high.controller
    low_active = lc.kind == "synthesized"
    high_active = hc.kind == "synthesized" and not hc.insufficient_warning
    qL = _batch_quantizer(low.quantizer) if low_active else None
    qH = _batch_quantizer(high.quantizer) if high_active else None
    if lc.kind not in ("zero", "synthesized") or hc.kind not in ("zero", "synthesized"):
        raise ValueError("batch evaluation supports zero/synthesized controllers only")
    if lc.kind == "synthesized" and lc.role != "bump":
        raise ValueError("batch evaluation expects a bump law on the low layer")
    if hc.kind == "synthesized" and hc.role != "trail":
        raise ValueError("batch evaluation expects a trail law on the high layer")

    x = np.zeros((N, n + 1))
    x[:, 0] = cfg.x0
    u_low = np.zeros((N, n))
    cost = np.zeros(N)
    for t in range(n):
        w_t = v[:, t] + (r[:, t - cfg.T_r] if t >= cfg.T_r else 0.0)
        u_t = np.zeros(N)
        if low_active and t >= low.T:
            xhat = a**low.T * qL(x[:, t - low.T])
            for j in range(1, low.T + 1):
                if t - j >= 0:
                    xhat = xhat + a ** (j - 1) * u_low[:, t - j]
            u_low[:, t] = -a * xhat
            u_t = u_t + u_low[:, t]
        if high_active and t >= cfg.T_r:
            u_t = u_t + (-qH(r[:, t - cfg.T_r]))
        x[:, t + 1] = a * x[:, t] + u_t + w_t
        cost = np.maximum(cost, np.abs(x[:, t + 1]))
    return cost


def worst_case_layered(
    cfg: PlantConfig,
    low: LayerSpec,
    high: LayerSpec,
    v_ensemble: np.ndarray,
    r_ensemble: np.ndarray,
) -> float:
    """Worst linf cost over the cartesian product of the two ensembles."""
    worst = 0.0
    for r_row in r_ensemble:
        r_block = np.broadcast_to(r_row, (v_ensemble.shape[0], r_row.shape[0]))
        costs = _batch_layered_costs(cfg, low, high, v_ensemble, r_block)
        worst = max(worst, float(costs.max()))
    return worst


def sector_worst_case(
    a: float,
    T: int,
    horizon: int,
    w_bound: float = 1.0,
    meas_radius: float = 0.0,
    x0: float = 0.0,
) -> float:
    """Worst case of the synthesized bump law under the oracle's game.

    Enumerates every vertex bump sequence and, when meas_radius > 0, every
    extreme placement of the measurement error (y = x(t-T) + e,
    e in {-meas_radius, +meas_radius}) -- the same adversary the oracle faces.
    """
    ctrl = BumpPredictorController(a=a, T=T)
    n_meas = max(horizon - T, 0)
    error_patterns: list[tuple[float, ...]]
    if meas_radius > 0.0 and n_meas > 0:
        error_patterns = list(product((-meas_radius, meas_radius), repeat=n_meas))
    else:
        error_patterns = [tuple([0.0] * n_meas)]
    worst = 0.0
    for v_seq in product((-w_bound, w_bound), repeat=horizon):
        for errs in error_patterns:
            x = [x0]
            u: list[float] = []
            sensed: list[float] = []
            for t in range(horizon):
                if t >= T:
                    sensed.append(x[t - T] + errs[t - T])
                u_t = ctrl.command(t, sensed, u)
                u.append(u_t)
                x.append(a * x[t] + u_t + v_seq[t])
            worst = max(worst, max(abs(s) for s in x[1:]))
    return worst


@dataclass(frozen=True)
class Allocation:
    """One sweep cell: frontier points assigned to the two layers."""

    T_L: int
    R_L: int
    T_H: int
    R_H: int
    cost: float | None
    evaluated: bool = True
    note: str = ""

    @property
    def uniform(self) -> bool:
        return (self.T_L, self.R_L) == (self.T_H, self.R_H)

    def sort_key(self):
        return (self.T_L, self.T_H, self.R_L, self.R_H)


@dataclass
class SweepResult:
    allocations: list[Allocation]
    best: Allocation
    best_diverse: Allocation | None
    best_uniform: Allocation | None
    dess_gain: float

    def to_csv(self) -> str:
        lines = ["T_L,R_L,T_H,R_H,cost,evaluated,note"]
        for al in self.allocations:
            cost = "" if al.cost is None else repr(al.cost)
            lines.append(
                f"{al.T_L},{al.R_L},{al.T_H},{al.R_H},{cost},{al.evaluated},{al.note}"
            )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        def alloc(al):
            if al is None:
                return None
            return {
                "T_L": al.T_L, "R_L": al.R_L, "T_H": al.T_H, "R_H": al.R_H,
                "cost": al.cost, "evaluated": al.evaluated, "note": al.note,
            }
        return {
            "allocations": [alloc(al) for al in self.allocations],
            "best": alloc(self.best),
            "best_diverse": alloc(self.best_diverse),
            "best_uniform": alloc(self.best_uniform),
            "dess_gain": self.dess_gain,
        }


def _evaluate_allocation(
    cfg: PlantConfig,
    point_low: tuple[int, int],
    point_high: tuple[int, int],
    mode: str,
    samples: int,
) -> float:
    T_L, R_L = point_low
    T_H, R_H = point_high
    r_cover = max(cfg.horizon - 1 - cfg.T_r, 1) * cfg.r_step_bound
    low_ctrl = synthesize_bump_controller(
        cfg.a, T_L, QuantizerSpec(kind="uniform", R=R_L), w_bound=cfg.w_bound
    )
    high_ctrl = synthesize_trail_controller(
        cfg.T_r, T_H, QuantizerSpec(kind="uniform", R=R_H), r_cover=r_cover
    )
    low = LayerSpec("low", T_L, quantizer=low_ctrl.quantizer, controller=low_ctrl)
    high = LayerSpec("high", T_H, quantizer=high_ctrl.quantizer, controller=high_ctrl)

    if mode == "oracle":
        v_ens = vertex_ensemble(cfg.horizon, cfg.w_bound)
        r_ens = trail_ensemble(cfg)
        if v_ens.shape[0] * r_ens.shape[0] > _ENUM_CAP:
            raise BudgetError(
                f"exhaustive ensemble {v_ens.shape[0]}x{r_ens.shape[0]} exceeds cap"
            )
        return worst_case_layered(cfg, low, high, v_ens, r_ens)

    # adversarial-sim: seeded random vertex draws, a pure function of the
    # allocation and config
    seed = (T_L * 1_000_003 + R_L * 10_007 + T_H * 101 + R_H) & ((1 << 64) - 1)
    gen = SplitMix64(seed)
    n = cfg.horizon
    active = max(n - 1 - cfg.T_r, 0)
    v_rows = np.empty((samples, n))
    r_rows = np.zeros((samples, n))
    for i in range(samples):
        for t in range(n):
            v_rows[i, t] = gen.next_sign() * cfg.w_bound
        level = 0.0
        for j in range(1, active + 1):
            level += gen.next_sign() * cfg.r_step_bound
            r_rows[i, j] = level
        if active:
            r_rows[i, active + 1 :] = r_rows[i, active]
    costs = _batch_layered_costs(cfg, low, high, v_rows, r_rows)
    return float(costs.max())


def dess_sweep(
    frontier: SatFrontier,
    cfg: PlantConfig,
    eval_mode: str = "oracle",
    samples: int = 256,
) -> SweepResult:
    """Evaluate every ordered assignment of frontier points to the layers.

    eval_mode "oracle" enumerates the full vertex ensembles (exact for the
    vertex game, budget permitting); "adversarial-sim" draws seeded random
    vertex scenarios. Unevaluable allocations are flagged rather than
    aborting the sweep. dess_gain = best uniform cost - best overall cost,
    nonnegative by construction; ties break lexicographically on
    (T_L, T_H, R_L, R_H).
    """
    if eval_mode not in ("oracle", "adversarial-sim"):
        raise ValueError(f"unknown eval mode {eval_mode!r}")
    points = frontier_points(frontier)
    allocations: list[Allocation] = []
    for pl in points:
        for ph in points:
            try:
                cost = _evaluate_allocation(cfg, pl, ph, eval_mode, samples)
                allocations.append(Allocation(pl[0], pl[1], ph[0], ph[1], cost))
            except BudgetError as exc:
                allocations.append(
                    Allocation(pl[0], pl[1], ph[0], ph[1], None,
                               evaluated=False, note=str(exc))
                )
    allocations.sort(key=Allocation.sort_key)
    scored = [al for al in allocations if al.evaluated]
    if not scored:
        raise BudgetError("every allocation in the sweep exceeded the budget")

    def best_of(pool):
        pool = sorted(pool, key=lambda al: (al.cost, al.sort_key()))
        return pool[0] if pool else None

    best = best_of(scored)
    best_uniform = best_of([al for al in scored if al.uniform])
    best_diverse = best_of([al for al in scored if not al.uniform])
    gain = 0.0
    if best_uniform is not None:
        gain = best_uniform.cost - best.cost
    return SweepResult(
        allocations=allocations,
        best=best,
        best_diverse=best_diverse,
        best_uniform=best_uniform,
        dess_gain=gain,
    )


@dataclass(frozen=True)
class SeparationReport:
    joint_cost: float
    low_solo_cost: float
    high_solo_cost: float
    separable: bool

    @property
    def sum_of_solo_costs(self) -> float:
        return self.low_solo_cost + self.high_solo_cost


def layer_separation_check(
    cfg: PlantConfig,
    low: LayerSpec,
    high: LayerSpec,
    dist: DisturbanceSpec | None = None,
    tol: float = 1e-9,
) -> SeparationReport:
    """Compare the joint worst case against the sum of per-subproblem costs.

    The decomposition follows the exogenous inputs: the bump subproblem is
    the low layer alone against the vertex ensemble with the trail zeroed;
    the trail subproblem is the full loop driven by the trail alone (the low
    layer's reflex cleanup of trail residuals belongs to the trail response).
    For a linear low layer the joint trajectory is exactly the sum of the
    two, so with the trail response peaking after the bump response's
    burn-in the worst cases add exactly. separable means
    |joint - (low + high)| <= tol.
    """
    dist = dist or DisturbanceSpec(kind="seeded-random", seed=0)
    _, r = make_disturbances(dist, cfg)
    r_row = np.array([r])
    zero_row = np.zeros((1, cfg.horizon))
    v_ens = vertex_ensemble(cfg.horizon, cfg.w_bound)
    no_high = LayerSpec(high.name, high.T, quantizer=high.quantizer,
                        controller=ControllerSpec(kind="zero"), senses=high.senses)

    joint = worst_case_layered(cfg, low, high, v_ens, r_row)
    low_solo = worst_case_layered(cfg, low, no_high, v_ens, zero_row)
    high_traj = simulate_layered(
        cfg, low, high,
        DisturbanceSpec(kind="explicit", v=tuple([0.0] * cfg.horizon), r=tuple(r)),
    )
    high_solo = evaluate_cost(high_traj, "linf")
    return SeparationReport(
        joint_cost=joint,
        low_solo_cost=low_solo,
        high_solo_cost=high_solo,
        separable=math.isclose(joint, low_solo + high_solo, rel_tol=0.0, abs_tol=tol),
    )
