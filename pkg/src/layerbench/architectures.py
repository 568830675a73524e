"""Executable realizations of the three internal-feedback architectures.

- `simulate_layered`: two additive layers; the low layer rejects bumps from
  quantized delayed state, the high layer tracks the advance-warned trail.
- `simulate_arch2`: single loop with a dynamic-interval quantizer on the
  innovation, whose admissible interval is set by the estimator (one
  internal feedback pathway, estimator -> sensor).
- `simulate_arch3`: a fast quantized layer acts promptly on the disturbance
  record while a slow exact layer, fed the fast layer's quantized actions
  over an internal feedback pathway, cancels each quantization error exactly
  once its own exact information catches up.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .components import (
    IntervalSymbol,
    QuantizerSpec,
    make_quantizer,
    quantize_dynamic_interval,
)
from .controllers import LayerSpec, build_controller
from .dynamics import DisturbanceSpec, PlantConfig, Trajectory, make_disturbances

__all__ = [
    "Arch2Params",
    "Arch2Result",
    "Arch3Result",
    "IfpMessage",
    "simulate_layered",
    "simulate_arch2",
    "simulate_arch3",
]


def _pad(seq: list[float], n: int) -> list[float]:
    return seq + [0.0] * (n + 1 - len(seq))


def simulate_layered(
    cfg: PlantConfig,
    low: LayerSpec,
    high: LayerSpec,
    dist: DisturbanceSpec,
) -> Trajectory:
    """Run the two-layer loop and record every signal.

    At each step the low command is the low controller applied to the
    quantized state history up to t - T_L, the high command the high
    controller applied to the quantized trail history up to t - T_H, and
    their sum drives the plant with w(t) = v(t) + r(t - T_r). With
    high.senses == "state" the high controller reads quantized state history
    instead and its command is applied T_H steps late.
    """
    n = cfg.horizon
    for layer in (low, high):
        if layer.T >= n:
            raise ValueError(
                f"layer {layer.name!r} delay {layer.T} must be < horizon {n}"
            )
    v, r = make_disturbances(dist, cfg)
    q_low = make_quantizer(low.quantizer)
    q_high = make_quantizer(high.quantizer)
    ctrl_low = build_controller(low.controller)
    ctrl_high = build_controller(high.controller)

    x = [cfg.x0]
    u = []
    u_L = []
    u_H = []
    w = []
    low_sensed: list[float] = []
    high_sensed: list[float] = []
    high_pipeline = [0.0] * high.T  # only used when high senses state

    for t in range(n):
        w_t = v[t] + (r[t - cfg.T_r] if t >= cfg.T_r else 0.0)
        if t >= low.T:
            low_sensed.append(q_low(x[t - low.T]))
        uL = ctrl_low.command(t, low_sensed, u_L)

        if high.senses == "trail":
            if t >= high.T:
                high_sensed.append(q_high(r[t - high.T]))
            uH = ctrl_high.command(t, high_sensed, u_H)
        else:
            high_sensed.append(q_high(x[t]))
            computed = ctrl_high.command(t, high_sensed, u_H)
            if high.T == 0:
                uH = computed
            else:
                uH = high_pipeline.pop(0)
                high_pipeline.append(computed)

        u_t = uL + uH
        x.append(cfg.a * x[t] + u_t + w_t)
        u_L.append(uL)
        u_H.append(uH)
        u.append(u_t)
        w.append(w_t)

    return Trajectory(
        a=cfg.a,
        x=x,
        u=_pad(u, n),
        u_L=_pad(u_L, n),
        u_H=_pad(u_H, n),
        w=_pad(w, n),
        v=_pad(list(v), n),
        r=_pad(list(r), n),
    )


@dataclass(frozen=True)
class Arch2Params:
    """Innovation-feedback loop parameters.

    The loop is x(t+1) = a*x(t) + k*(x(t) - xhat(t)) + w(t) with the
    estimator xhat(t+1) = x(t); when quantized, the innovation reaches the
    gain k through a dynamic-interval quantizer of density q centred on the
    current estimate.
    """

    a: float
    k: float
    q: float
    quantized: bool = True

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must be in (0, 1), got {self.q}")


@dataclass
class Arch2Result:
    traj: Trajectory
    x_hat: list[float]
    w_hat: list[float]
    symbols: list[IntervalSymbol | None]


def simulate_arch2(p: Arch2Params, dist: DisturbanceSpec, cfg: PlantConfig) -> Arch2Result:
    """Run the innovation-feedback loop with the estimator-scaled quantizer.

    Returns the plant trajectory, the estimator sequence, the per-step
    innovation residual w_hat (diagnostic only, not used in the dynamics),
    and the quantizer symbol stream. With quantized=False the loop matches
    the linear two-state iteration [[a+k, -k], [1, 0]] exactly.
    """
    n = cfg.horizon
    v, r = make_disturbances(dist, cfg)
    x = [cfg.x0]
    x_hat = [0.0]
    u = []
    w = []
    w_hat = []
    symbols: list[IntervalSymbol | None] = []

    for t in range(n):
        w_t = v[t] + (r[t - cfg.T_r] if t >= cfg.T_r else 0.0)
        if p.quantized:
            sym, value = quantize_dynamic_interval(x[t], x_hat[t], p.q)
            innovation = value - x_hat[t]
            symbols.append(sym)
        else:
            innovation = x[t] - x_hat[t]
            symbols.append(None)
        u_t = p.k * innovation
        w_hat.append(x[t] - p.a * x_hat[t] - p.k * (x[t] - x_hat[t]))
        x.append(p.a * x[t] + u_t + w_t)
        x_hat.append(x[t])
        u.append(u_t)
        w.append(w_t)

    traj = Trajectory(
        a=p.a,
        x=x,
        u=_pad(u, n),
        u_L=_pad(list(u), n),
        u_H=_pad([0.0] * n, n),
        w=_pad(w, n),
        v=_pad(list(v), n),
        r=_pad(list(r), n),
    )
    return Arch2Result(traj=traj, x_hat=x_hat, w_hat=w_hat, symbols=symbols)


@dataclass(frozen=True)
class IfpMessage:
    """One fast-to-slow message: the quantized action the fast layer took."""

    t: int
    u_fast: float
    w_quantized: float


@dataclass
class Arch3Result:
    traj: Trajectory
    ifp_log: list[IfpMessage]
    corrections: list[tuple[int, float]]


def simulate_arch3(
    cfg: PlantConfig,
    fast: LayerSpec,
    slow: LayerSpec,
    dist: DisturbanceSpec,
) -> Arch3Result:
    """Run the two-path loop with exact delayed correction of quantization.

    Both layers act on the reconstructed disturbance record w. The fast
    layer sees w through its quantizer at delay fast.T and cancels each
    disturbance as soon as visible: u_f(t) = -a^fast.T * Q(w(t - fast.T)).
    The slow layer sees w exactly at delay slow.T, recomputes what the fast
    action should have been, and subtracts the propagated difference:

        u_s(t) = -a^(slow.T - fast.T) * (u_f(s) - u_exact(s)),  s = t - (slow.T - fast.T)

    so the error injected by any single fast action is out of the loop
    slow.T - fast.T steps later. The IFP log carries every quantized fast
    action; corrections lists the nonzero slow commands.
    """
    if fast.T >= slow.T:
        raise ValueError(
            f"fast delay {fast.T} must be strictly less than slow delay {slow.T}"
        )
    n = cfg.horizon
    if slow.T >= n:
        raise ValueError(f"slow delay {slow.T} must be < horizon {n}")
    a = cfg.a
    lag = slow.T - fast.T
    q_fast = make_quantizer(fast.quantizer)
    v, r = make_disturbances(dist, cfg)

    x = [cfg.x0]
    u = []
    u_f_seq = []
    u_s_seq = []
    w = []
    ifp_log: list[IfpMessage] = []
    corrections: list[tuple[int, float]] = []

    for t in range(n):
        w_t = v[t] + (r[t - cfg.T_r] if t >= cfg.T_r else 0.0)
        w.append(w_t)

        if t >= fast.T:
            w_quant = q_fast(w[t - fast.T])
            u_f = -(a**fast.T) * w_quant
            ifp_log.append(IfpMessage(t=t, u_fast=u_f, w_quantized=w_quant))
        else:
            u_f = 0.0

        u_s = 0.0
        if t >= slow.T:
            s = t - lag
            msg = ifp_log[s - fast.T]
            u_exact = -(a**fast.T) * w[s - fast.T]
            u_s = -(a**lag) * (msg.u_fast - u_exact)
            if u_s != 0.0:
                corrections.append((t, u_s))

        u_t = u_f + u_s
        x.append(a * x[t] + u_t + w_t)
        u_f_seq.append(u_f)
        u_s_seq.append(u_s)
        u.append(u_t)

    traj = Trajectory(
        a=a,
        x=x,
        u=_pad(u, n),
        u_L=_pad(u_f_seq, n),
        u_H=_pad(u_s_seq, n),
        w=_pad(w, n),
        v=_pad(list(v), n),
        r=_pad(list(r), n),
    )
    return Arch3Result(traj=traj, ifp_log=ifp_log, corrections=corrections)
