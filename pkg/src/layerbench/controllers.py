"""Controller specifications and their runtime realizations.

A controller receives, at each step t, the history of sensed (delayed and
quantized) samples available so far plus the record of its own past
commands, and returns its command. Predicting through own commands rather
than the summed plant input keeps the layers decoupled: each layer treats
the other's net effect as part of the disturbance it measures. Specs are
plain data so they serialize into configs; `build_controller` turns a spec
into a fresh callable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .components import QuantizerSpec

__all__ = ["ControllerSpec", "LayerSpec", "build_controller"]


@dataclass(frozen=True)
class ControllerSpec:
    """What a layer's controller computes.

    kind "zero" ignores everything; "custom-linear" applies fixed gains over
    the sensed history (newest sample first); "synthesized" carries the
    parameters produced by the synthesis routines (role "bump" for the
    predictor-cancellation law on plant state, role "trail" for delayed
    exact-timing cancellation of the reference).
    """

    kind: str = "zero"
    gains: tuple[float, ...] = ()
    role: str | None = None
    a: float | None = None
    T: int | None = None
    T_r: int | None = None
    insufficient_warning: bool = False
    quantizer: QuantizerSpec | None = None

    def __post_init__(self):
        if self.kind not in ("zero", "custom-linear", "synthesized"):
            raise ValueError(f"unknown controller kind {self.kind!r}")
        if self.kind == "synthesized" and self.role not in ("bump", "trail"):
            raise ValueError("synthesized controllers carry role 'bump' or 'trail'")


@dataclass(frozen=True)
class LayerSpec:
    """One control layer: delay, quantizer, controller, and what it senses.

    The low layer senses plant state x; the high layer senses the trail r
    by default (senses="trail"). senses="state" selects the variant where
    the high layer computes from full state history and its command is
    applied T steps late.
    """

    name: str
    T: int
    quantizer: QuantizerSpec = field(default_factory=QuantizerSpec)
    controller: ControllerSpec = field(default_factory=ControllerSpec)
    senses: str | None = None

    def __post_init__(self):
        if self.name not in ("low", "high", "fast", "slow"):
            raise ValueError(f"layer name must be low/high/fast/slow, got {self.name!r}")
        if self.T < 0:
            raise ValueError(f"layer delay must be >= 0, got {self.T}")
        if self.senses is None:
            object.__setattr__(self, "senses", "state" if self.name in ("low", "fast") else "trail")
        if self.senses not in ("state", "trail"):
            raise ValueError(f"senses must be 'state' or 'trail', got {self.senses!r}")


class ZeroController:
    def command(self, t: int, sensed: list[float], u_own: list[float]) -> float:
        return 0.0


class CustomLinearController:
    """u(t) = sum_i gains[i] * sensed[-1-i]; zero until enough history."""

    def __init__(self, gains: tuple[float, ...]):
        self.gains = gains

    def command(self, t: int, sensed: list[float], u_own: list[float]) -> float:
        if len(sensed) < len(self.gains):
            return 0.0
        return sum(g * sensed[-1 - i] for i, g in enumerate(self.gains))


class BumpPredictorController:
    """Certainty-equivalent predictor cancellation from delayed state.

    With the newest sensed sample being the (quantized) state T steps old,
    predict the layer's share of the current state by rolling the plant
    forward through the layer's own past commands,

        xhat(t) = a^T * sensed[t-T] + sum_{j=1..T} a^(j-1) * u_own(t-j),

    and command u(t) = -a * xhat(t) so the predicted next state is zero.
    Idle (zero command) until the first sample arrives.
    """

    def __init__(self, a: float, T: int):
        self.a = a
        self.T = T

    def command(self, t: int, sensed: list[float], u_own: list[float]) -> float:
        if t < self.T or not sensed:
            return 0.0
        xhat = self.a**self.T * sensed[-1]
        for j in range(1, self.T + 1):
            if t - j >= 0:
                xhat += self.a ** (j - 1) * u_own[t - j]
        return -self.a * xhat


class TrailCancelController:
    """Exact-timing cancellation of the advance-warned reference.

    The sensed history holds quantized trail values up to t - T_H; since
    T_H <= T_r the value entering the plant now, r(t - T_r), is already
    sensed, and u(t) = -sensed[t - T_r] cancels it up to quantization error.
    A controller flagged insufficient_warning (T_H > T_r) stays at zero.
    """

    def __init__(self, T_r: int, insufficient_warning: bool):
        self.T_r = T_r
        self.insufficient_warning = insufficient_warning

    def command(self, t: int, sensed: list[float], u_own: list[float]) -> float:
        if self.insufficient_warning:
            return 0.0
        idx = t - self.T_r
        if idx < 0 or idx >= len(sensed):
            return 0.0
        return -sensed[idx]


def build_controller(spec: ControllerSpec):
    """Fresh runtime controller for a spec."""
    if spec.kind == "zero":
        return ZeroController()
    if spec.kind == "custom-linear":
        return CustomLinearController(spec.gains)
    if spec.role == "bump":
        return BumpPredictorController(spec.a, spec.T)
    return TrailCancelController(spec.T_r, spec.insufficient_warning)
