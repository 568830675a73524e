"""Scalar plant dynamics, disturbance generation, trajectories, and costs.

The plant is the scalar recurrence

    x(t+1) = a*x(t) + u(t) + w(t),      w(t) = v(t) + r(t - T_r)

where v is a bounded bump disturbance, r is a bounded-increment trail the
controller gets T_r steps of advance warning about, and u is the summed
command of the control layers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .rng import SplitMix64

__all__ = [
    "PlantConfig",
    "DisturbanceSpec",
    "Trajectory",
    "step",
    "make_disturbances",
    "evaluate_cost",
]


@dataclass(frozen=True)
class PlantConfig:
    """Plant pole, disturbance bounds, horizon, and advance warning."""

    a: float = 1.0
    w_bound: float = 1.0
    r_step_bound: float = 1.0
    T_r: int = 0
    horizon: int = 1
    x0: float = 0.0

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.T_r < 0:
            raise ValueError(f"T_r must be >= 0, got {self.T_r}")
        if self.w_bound < 0:
            raise ValueError(f"w_bound must be >= 0, got {self.w_bound}")
        if self.r_step_bound < 0:
            raise ValueError(f"r_step_bound must be >= 0, got {self.r_step_bound}")
        for name in ("a", "w_bound", "r_step_bound", "x0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class DisturbanceSpec:
    """How to produce the bump sequence v and trail r.

    kind:
      seeded-random     v uniform in [-w_bound, w_bound], r a random walk with
                        increments uniform in [-r_step_bound, r_step_bound].
      vertex-adversarial  v takes extreme values {-w_bound, +w_bound} with
                        seeded random signs; r a vertex walk (steps of exactly
                        +/- r_step_bound).
      explicit          caller-supplied sequences, validated against bounds.
    """

    kind: str = "seeded-random"
    seed: int = 0
    v: tuple[float, ...] | None = None
    r: tuple[float, ...] | None = None

    _KINDS = ("seeded-random", "vertex-adversarial", "explicit")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown disturbance kind {self.kind!r}")
        if self.kind == "explicit" and (self.v is None or self.r is None):
            raise ValueError("explicit disturbances require both v and r sequences")


@dataclass
class Trajectory:
    """Time-indexed record of every loop signal.

    x has horizon+1 entries (x[0] is the initial state); the input signals
    u, u_L, u_H, w, v, r are stored with horizon+1 entries as well, where the
    final entry is a 0.0 pad so exported tables are rectangular. The recurrence
    x[t+1] = a*x[t] + u[t] + w[t] holds for t in [0, horizon).
    """

    a: float
    x: list[float]
    u: list[float] = field(default_factory=list)
    u_L: list[float] = field(default_factory=list)
    u_H: list[float] = field(default_factory=list)
    w: list[float] = field(default_factory=list)
    v: list[float] = field(default_factory=list)
    r: list[float] = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return len(self.x) - 1

    def check(self, tol: float = 1e-9) -> None:
        """Verify the recurrence and the command decomposition."""
        n = self.horizon
        for name in ("u", "u_L", "u_H", "w", "v", "r"):
            if len(getattr(self, name)) != n + 1:
                raise ValueError(f"signal {name} has wrong length")
        for t in range(n):
            if abs(self.x[t + 1] - (self.a * self.x[t] + self.u[t] + self.w[t])) > tol:
                raise ValueError(f"recurrence violated at step {t}")
            if abs(self.u[t] - (self.u_L[t] + self.u_H[t])) > tol:
                raise ValueError(f"u != u_L + u_H at step {t}")


def step(x: float, u: float, w: float, a: float = 1.0) -> float:
    """One plant update: a*x + u + w. Rejects non-finite inputs."""
    for name, val in (("x", x), ("u", u), ("w", w), ("a", a)):
        if not math.isfinite(val):
            raise ValueError(f"non-finite input {name}={val!r}")
    return a * x + u + w


def make_disturbances(spec: DisturbanceSpec, cfg: PlantConfig) -> tuple[list[float], list[float]]:
    """Produce (v, r), each of length cfg.horizon, satisfying the bounds.

    Seeded kinds draw v first, then the trail increments, from a single
    SplitMix64 stream, so a given (seed, cfg) pair is fully reproducible.
    """
    n = cfg.horizon
    if spec.kind == "explicit":
        v = list(spec.v)
        r = list(spec.r)
        if len(v) != n or len(r) != n:
            raise ValueError(
                f"explicit sequences must have length {n}, got v:{len(v)} r:{len(r)}"
            )
        for i, val in enumerate(v):
            if not math.isfinite(val) or abs(val) > cfg.w_bound:
                raise ValueError(f"v[{i}]={val!r} violates |v| <= {cfg.w_bound}")
        for i in range(1, n):
            if abs(r[i] - r[i - 1]) > cfg.r_step_bound:
                raise ValueError(
                    f"r[{i}] step {r[i] - r[i - 1]!r} violates bound {cfg.r_step_bound}"
                )
        return v, r

    gen = SplitMix64(spec.seed)
    if spec.kind == "seeded-random":
        v = [gen.next_signed_unit() * cfg.w_bound for _ in range(n)]
        r = [0.0]
        for _ in range(1, n):
            r.append(r[-1] + gen.next_signed_unit() * cfg.r_step_bound)
        return v, r

    # vertex-adversarial: extreme values with seeded signs
    v = [gen.next_sign() * cfg.w_bound for _ in range(n)]
    r = [0.0]
    for _ in range(1, n):
        r.append(r[-1] + gen.next_sign() * cfg.r_step_bound)
    return v, r


def evaluate_cost(traj: Trajectory, norm: str = "linf") -> float:
    """Trajectory cost over x(1..horizon); x(0) is excluded by convention."""
    xs = traj.x[1:]
    if not xs:
        raise ValueError("empty trajectory")
    if norm == "linf":
        return max(abs(x) for x in xs)
    if norm == "rms":
        return math.sqrt(sum(x * x for x in xs) / len(xs))
    raise ValueError(f"unknown norm {norm!r}")
