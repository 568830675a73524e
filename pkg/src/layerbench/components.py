"""Speed-accuracy-constrained building blocks: quantizers, delays, frontiers.

A layer's sensing channel is modelled as a delay line plus a quantizer. The
SAT frontier generates the feasible (delay, rate) pairs a layer may occupy:
faster channels carry fewer bits per step, slower ones more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "QuantizerSpec",
    "DelayLine",
    "SatFrontier",
    "IntervalSymbol",
    "quantize_uniform",
    "quantize_log",
    "quantize_dynamic_interval",
    "frontier_points",
    "make_quantizer",
]


@dataclass(frozen=True)
class QuantizerSpec:
    """Quantizer selection for a sensing channel.

    kind "none" passes values through; "uniform" uses R bits over [-M, M]
    (M may be left None for synthesis routines to tune); "logarithmic" and
    "dynamic-interval" use a relative-error density q in (0, 1).
    """

    kind: str = "none"
    R: int | None = None
    M: float | None = None
    q: float | None = None

    def __post_init__(self):
        if self.kind not in ("none", "uniform", "logarithmic", "dynamic-interval"):
            raise ValueError(f"unknown quantizer kind {self.kind!r}")
        if self.kind == "uniform":
            if self.R is None or self.R < 1:
                raise ValueError("uniform quantizer requires R >= 1")
            if self.R >= 52:
                raise ValueError("R >= 52 exceeds representable resolution")
            if self.M is not None and self.M <= 0:
                raise ValueError("uniform quantizer requires M > 0")
        elif self.kind in ("logarithmic", "dynamic-interval"):
            if self.q is None or not 0.0 < self.q < 1.0:
                raise ValueError(f"{self.kind} quantizer requires 0 < q < 1")


class DelayLine:
    """Pure transport delay of T steps; the first T outputs are fill_value.

    Stateful and single-writer: each simulation owns its own instances.
    """

    def __init__(self, T: int, fill_value: float = 0.0):
        if T < 0:
            raise ValueError(f"delay must be >= 0, got {T}")
        self.T = T
        self._buf = [fill_value] * T

    def push(self, value: float) -> float:
        if self.T == 0:
            return value
        out = self._buf.pop(0)
        self._buf.append(value)
        return out


def quantize_uniform(x: float, R: int, M: float) -> tuple[int, float, bool]:
    """Mid-rise uniform quantizer: 2^R equal cells over [-M, M].

    Returns (code, cell-centre value, saturated). Inputs beyond the range
    clamp to the nearest extreme cell and set the saturated flag. For
    non-saturating x the reconstruction error is at most M / 2^R.
    """
    if R < 1:
        raise ValueError(f"R must be >= 1, got {R}")
    if R >= 52:
        raise ValueError("R >= 52 exceeds representable resolution")
    if M <= 0:
        raise ValueError(f"M must be > 0, got {M}")
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    cells = 1 << R
    width = 2.0 * M / cells
    code = math.floor((x + M) / width)
    saturated = abs(x) > M
    code = min(max(code, 0), cells - 1)
    value = -M + (code + 0.5) * width
    return code, value, saturated


def quantize_log(x: float, q: float) -> float:
    """Logarithmic quantizer with relative-error density q.

    Levels are {+/- rho^i : i integer} with rho = (1-q)/(1+q); the returned
    level is the nearest one in absolute distance (the cell boundary
    level/(1+q) is exactly the midpoint of adjacent levels), ties resolving
    to the larger-magnitude level. Guarantees |output - x| <= q*|x| for all
    x != 0, with equality on cell boundaries; quantize_log(0, q) = 0.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must be in (0, 1), got {q}")
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    if x == 0.0:
        return 0.0
    rho = (1.0 - q) / (1.0 + q)
    mag = abs(x)
    i = round(math.log(mag) / math.log(rho))
    # Local scan guards against log roundoff near boundaries: pick the
    # closest level, preferring larger magnitude (smaller i) on ties.
    best_i = None
    best_err = math.inf
    for j in (i - 1, i, i + 1):
        err = abs(rho**j - mag)
        if err < best_err or (err == best_err and (best_i is None or j < best_i)):
            best_err = err
            best_i = j
    level = rho**best_i
    return math.copysign(level, x)


class IntervalSymbol(str, Enum):
    """Two-bit output alphabet of the dynamic-interval quantizer."""

    LEFT = "left"
    RIGHT = "right"
    INSIDE = "inside"


def quantize_dynamic_interval(
    x: float, x_hat: float, q: float
) -> tuple[IntervalSymbol, float]:
    """Coarse quantizer whose cell scales with the current estimate.

    The admissible interval is [x_hat - q*|x_hat|, x_hat + q*|x_hat|]. Values
    inside reconstruct to x_hat; values outside reconstruct to the nearest
    interval endpoint, and the returned symbol says which side x lies on.
    Whenever |x - x_hat| <= q*|x_hat| the reconstruction error is at most
    q*|x_hat|.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must be in (0, 1), got {q}")
    half = q * abs(x_hat)
    lower, upper = x_hat - half, x_hat + half
    if x > upper:
        return IntervalSymbol.RIGHT, upper
    if x < lower:
        return IntervalSymbol.LEFT, lower
    return IntervalSymbol.INSIDE, x_hat


@dataclass(frozen=True)
class SatFrontier:
    """Feasible (delay T, rate R) pairs under a speed-accuracy tradeoff.

    Accuracy grows with delay: a channel that gives up speed carries more
    bits per step (many thin slow axons vs few thick fast ones).

      linear:          R(T) = floor(C - lambda*(T_max - T))
      multiplicative:  R(T) = floor(C / (T_max + 1 - T))

    Pairs with R < 1 are infeasible and dropped; R never decreases as T grows.
    """

    model: str = "linear"
    C: float = 6.0
    lam: float = 2.0
    T_max: int = 2

    def __post_init__(self):
        if self.model not in ("linear", "multiplicative"):
            raise ValueError(f"unknown frontier model {self.model!r}")
        if self.C <= 0:
            raise ValueError("C must be > 0")
        if self.lam <= 0:
            raise ValueError("lambda must be > 0")
        if self.T_max < 0:
            raise ValueError("T_max must be >= 0")


def frontier_points(f: SatFrontier) -> list[tuple[int, int]]:
    """All feasible (T, R) pairs, ascending in T, R nondecreasing."""
    points = []
    for T in range(f.T_max + 1):
        if f.model == "linear":
            R = math.floor(f.C - f.lam * (f.T_max - T))
        else:
            R = math.floor(f.C / (f.T_max + 1 - T))
        if R >= 1:
            points.append((T, R))
    if not points:
        raise ValueError("empty frontier: no feasible pair has R >= 1")
    return points


def make_quantizer(spec: QuantizerSpec):
    """Scalar value->value function realizing the spec (reconstruction only).

    dynamic-interval is excluded here because it needs an estimate argument;
    architectures that use it wire it explicitly.
    """
    if spec.kind == "none":
        return lambda x: x
    if spec.kind == "uniform":
        if spec.M is None:
            raise ValueError("uniform quantizer used before its range M was set")
        R, M = spec.R, spec.M
        return lambda x: quantize_uniform(x, R, M)[1]
    if spec.kind == "logarithmic":
        q = spec.q
        return lambda x: quantize_log(x, q)
    raise ValueError(f"make_quantizer does not support kind {spec.kind!r}")
