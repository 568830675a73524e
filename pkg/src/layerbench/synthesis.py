"""Per-layer controller synthesis and the innovation-feedback stability check.

The bump controller is the certainty-equivalent predictor-cancellation law;
with an untuned uniform quantizer its range M is chosen self-consistently so
the worst-case closed-loop state never saturates the quantizer. The trail
controller is exact-timing cancellation whenever the advance warning covers
the sensing delay, and the declared zero-controller fallback otherwise.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .components import QuantizerSpec
from .controllers import ControllerSpec

__all__ = [
    "StabilityReport",
    "synthesize_bump_controller",
    "synthesize_trail_controller",
    "stability_arch2",
]


def _resolved_uniform(q: QuantizerSpec, cover: float) -> QuantizerSpec:
    """Fill in a uniform quantizer's range when synthesis must tune it."""
    if q.kind != "uniform" or q.M is not None:
        return q
    if cover <= 0:
        raise ValueError("cannot tune quantizer range: needed cover is not positive")
    return QuantizerSpec(kind="uniform", R=q.R, M=cover)


def synthesize_bump_controller(
    a: float,
    T_L: int,
    quantizer: QuantizerSpec | None = None,
    w_bound: float = 1.0,
) -> ControllerSpec:
    """Predictor-cancellation law for the state-sensing layer.

    The controller maintains xhat(t) = a^T_L * sensed(t - T_L) +
    sum_{j=1..T_L} a^(j-1) * u(t-j) and commands u(t) = -a * xhat(t), which
    zeroes the predicted next state. Unquantized, its worst case against
    |v| <= w_bound is sum_{j=0..T_L} |a|^j * w_bound.

    A uniform quantizer given without a range M gets one tuned here: the
    closed loop satisfies |x| <= c with c = |a|^(T_L+1) * M/2^R +
    sum |a|^j w_bound, and M = c is the smallest self-consistent range
    (states then never saturate). Requires |a|^(T_L+1) < 2^R.
    """
    if T_L < 0:
        raise ValueError(f"T_L must be >= 0, got {T_L}")
    q = quantizer or QuantizerSpec()
    if q.kind == "uniform" and q.M is None:
        window = sum(abs(a) ** j for j in range(T_L + 1)) * w_bound
        shrink = abs(a) ** (T_L + 1) / 2**q.R
        if shrink >= 1.0:
            raise ValueError(
                f"uniform quantizer with R={q.R} cannot stabilize pole {a} at delay {T_L}"
            )
        q = _resolved_uniform(q, window / (1.0 - shrink))
    return ControllerSpec(kind="synthesized", role="bump", a=a, T=T_L, quantizer=q)


def synthesize_trail_controller(
    T_r: int,
    T_H: int,
    quantizer: QuantizerSpec | None = None,
    r_cover: float | None = None,
) -> ControllerSpec:
    """Exact-timing trail cancellation, or the declared zero fallback.

    With T_H <= T_r the value entering the plant now was sensed T_r - T_H
    steps ago, so u(t) = -Q(r(t - T_r)) cancels it up to quantization error.
    With T_H > T_r no causal cancellation exists; the zero controller is
    returned with insufficient_warning set. A uniform quantizer without a
    range M takes M = r_cover (the caller's bound on |r|).
    """
    if T_H < 0 or T_r < 0:
        raise ValueError("delays must be >= 0")
    q = quantizer or QuantizerSpec()
    if T_H > T_r:
        return ControllerSpec(
            kind="synthesized",
            role="trail",
            T=T_H,
            T_r=T_r,
            insufficient_warning=True,
            quantizer=q,
        )
    if q.kind == "uniform" and q.M is None:
        if r_cover is None:
            raise ValueError("uniform trail quantizer needs M or r_cover")
        q = _resolved_uniform(q, r_cover)
    return ControllerSpec(kind="synthesized", role="trail", T=T_H, T_r=T_r, quantizer=q)


@dataclass(frozen=True)
class StabilityReport:
    """Closed-loop spectrum and small-gain margin of the innovation loop."""

    eigenvalues: tuple[complex, complex]
    spectral_radius: float
    small_gain: float
    stable: bool
    notes: str


def stability_arch2(a: float, k: float, q: float) -> StabilityReport:
    """Certify the quantized innovation-feedback loop.

    The nominal closed loop on (x, xhat) is [[a+k, -k], [1, 0]] with
    characteristic polynomial z^2 - (a+k) z + k; the loop is robustly stable
    iff both eigenvalue moduli are < 1 and the quantizer loop gain |k*q| < 1.
    Radii within 1e-12 of the unit circle count as not strictly stable,
    since the quadratic roots carry a few ulps of rounding (a unit root such
    as the a=1 case must never be misread as stable). The notes record how
    the folklore one-line inequality (a+k) +/- sqrt((a+k)^2 + 4k) < 2
    compares with the computed spectrum.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must be in (0, 1), got {q}")
    s = a + k
    disc = s * s - 4.0 * k
    root = cmath.sqrt(complex(disc, 0.0))
    lam1 = (s + root) / 2.0
    lam2 = (s - root) / 2.0
    radius = max(abs(lam1), abs(lam2))
    small_gain = abs(k * q)
    stable = radius < 1.0 - 1e-12 and small_gain < 1.0

    strictly_inside = radius < 1.0 - 1e-12
    alt = cmath.sqrt(complex(s * s + 4.0 * k, 0.0))
    alt_vals = (s + alt, s - alt)
    alt_ok = all(abs(z.imag) < 1e-12 and z.real < 2.0 for z in alt_vals)
    agreement = "agrees" if alt_ok == strictly_inside else "disagrees"
    notes = (
        f"spectral radius {radius:.6g} ({'<' if strictly_inside else '>='} 1), "
        f"quantizer loop gain |k*q| = {small_gain:.6g}; "
        f"one-line test (a+k) +/- sqrt((a+k)^2+4k) < 2 evaluates to {alt_ok} "
        f"and {agreement} with the eigenvalue test."
    )
    if abs(radius - 1.0) <= 1e-12:
        notes += " Unit root present: not strictly stable."
    return StabilityReport(
        eigenvalues=(lam1, lam2),
        spectral_radius=radius,
        small_gain=small_gain,
        stable=stable,
        notes=notes,
    )
