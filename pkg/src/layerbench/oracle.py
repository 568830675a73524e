"""Exhaustive minimax oracle for the delayed, quantized bump-rejection game.

Solves, by backward induction over information sets, the zero-sum game

    controller (minimizes)  vs  disturbance adversary (maximizes)

on the scalar plant x(t+1) = a*x(t) + u(t) + v(t) with vertex disturbances
v(t) in {-w_bound, +w_bound} and cost max_t |x(t)|. The controller observes
the state T steps late, either exactly or through a uniform quantizer with
at most four cells, and its actions are drawn from a finite candidate set
(the interval-recentering action plus offsets on a w_bound/2 grid). The
returned cost is the exact minimax value of that discretized game; because
the candidate set contains the synthesized predictor-cancellation actions,
the oracle value never exceeds any synthesized controller's worst case.

A quantized measurement channel is treated as its worst case: the adversary
places the cell grid, so the controller reads y = x(t-T) + e with the error
e picked adversarially from the extremes {-M/2^R, +M/2^R} of the cell-radius
ball at every measurement. Distinct worlds landing on equal y stay
indistinguishable, which is exactly the information damage quantization
inflicts; against vertex disturbances a fixed benign grid would leak the
state exactly and the game would degenerate.

An information set is carried as the tuple of "worlds" (disturbance
histories indistinguishable to the controller), each with its running state
window and accumulated cost; observations partition worlds, and the
adversary collects the worst branch.
"""

from __future__ import annotations

from dataclasses import dataclass

from .components import QuantizerSpec
from .controllers import LayerSpec
from .dynamics import PlantConfig

__all__ = ["OracleResult", "BudgetError", "minimax_oracle"]

_ROUND = 12


class BudgetError(RuntimeError):
    """Raised when the game tree exceeds the node budget; never truncates."""


@dataclass
class OracleResult:
    minimax_cost: float
    policy: dict
    nodes_expanded: int

    def to_dict(self, with_policy: bool = True) -> dict:
        doc = {
            "minimax_cost": self.minimax_cost,
            "nodes_expanded": self.nodes_expanded,
        }
        if with_policy:
            doc["policy"] = self.policy
        return doc

    def to_csv(self) -> str:
        return (
            "minimax_cost,nodes_expanded\n"
            f"{self.minimax_cost!r},{self.nodes_expanded}\n"
        )


class _Solver:
    def __init__(
        self,
        a: float,
        w_bound: float,
        x0: float,
        T: int,
        horizon: int,
        quantizer: QuantizerSpec,
        grid_radius: int,
        grid_pitch: float | None,
        node_cap: int,
    ):
        self.a = a
        self.W = w_bound
        self.x0 = x0
        self.T = T
        self.H = horizon
        self.quantizer = quantizer
        self.K = grid_radius
        self.pitch = grid_pitch if grid_pitch is not None else (w_bound / 2.0 or 1.0)
        self.node_cap = node_cap
        self.nodes = 0
        self.memo: dict = {}
        if quantizer.kind == "uniform":
            radius = quantizer.M / 2**quantizer.R
            self.meas_errors = (-radius, radius)
        else:
            self.meas_errors = (0.0,)

    def _canon(self, worlds):
        # identical worlds behave identically forever: dedupe via the set
        return tuple(
            sorted(
                {
                    (tuple(round(s, _ROUND) for s in xs), round(c, _ROUND))
                    for xs, c in worlds
                }
            )
        )

    def _partition(self, t, worlds):
        """Group worlds by the newly revealed measurement of x(t-T).

        Entering the observation phase at time t, a world's state window xs
        covers x(t-L+1..t) with L = len(xs), so the measurement sits at index
        L-1-T. Entries at or before it are never needed again, except the
        current state, which always stays. With a quantized channel each
        world branches over the adversarial cell-placement error, and worlds
        reading equal y pool into one cell.
        """
        if t < self.T:
            return None
        cells: dict = {}
        for xs, c in worlds:
            idx = len(xs) - 1 - self.T
            trimmed = xs[idx + 1 :] if idx + 1 < len(xs) else (xs[-1],)
            for e in self.meas_errors:
                key = round(xs[idx] + e, _ROUND)
                cells.setdefault(key, []).append((trimmed, c))
        return cells

    def _observe(self, t, worlds):
        """Observation phase: reveal x(t-T), adversary picks the worst cell."""
        if t == self.H:
            return max(c for _, c in worlds)
        cells = self._partition(t, worlds)
        if cells is None:
            return self._value(t, worlds)
        return max(self._value(t, cell) for cell in cells.values())

    def _candidates(self, worlds):
        states = [xs[-1] for xs, _ in worlds]
        mid = (max(states) + min(states)) / 2.0
        center = -self.a * mid
        seen = set()
        out = []
        for k in range(-self.K, self.K + 1):
            u = center + k * self.pitch
            key = round(u, _ROUND)
            if key not in seen:
                seen.add(key)
                out.append(u)
        return out

    def _value(self, t, worlds):
        """Decision phase: the controller commits one action per info set."""
        key = (t, self._canon(worlds))
        hit = self.memo.get(key)
        if hit is not None:
            return hit[0]
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise BudgetError(
                f"game tree exceeded the {self.node_cap}-node budget at step {t}"
            )
        best = None
        best_u = None
        for u in self._candidates(worlds):
            children = []
            for xs, c in worlds:
                for sign in (1.0, -1.0):
                    x_next = self.a * xs[-1] + u + sign * self.W
                    children.append((xs + (x_next,), max(c, abs(x_next))))
            val = self._observe(t + 1, children)
            if best is None or val < best:
                best = val
                best_u = u
        self.memo[key] = (best, best_u)
        return best

    def solve(self) -> float:
        return self._value(0, (((self.x0,), 0.0),))

    def extract_policy(self) -> dict:
        """Walk the solved memo along optimal actions; one level per step."""

        def decide(t, worlds):
            if t == self.H:
                return {}
            _, best_u = self.memo[(t, self._canon(worlds))]
            children = []
            for xs, c in worlds:
                for sign in (1.0, -1.0):
                    x_next = self.a * xs[-1] + best_u + sign * self.W
                    children.append((xs + (x_next,), max(c, abs(x_next))))
            return {"u": best_u, "children": observe(t + 1, children)}

        def observe(t, worlds):
            if t == self.H:
                return {}
            cells = self._partition(t, worlds)
            if cells is None:
                return {"*": decide(t, worlds)}
            return {
                str(key): decide(t, cell)
                for key, cell in sorted(cells.items(), key=lambda kv: str(kv[0]))
            }

        return {"*": decide(0, (((self.x0,), 0.0),))}


def minimax_oracle(
    cfg: PlantConfig,
    layer: LayerSpec,
    horizon: int | None = None,
    grid_radius: int = 4,
    grid_pitch: float | None = None,
    node_cap: int = 10_000_000,
    with_policy: bool = True,
) -> OracleResult:
    """Exact minimax cost of the discretized bump game at desk scale.

    horizon defaults to cfg.horizon and must be <= 12; a quantized layer must
    use a uniform quantizer with at most 4 cells (R <= 2) and a set range M.
    Raises BudgetError rather than ever truncating the search.
    """
    H = horizon if horizon is not None else cfg.horizon
    if H < 1 or H > 12:
        raise ValueError(f"oracle horizon must be in [1, 12], got {H}")
    q = layer.quantizer
    if q.kind not in ("none", "uniform"):
        raise ValueError("oracle supports only no quantizer or a uniform quantizer")
    if q.kind == "uniform":
        if q.R > 2:
            raise ValueError("oracle budget allows at most 4 quantizer cells (R <= 2)")
        if q.M is None:
            raise ValueError("oracle needs the quantizer range M to be set")
    solver = _Solver(
        a=cfg.a,
        w_bound=cfg.w_bound,
        x0=cfg.x0,
        T=layer.T,
        horizon=H,
        quantizer=q,
        grid_radius=grid_radius,
        grid_pitch=grid_pitch,
        node_cap=node_cap,
    )
    cost = solver.solve()
    policy = solver.extract_policy() if with_policy else {}
    return OracleResult(
        minimax_cost=cost, policy=policy, nodes_expanded=solver.nodes
    )
