import pytest

from layerbench.analysis import sector_worst_case
from layerbench.components import QuantizerSpec
from layerbench.controllers import LayerSpec
from layerbench.dynamics import PlantConfig
from layerbench.oracle import BudgetError, minimax_oracle


def cfg(horizon, a=1.0, w=1.0):
    return PlantConfig(a=a, w_bound=w, horizon=horizon)


class TestUnquantizedGame:
    def test_no_delay_deadbeat_value(self):
        res = minimax_oracle(cfg(6), LayerSpec("low", 0), with_policy=False)
        assert res.minimax_cost == pytest.approx(1.0, abs=1e-12)
        assert res.nodes_expanded > 0

    def test_one_step_delay_value(self):
        res = minimax_oracle(cfg(8), LayerSpec("low", 1), with_policy=False)
        assert res.minimax_cost == pytest.approx(2.0, abs=1e-12)

    def test_two_step_delay_value(self):
        res = minimax_oracle(cfg(10), LayerSpec("low", 2), with_policy=False)
        assert res.minimax_cost == pytest.approx(3.0, abs=1e-12)

    def test_scales_with_disturbance_bound(self):
        res = minimax_oracle(cfg(6, w=0.25), LayerSpec("low", 1), with_policy=False)
        assert res.minimax_cost == pytest.approx(0.5, abs=1e-12)

    def test_stable_pole_cheaper_than_neutral(self):
        neutral = minimax_oracle(cfg(6), LayerSpec("low", 1), with_policy=False)
        stable = minimax_oracle(cfg(6, a=0.5), LayerSpec("low", 1), with_policy=False)
        assert stable.minimax_cost < neutral.minimax_cost
        assert stable.minimax_cost == pytest.approx(1.5, abs=1e-9)


class TestQuantizedGame:
    def test_one_bit_tuned_range_value(self):
        layer = LayerSpec("low", 0, quantizer=QuantizerSpec(kind="uniform", R=1, M=2.0))
        res = minimax_oracle(cfg(6), layer, with_policy=False)
        assert res.minimax_cost == pytest.approx(2.0, abs=1e-12)

    def test_cell_cap_enforced(self):
        layer = LayerSpec("low", 0, quantizer=QuantizerSpec(kind="uniform", R=3, M=2.0))
        with pytest.raises(ValueError, match="4 quantizer cells"):
            minimax_oracle(cfg(6), layer)

    def test_range_must_be_set(self):
        layer = LayerSpec("low", 0, quantizer=QuantizerSpec(kind="uniform", R=1))
        with pytest.raises(ValueError, match="range M"):
            minimax_oracle(cfg(6), layer)


class TestOracleContract:
    def test_budget_error_not_silent(self):
        with pytest.raises(BudgetError, match="budget"):
            minimax_oracle(cfg(10), LayerSpec("low", 2), node_cap=100,
                           with_policy=False)

    def test_horizon_cap(self):
        with pytest.raises(ValueError, match=r"\[1, 12\]"):
            minimax_oracle(cfg(8), LayerSpec("low", 0), horizon=13)

    def test_policy_depth_equals_horizon(self):
        res = minimax_oracle(cfg(5), LayerSpec("low", 1))

        def depth(node):
            if not node:
                return 0
            if "u" in node:
                return 1 + depth(node["children"])
            return max((depth(child) for child in node.values()), default=0)

        assert depth(res.policy) == 5

    def test_deterministic(self):
        a = minimax_oracle(cfg(7), LayerSpec("low", 1))
        b = minimax_oracle(cfg(7), LayerSpec("low", 1))
        assert a.minimax_cost == b.minimax_cost
        assert a.nodes_expanded == b.nodes_expanded
        assert a.policy == b.policy

    @pytest.mark.parametrize("T,horizon", [(0, 6), (1, 6), (2, 8)])
    def test_dominance_synthesized_never_beats_oracle(self, T, horizon):
        oracle = minimax_oracle(cfg(horizon), LayerSpec("low", T), with_policy=False)
        simulated = sector_worst_case(a=1.0, T=T, horizon=horizon, w_bound=1.0)
        assert simulated >= oracle.minimax_cost - 1e-9

    def test_dominance_quantized(self):
        layer = LayerSpec("low", 0, quantizer=QuantizerSpec(kind="uniform", R=1, M=2.0))
        oracle = minimax_oracle(cfg(6), layer, with_policy=False)
        simulated = sector_worst_case(a=1.0, T=0, horizon=6, w_bound=1.0, meas_radius=1.0)
        assert simulated >= oracle.minimax_cost - 1e-9
        assert simulated == pytest.approx(oracle.minimax_cost, abs=1e-9)
