import json

import pytest

from layerbench.components import QuantizerSpec
from layerbench.controllers import LayerSpec
from layerbench.graphs import ArchitectureGraph, GraphEdge, GraphNode, architecture_graph


class TestCensus:
    def test_layered_has_no_ifp(self):
        g = architecture_graph("layered")
        assert len(g.ifp_edges()) == 0

    def test_arch2_has_exactly_one_ifp(self):
        g = architecture_graph("arch2")
        edges = g.ifp_edges()
        assert len(edges) == 1
        assert edges[0].src == "estimator"
        assert "interval" in edges[0].payload

    def test_arch3_has_at_least_two_ifps(self):
        g = architecture_graph("arch3")
        assert len(g.ifp_edges()) >= 2

    def test_arch3_without_dynamic_quantizer_keeps_action_report(self):
        g = architecture_graph("arch3", dynamic_quantizer=False)
        edges = g.ifp_edges()
        assert len(edges) == 1
        assert edges[0].src == "fast controller" and edges[0].dst == "slow controller"

    def test_unknown_tag(self):
        with pytest.raises(ValueError, match="unknown architecture"):
            architecture_graph("arch9")


class TestValidation:
    def test_every_builtin_graph_validates(self):
        for arch in ("layered", "arch2", "arch3"):
            architecture_graph(arch).validate()

    def test_ifp_must_point_upstream(self):
        g = ArchitectureGraph(
            architecture="bad",
            nodes=[
                GraphNode("plant", "plant", 0),
                GraphNode("sensor", "sensor", 1),
                GraphNode("controller", "controller", 3),
            ],
            edges=[
                GraphEdge("plant", "sensor", "forward"),
                GraphEdge("sensor", "controller", "IFP"),  # wrong way
            ],
        )
        with pytest.raises(ValueError, match="does not point against"):
            g.validate()

    def test_forward_must_follow_loop(self):
        g = ArchitectureGraph(
            architecture="bad",
            nodes=[
                GraphNode("plant", "plant", 0),
                GraphNode("sensor", "sensor", 1),
            ],
            edges=[GraphEdge("sensor", "plant", "forward")],
        )
        with pytest.raises(ValueError, match="does not follow"):
            g.validate()

    def test_exactly_one_plant(self):
        g = ArchitectureGraph(
            architecture="bad",
            nodes=[GraphNode("p1", "plant", 0), GraphNode("p2", "plant", 0)],
            edges=[GraphEdge("p1", "p2", "forward")],
        )
        with pytest.raises(ValueError, match="exactly one plant"):
            g.validate()

    def test_connectivity(self):
        g = ArchitectureGraph(
            architecture="bad",
            nodes=[
                GraphNode("plant", "plant", 0),
                GraphNode("sensor", "sensor", 1),
                GraphNode("island", "controller", 3),
            ],
            edges=[GraphEdge("plant", "sensor", "forward")],
        )
        with pytest.raises(ValueError, match="not connected"):
            g.validate()


class TestSerialization:
    def test_json_round_trip(self):
        low = LayerSpec("low", 1, quantizer=QuantizerSpec(kind="uniform", R=2, M=1.0))
        high = LayerSpec("high", 2)
        g = architecture_graph("layered", low=low, high=high)
        doc = json.loads(g.to_json())
        assert doc["architecture"] == "layered"
        assert doc["ifp_edge_count"] == 0
        assert {n["role"] for n in doc["nodes"]} == {
            "plant", "sensor", "controller", "actuator"
        }
        state_edge = next(e for e in doc["edges"] if e["to"] == "state sensor")
        assert state_edge["delay"] == 1 and state_edge["rate"] == "2 bits"

    def test_dot_output(self):
        g = architecture_graph("arch2")
        dot = g.to_dot()
        assert dot.startswith('digraph "arch2"')
        assert "color=red" in dot and "style=dashed" in dot
        assert dot.count("->") == len(g.edges)

    def test_every_edge_carries_delay_and_rate(self):
        for arch in ("layered", "arch2", "arch3"):
            doc = json.loads(architecture_graph(arch).to_json())
            for e in doc["edges"]:
                assert "delay" in e and "rate" in e
