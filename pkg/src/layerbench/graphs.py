"""Controller wiring graphs: forward paths and internal feedback pathways.

Nodes carry a depth along the conventional loop direction
plant(0) -> sensor(1) -> estimator(2) -> controller(3..) -> actuator(4);
a forward edge goes down the loop (depth increasing, or the actuator->plant
closure), while an internal feedback pathway (IFP) points the other way,
from a deeper node back toward the sensors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .controllers import LayerSpec

__all__ = ["GraphNode", "GraphEdge", "ArchitectureGraph", "architecture_graph"]

_ROLES = ("sensor", "controller", "estimator", "actuator", "plant")


@dataclass(frozen=True)
class GraphNode:
    id: str
    role: str
    depth: float

    def __post_init__(self):
        if self.role not in _ROLES:
            raise ValueError(f"unknown node role {self.role!r}")


@dataclass(frozen=True)
class GraphEdge:
    src: str
    dst: str
    label: str  # "forward" | "IFP"
    delay: int = 0
    rate: str = "unbounded"  # bits/step as text, or "unbounded"
    payload: str = ""

    def __post_init__(self):
        if self.label not in ("forward", "IFP"):
            raise ValueError(f"edge label must be 'forward' or 'IFP', got {self.label!r}")


@dataclass
class ArchitectureGraph:
    architecture: str
    nodes: list[GraphNode] = field(default_factory=list)
    edges: list[GraphEdge] = field(default_factory=list)

    def node(self, node_id: str) -> GraphNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def ifp_edges(self) -> list[GraphEdge]:
        return [e for e in self.edges if e.label == "IFP"]

    def validate(self) -> None:
        """Check connectivity, the single-plant rule, and edge directions."""
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate node ids")
        plants = [n for n in self.nodes if n.role == "plant"]
        if len(plants) != 1:
            raise ValueError(f"graph must contain exactly one plant, got {len(plants)}")
        adjacency = {n.id: set() for n in self.nodes}
        for e in self.edges:
            src, dst = self.node(e.src), self.node(e.dst)
            adjacency[e.src].add(e.dst)
            adjacency[e.dst].add(e.src)
            if e.label == "IFP":
                if src.depth <= dst.depth:
                    raise ValueError(
                        f"IFP edge {e.src}->{e.dst} does not point against the "
                        f"forward loop (depths {src.depth} -> {dst.depth})"
                    )
            else:
                closes_loop = src.role == "actuator" and dst.role == "plant"
                if not closes_loop and src.depth >= dst.depth:
                    raise ValueError(
                        f"forward edge {e.src}->{e.dst} does not follow the "
                        f"loop (depths {src.depth} -> {dst.depth})"
                    )
        # connectivity
        seen = set()
        stack = [self.nodes[0].id] if self.nodes else []
        while stack:
            nid = stack.pop()
            if nid in seen:
                continue
            seen.add(nid)
            stack.extend(adjacency[nid] - seen)
        if seen != set(ids):
            raise ValueError(f"graph is not connected: unreached {sorted(set(ids) - seen)}")

    def to_json(self) -> str:
        doc = {
            "architecture": self.architecture,
            "nodes": [
                {"id": n.id, "role": n.role, "depth": n.depth} for n in self.nodes
            ],
            "edges": [
                {
                    "from": e.src,
                    "to": e.dst,
                    "label": e.label,
                    "delay": e.delay,
                    "rate": e.rate,
                    "payload": e.payload,
                }
                for e in self.edges
            ],
            "ifp_edge_count": len(self.ifp_edges()),
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    def to_dot(self) -> str:
        """Graphviz DOT rendering; IFP edges drawn dashed in red."""
        lines = [f'digraph "{self.architecture}" {{', "  rankdir=LR;"]
        for n in self.nodes:
            shape = {"plant": "box", "actuator": "trapezium"}.get(n.role, "ellipse")
            lines.append(f'  "{n.id}" [shape={shape}, label="{n.id}\\n({n.role})"];')
        for e in self.edges:
            attrs = [f'label="{e.payload or e.label}"']
            if e.label == "IFP":
                attrs.append("color=red")
                attrs.append("style=dashed")
            lines.append(f'  "{e.src}" -> "{e.dst}" [{", ".join(attrs)}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _rate_text(layer: LayerSpec | None) -> str:
    if layer is None or layer.quantizer.kind == "none":
        return "unbounded"
    if layer.quantizer.kind == "uniform":
        return f"{layer.quantizer.R} bits"
    return "2 bits"  # interval/log symbol streams


def architecture_graph(
    arch: str,
    low: LayerSpec | None = None,
    high: LayerSpec | None = None,
    dynamic_quantizer: bool = True,
) -> ArchitectureGraph:
    """Wiring graph for one of the architectures: layered | arch2 | arch3.

    layered has no IFP edge; arch2 has exactly one (the estimator sets the
    sensor's quantization interval); arch3 has at least two (fast controller
    reports its quantized actions to the slow controller, plus the
    estimator-to-sensor edge when its quantizer interval is estimate-driven).
    """
    if arch == "layered":
        g = ArchitectureGraph(
            architecture="layered",
            nodes=[
                GraphNode("plant", "plant", 0),
                GraphNode("state sensor", "sensor", 1),
                GraphNode("trail sensor", "sensor", 1),
                GraphNode("low controller", "controller", 3),
                GraphNode("high controller", "controller", 3),
                GraphNode("actuator", "actuator", 4),
            ],
            edges=[
                GraphEdge("plant", "state sensor", "forward",
                          delay=low.T if low else 0, rate=_rate_text(low),
                          payload="quantized delayed state"),
                GraphEdge("plant", "trail sensor", "forward",
                          delay=high.T if high else 0, rate=_rate_text(high),
                          payload="quantized delayed trail preview"),
                GraphEdge("state sensor", "low controller", "forward"),
                GraphEdge("trail sensor", "high controller", "forward"),
                GraphEdge("low controller", "actuator", "forward",
                          payload="bump-rejection command"),
                GraphEdge("high controller", "actuator", "forward",
                          payload="trail-tracking command"),
                GraphEdge("actuator", "plant", "forward", payload="summed command"),
            ],
        )
    elif arch == "arch2":
        g = ArchitectureGraph(
            architecture="arch2",
            nodes=[
                GraphNode("plant", "plant", 0),
                GraphNode("sensor", "sensor", 1),
                GraphNode("estimator", "estimator", 2),
                GraphNode("controller", "controller", 3),
                GraphNode("actuator", "actuator", 4),
            ],
            edges=[
                GraphEdge("plant", "sensor", "forward", rate="2 bits",
                          payload="dynamic-interval symbol"),
                GraphEdge("sensor", "estimator", "forward",
                          payload="quantized innovation"),
                GraphEdge("sensor", "controller", "forward",
                          payload="quantized innovation"),
                GraphEdge("controller", "actuator", "forward",
                          payload="innovation-feedback command"),
                GraphEdge("actuator", "plant", "forward"),
                GraphEdge("estimator", "sensor", "IFP",
                          payload="current estimate x-hat sets quantizer interval"),
            ],
        )
    elif arch == "arch3":
        nodes = [
            GraphNode("plant", "plant", 0),
            GraphNode("fast sensor", "sensor", 1),
            GraphNode("slow sensor", "sensor", 1),
            GraphNode("slow controller", "controller", 3),
            GraphNode("fast controller", "controller", 3.5),
            GraphNode("actuator", "actuator", 4),
        ]
        edges = [
            GraphEdge("plant", "fast sensor", "forward",
                      delay=low.T if low else 0, rate=_rate_text(low),
                      payload="quantized disturbance record"),
            GraphEdge("plant", "slow sensor", "forward",
                      delay=high.T if high else 0, rate="unbounded",
                      payload="exact disturbance record"),
            GraphEdge("fast sensor", "fast controller", "forward"),
            GraphEdge("slow sensor", "slow controller", "forward"),
            GraphEdge("fast controller", "actuator", "forward",
                      payload="prompt quantized command"),
            GraphEdge("slow controller", "actuator", "forward",
                      payload="exact delayed correction"),
            GraphEdge("actuator", "plant", "forward"),
            GraphEdge("fast controller", "slow controller", "IFP",
                      payload="each quantized action taken"),
        ]
        if dynamic_quantizer:
            nodes.append(GraphNode("estimator", "estimator", 2))
            edges.append(GraphEdge("fast sensor", "estimator", "forward",
                                   payload="symbol stream"))
            edges.append(GraphEdge("estimator", "fast sensor", "IFP",
                                   payload="estimate sets quantizer interval"))
        g = ArchitectureGraph(architecture="arch3", nodes=nodes, edges=edges)
    else:
        raise ValueError(f"unknown architecture tag {arch!r}")
    g.validate()
    return g
