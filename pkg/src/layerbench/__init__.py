"""Workbench for layered control built from delayed, quantized components.

Simulates and synthesizes two-layer tracking/rejection loops, an
innovation-feedback loop with an estimator-scaled quantizer, and a
fast/slow dual-path loop with exact delayed error correction; provides an
exhaustive minimax oracle, diversity sweeps over speed-accuracy frontiers,
wiring-graph exports, and ingestion of human tracking-game session logs.
"""

from .analysis import (
    Allocation,
    SeparationReport,
    SweepResult,
    dess_sweep,
    layer_separation_check,
    sector_worst_case,
    worst_case_layered,
)
from .architectures import (
    Arch2Params,
    Arch2Result,
    Arch3Result,
    simulate_arch2,
    simulate_arch3,
    simulate_layered,
)
from .components import (
    DelayLine,
    QuantizerSpec,
    SatFrontier,
    frontier_points,
    quantize_dynamic_interval,
    quantize_log,
    quantize_uniform,
)
from .controllers import ControllerSpec, LayerSpec
from .dynamics import (
    DisturbanceSpec,
    PlantConfig,
    Trajectory,
    evaluate_cost,
    make_disturbances,
    step,
)
from .graphs import ArchitectureGraph, architecture_graph
from .oracle import BudgetError, OracleResult, minimax_oracle
from .session import SessionError, analyze_log, ingest_session, parse_session
from .synthesis import (
    StabilityReport,
    stability_arch2,
    synthesize_bump_controller,
    synthesize_trail_controller,
)

__version__ = "0.1.0"
