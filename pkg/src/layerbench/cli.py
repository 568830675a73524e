"""Configuration-driven command line: simulate, stability, sweep, oracle,
graph, ingest-session.

Configs are TOML; reports are JSON; tables are CSV with LF line endings and
'.' decimals regardless of locale. Every command is a pure function of its
config file and flags, so re-runs produce byte-identical outputs.

Exit codes: 0 success, 2 analysis says unstable/failed, 64 usage or config
error, 65 data error (malformed or inconsistent session log).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .analysis import dess_sweep
from .architectures import simulate_arch2, simulate_arch3, simulate_layered, Arch2Params
from .components import QuantizerSpec, SatFrontier
from .controllers import ControllerSpec, LayerSpec
from .dynamics import DisturbanceSpec, PlantConfig, Trajectory, evaluate_cost
from .graphs import architecture_graph
from .oracle import BudgetError, minimax_oracle
from .session import SessionError, ingest_session
from .synthesis import stability_arch2, synthesize_bump_controller, synthesize_trail_controller

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    with open(p, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config is not valid TOML: {exc}") from exc


def _plant_from(config: dict) -> PlantConfig:
    section = config.get("plant")
    if not isinstance(section, dict):
        raise ConfigError("missing [plant] section")
    try:
        return PlantConfig(
            a=float(section.get("a", 1.0)),
            w_bound=float(section.get("w_bound", 1.0)),
            r_step_bound=float(section.get("r_step_bound", 1.0)),
            T_r=int(section.get("T_r", 0)),
            horizon=int(section.get("horizon", 1)),
            x0=float(section.get("x0", 0.0)),
        )
    except ValueError as exc:
        raise ConfigError(f"plant: {exc}") from exc


def _disturbance_from(config: dict, seed_override: int | None) -> DisturbanceSpec:
    section = config.get("disturbance", {})
    if not isinstance(section, dict):
        raise ConfigError("[disturbance] must be a table")
    kind = section.get("kind", "seeded-random")
    seed = int(section.get("seed", 0)) if seed_override is None else seed_override
    try:
        if kind == "explicit":
            v = section.get("v")
            r = section.get("r")
            if v is None or r is None:
                raise ConfigError("disturbance.kind explicit requires v and r arrays")
            return DisturbanceSpec(kind=kind, v=tuple(float(s) for s in v),
                                   r=tuple(float(s) for s in r))
        return DisturbanceSpec(kind=kind, seed=seed)
    except ValueError as exc:
        raise ConfigError(f"disturbance: {exc}") from exc


def _quantizer_from(section: dict | None, field: str) -> QuantizerSpec:
    if section is None:
        return QuantizerSpec()
    if not isinstance(section, dict):
        raise ConfigError(f"{field} must be a table")
    try:
        return QuantizerSpec(
            kind=section.get("kind", "none"),
            R=int(section["R"]) if "R" in section else None,
            M=float(section["M"]) if "M" in section else None,
            q=float(section["q"]) if "q" in section else None,
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{field}: {exc}") from exc


def _layer_from(
    arch: dict, name: str, plant: PlantConfig, role: str
) -> LayerSpec:
    section = arch.get(name)
    if not isinstance(section, dict):
        raise ConfigError(f"missing [architecture.{name}] section")
    T = int(section.get("T", 0))
    quantizer = _quantizer_from(section.get("quantizer"), f"architecture.{name}.quantizer")
    ctrl = section.get("controller", "synthesized")
    try:
        if ctrl == "zero":
            controller = ControllerSpec(kind="zero")
        elif ctrl == "synthesized":
            if role == "bump":
                controller = synthesize_bump_controller(
                    plant.a, T, quantizer, w_bound=plant.w_bound
                )
            else:
                r_cover = max(plant.horizon - 1 - plant.T_r, 1) * plant.r_step_bound
                controller = synthesize_trail_controller(
                    plant.T_r, T, quantizer, r_cover=max(r_cover, 1e-9)
                )
            quantizer = controller.quantizer
        elif isinstance(ctrl, dict) and ctrl.get("kind") == "custom-linear":
            controller = ControllerSpec(
                kind="custom-linear",
                gains=tuple(float(g) for g in ctrl.get("gains", ())),
            )
        else:
            raise ConfigError(
                f"architecture.{name}.controller must be 'zero', 'synthesized', "
                f"or a custom-linear table"
            )
    except ValueError as exc:
        raise ConfigError(f"architecture.{name}: {exc}") from exc
    senses = section.get("senses")
    return LayerSpec(name=name, T=T, quantizer=quantizer, controller=controller,
                     senses=senses)


def _architecture_from(config: dict, plant: PlantConfig):
    arch = config.get("architecture")
    if not isinstance(arch, dict):
        raise ConfigError("missing [architecture] section")
    kind = arch.get("kind")
    if kind not in ("layered", "arch2", "arch3"):
        raise ConfigError("architecture.kind must be layered, arch2, or arch3")
    return kind, arch


def _write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(content)


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _trajectory_csv(traj: Trajectory) -> str:
    lines = ["t,x,u,u_L,u_H,w,v,r"]
    for t in range(traj.horizon + 1):
        lines.append(
            f"{t},{traj.x[t]!r},{traj.u[t]!r},{traj.u_L[t]!r},{traj.u_H[t]!r},"
            f"{traj.w[t]!r},{traj.v[t]!r},{traj.r[t]!r}"
        )
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    plant = _plant_from(config)
    dist = _disturbance_from(config, args.seed)
    kind, arch = _architecture_from(config, plant)

    ifp_count = None
    if kind == "layered":
        low = _layer_from(arch, "low", plant, "bump")
        high = _layer_from(arch, "high", plant, "trail")
        traj = simulate_layered(plant, low, high, dist)
        ifp_count = len(architecture_graph("layered", low=low, high=high).ifp_edges())
    elif kind == "arch2":
        section = arch.get("arch2")
        if not isinstance(section, dict):
            raise ConfigError("missing [architecture.arch2] section")
        params = Arch2Params(
            a=plant.a,
            k=float(section.get("k", 0.0)),
            q=float(section.get("q", 0.5)),
            quantized=bool(section.get("quantized", True)),
        )
        traj = simulate_arch2(params, dist, plant).traj
        ifp_count = len(architecture_graph("arch2").ifp_edges())
    else:
        fast = _layer_from(arch, "fast", plant, "bump")
        slow = _layer_from(arch, "slow", plant, "bump")
        traj = simulate_arch3(plant, fast, slow, dist).traj
        ifp_count = len(architecture_graph("arch3", low=fast, high=slow).ifp_edges())

    summary = {
        "architecture": kind,
        "cost_linf": evaluate_cost(traj, "linf"),
        "cost_rms": evaluate_cost(traj, "rms"),
        "ifp_edge_count": ifp_count,
        "horizon": plant.horizon,
    }
    out = Path(args.out)
    if args.format in ("csv", "both"):
        _write(out / "trajectory.csv", _trajectory_csv(traj))
    if args.format in ("json", "both"):
        _write(out / "trajectory.json", _json_text({
            "t": list(range(traj.horizon + 1)),
            "x": traj.x, "u": traj.u, "u_L": traj.u_L, "u_H": traj.u_H,
            "w": traj.w, "v": traj.v, "r": traj.r,
        }))
    _write(out / "summary.json", _json_text(summary))
    print(_json_text(summary), end="")
    return EXIT_OK


def cmd_stability(args) -> int:
    if not 0.0 < args.q < 1.0:
        print(f"error: q must be in (0, 1), got {args.q}", file=sys.stderr)
        return EXIT_USAGE
    report = stability_arch2(args.a, args.k, args.q)
    doc = {
        "a": args.a,
        "k": args.k,
        "q": args.q,
        "eigenvalues": [[z.real, z.imag] for z in report.eigenvalues],
        "spectral_radius": report.spectral_radius,
        "small_gain": report.small_gain,
        "stable": report.stable,
        "notes": report.notes,
    }
    text = _json_text(doc)
    if args.out:
        _write(Path(args.out) / "stability.json", text)
    print(text, end="")
    return EXIT_OK if report.stable else EXIT_FAIL


def cmd_sweep(args) -> int:
    config = _load_config(args.config)
    plant = _plant_from(config)
    section = config.get("frontier")
    if not isinstance(section, dict):
        raise ConfigError("missing [frontier] section")
    try:
        frontier = SatFrontier(
            model=section.get("model", "linear"),
            C=float(section.get("C", 6.0)),
            lam=float(section.get("lambda", 2.0)),
            T_max=int(section.get("T_max", 2)),
        )
    except ValueError as exc:
        raise ConfigError(f"frontier: {exc}") from exc
    eval_mode = section.get("eval", "oracle")
    try:
        result = dess_sweep(frontier, plant, eval_mode=eval_mode,
                            samples=int(section.get("samples", 256)))
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = Path(args.out)
    if args.format in ("csv", "both"):
        _write(out / "sweep.csv", result.to_csv())
    if args.format in ("json", "both"):
        _write(out / "sweep.json", _json_text(result.to_dict()))
    print(_json_text({
        "best": result.to_dict()["best"],
        "best_uniform": result.to_dict()["best_uniform"],
        "dess_gain": result.dess_gain,
    }), end="")
    return EXIT_OK


def cmd_oracle(args) -> int:
    config = _load_config(args.config)
    plant = _plant_from(config)
    section = config.get("oracle")
    if not isinstance(section, dict):
        raise ConfigError("missing [oracle] section")
    T = int(section.get("T", 0))
    quantizer = _quantizer_from(section.get("quantizer"), "oracle.quantizer")
    horizon = int(section.get("horizon", plant.horizon))
    layer = LayerSpec(name="low", T=T, quantizer=quantizer)
    try:
        result = minimax_oracle(
            plant, layer, horizon=horizon,
            with_policy=bool(section.get("policy", False)),
        )
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise ConfigError(f"oracle: {exc}") from exc
    doc = result.to_dict(with_policy=bool(section.get("policy", False)))
    doc.update({"horizon": horizon, "T": T})
    out = Path(args.out)
    if args.format in ("csv", "both"):
        _write(out / "oracle.csv", result.to_csv())
    if args.format in ("json", "both"):
        _write(out / "oracle.json", _json_text(doc))
    print(_json_text({k: doc[k] for k in ("minimax_cost", "nodes_expanded")}), end="")
    return EXIT_OK


def cmd_graph(args) -> int:
    if args.config:
        config = _load_config(args.config)
        plant = _plant_from(config)
        kind, arch = _architecture_from(config, plant)
        low = high = None
        if kind == "layered":
            low = _layer_from(arch, "low", plant, "bump")
            high = _layer_from(arch, "high", plant, "trail")
        elif kind == "arch3":
            low = _layer_from(arch, "fast", plant, "bump")
            high = _layer_from(arch, "slow", plant, "bump")
        graph = architecture_graph(kind, low=low, high=high)
    elif args.arch:
        graph = architecture_graph(args.arch)
    else:
        print("error: graph needs --config or --arch", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    _write(out / "graph.json", graph.to_json() + "\n")
    _write(out / "graph.dot", graph.to_dot())
    print(graph.to_json())
    return EXIT_OK


def cmd_ingest_session(args) -> int:
    try:
        analysis = ingest_session(args.logfile)
    except FileNotFoundError:
        print(f"error: log file not found: {args.logfile}", file=sys.stderr)
        return EXIT_USAGE
    except SessionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    text = _json_text(analysis)
    if args.out:
        _write(Path(args.out) / "session_analysis.json", text)
    print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layerbench",
        description="Layered-control workbench: simulate, synthesize, analyze.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="TOML experiment config")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json", "both"), default="both")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config's disturbance seed")

    p = sub.add_parser("simulate", help="run one simulation, write trajectory + summary")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stability", help="innovation-feedback stability report")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("sweep", help="diversity sweep over the SAT frontier")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="exhaustive minimax value of the bump game")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("graph", help="emit the architecture wiring graph")
    p.add_argument("--config", default=None, help="TOML experiment config")
    p.add_argument("--arch", choices=("layered", "arch2", "arch3"), default=None)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("ingest-session", help="validate and analyze a game session log")
    p.add_argument("logfile")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ingest_session)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the documented code
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
