from __future__ import annotations

__all__ = ["RunManifest", "main"]

import argparse
import csv
import dataclasses
import hashlib
import json
import logging
import math
import os
import platform
import sys
import time
from collections.abc import Sequence
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, NoReturn

import networkx
import numpy as np
import scipy

from ._analysis import entangled_report, front_flags
from ._config import STRATEGY_NAMES, GaConfig, NnConfig, StrategyConfig
from ._dataset import (
    coverage_stats,
    generate_dataset,
    load_dataset,
    load_secrets,
    resolve_spec,
    save_dataset,
    save_secrets,
)
from ._exceptions import NetDesignError, ParameterError
from ._graph import Graph, is_connected
from ._metrics import betweenness_stats, degree_stats, eigenratio, spectrum, structural_stats
from ._oracle import oracle_optimum
from ._strategies import design
from ._validation import validate_strategies

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "NETDESIGN_OUTPUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


def _version() -> str:
    from . import __version__

    return __version__


@dataclasses.dataclass
class RunManifest:
    """What a CLI run did: its configuration, seeds, files and the software it ran on."""

    subcommand: str
    config: dict[str, Any]
    seeds: dict[str, int | None]
    inputs: list[str]
    outputs: list[str]
    started_at: str
    wall_clock_seconds: float = 0.0
    output_sha256: dict[str, str] = dataclasses.field(default_factory=dict)
    versions: dict[str, str] = dataclasses.field(
        default_factory=lambda: {
            "netdesign": _version(),
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "networkx": networkx.__version__,
        }
    )

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n", encoding="utf-8")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _output_path(value: str | None, default_name: str) -> Path:
    """`--out` as given; bare file names (and the default) go to $NETDESIGN_OUTPUT_DIR when it is set."""
    path = Path(value or default_name)
    output_dir = os.environ.get(OUTPUT_DIR_ENV)
    if output_dir and not path.is_absolute() and path.parent == Path():
        path = Path(output_dir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _manifest_path(output: Path) -> Path:
    return output.with_name(output.name + ".manifest.json")


def _load_config(cls: type, path: str | None, **overrides: Any) -> Any:
    data: dict[str, Any] = {}
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if "hidden_layers" in data:
            data["hidden_layers"] = tuple(data["hidden_layers"])
    try:
        return cls(**{**data, **{key: value for key, value in overrides.items() if value is not None}})
    except TypeError as e:
        msg = f"Invalid {cls.__name__} in {path}: {e}"
        raise ParameterError(msg) from e


def _float_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _gen_dataset(args: argparse.Namespace) -> RunManifest:
    spec = resolve_spec(args.spec)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    if args.iterations is not None:
        spec = dataclasses.replace(spec, iterations=args.iterations)

    out = _output_path(args.out, f"{spec.name}.jsonl")
    secrets_path = out.with_name(out.stem + ".secrets.json")
    dataset = generate_dataset(spec, threads=args.threads)
    save_dataset(dataset, out)
    save_secrets(dataset.secrets, secrets_path)

    stats = coverage_stats(dataset)
    print(f"{len(dataset)} samples ({stats.sample_count:.2f} per iteration) written to {out}")
    return RunManifest(
        subcommand="gen-dataset",
        config=spec.public_dict(),
        seeds={"dataset": spec.seed},
        inputs=[],
        outputs=[str(out), str(secrets_path)],
        started_at="",
    )


def _analyze(args: argparse.Namespace) -> RunManifest:
    dataset = load_dataset(args.dataset)
    out = _output_path(args.out, "analysis")
    out.mkdir(parents=True, exist_ok=True)

    report = entangled_report(dataset)
    stats = coverage_stats(dataset)
    correlations = out / "correlations.csv"
    _write_csv(
        correlations,
        ["statistic", "value"],
        [
            *report.table().items(),
            ("iterations", report.iterations),
            ("mean_samples_per_iteration", stats.sample_count),
            ("decision_space_size", stats.decision_space_size if stats.decision_space_size is not None else ""),
            ("coverage_percent", stats.coverage_percent if stats.coverage_percent is not None else ""),
        ],
    )

    rho = out / "rho.csv"
    _write_csv(
        rho,
        ["vertex", "rho_degree", "rho_betweenness"],
        [
            (vertex + 1, float(report.rho_degree[vertex]), float(report.rho_betweenness[vertex]))
            for vertex in range(dataset.spec.n_v)
        ],
    )

    fronts = out / "fronts.csv"
    positions: dict[int, int] = {}
    rows = []
    for sample, (on_good, on_bad) in zip(dataset.samples, front_flags(dataset)):
        index = positions.get(sample.iteration, 0)
        positions[sample.iteration] = index + 1
        rows.append((sample.iteration, index, sample.graph.n_e, sample.J, int(on_good), int(on_bad)))
    _write_csv(fronts, ["iteration", "sample_index", "n_e", "J", "on_good_front", "on_bad_front"], rows)

    return RunManifest(
        subcommand="analyze",
        config={"dataset": dataset.spec.public_dict()},
        seeds={"dataset": dataset.spec.seed},
        inputs=[args.dataset],
        outputs=[str(correlations), str(rho), str(fronts)],
        started_at="",
    )


def _strategy_config(args: argparse.Namespace, name: str, n_e_out: int, case: str) -> StrategyConfig:
    nn = ga = None
    if name == "NNGA":
        nn = _load_config(NnConfig, args.nn, seed=args.seed) if args.nn else NnConfig.for_case(case, seed=args.seed)
        ga = _load_config(GaConfig, args.ga, seed=args.seed, workers=args.threads)
    return StrategyConfig(name=name, n_e_out=n_e_out, alpha=args.alpha, p=args.p, nn=nn, ga=ga)


def _design(args: argparse.Namespace) -> RunManifest:
    dataset = load_dataset(args.dataset)
    iteration = dataset.iteration(args.iteration)
    if not len(iteration):
        msg = f"The dataset has no samples for iteration {args.iteration}"
        raise ParameterError(msg)

    config = _strategy_config(args, args.strategy, args.n_e_out or dataset.spec.n_e_star, dataset.spec.case)
    outcome = design(iteration, config)

    out = _output_path(args.out, f"{args.strategy}.graph.json")
    out.write_text(
        json.dumps({**outcome.to_dict(), "iteration": args.iteration}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(f"{args.strategy}: {outcome.graph.n_e} edges, {outcome.selected_count} samples selected, written to {out}")
    return RunManifest(
        subcommand="design",
        config=config.to_dict(),
        seeds={"strategy": args.seed},
        inputs=[args.dataset],
        outputs=[str(out)],
        started_at="",
    )


def _read_oracle(path: str) -> dict[int, float]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return {int(entry["iteration"]): float(entry["J"]) for entry in data["results"]}


def _validate(args: argparse.Namespace) -> RunManifest:
    dataset = load_dataset(args.dataset)
    secrets = load_secrets(args.secrets)
    names = [name.strip() for name in args.strategies.split(",") if name.strip()]
    n_e_out = args.n_e_out or dataset.spec.n_e_star
    configs = [_strategy_config(args, name, n_e_out, dataset.spec.case) for name in names]
    oracle = _read_oracle(args.oracle) if args.oracle else None

    rows = validate_strategies(dataset, secrets, configs, iterations=args.iteration, oracle=oracle)

    out = _output_path(args.out, "validation.csv")
    _write_csv(
        out,
        ["iteration", "strategy", "J", "best_data_sample_J", "J_star"],
        [
            (row.iteration, row.strategy, row.J, row.best_data_sample_J, row.J_star if row.J_star is not None else "")
            for row in rows
        ],
    )
    inputs = [args.dataset, args.secrets, *([args.oracle] if args.oracle else [])]
    return RunManifest(
        subcommand="validate",
        config={"strategies": [config.to_dict() for config in configs]},
        seeds={"strategy": args.seed},
        inputs=inputs,
        outputs=[str(out)],
        started_at="",
    )


def _oracle(args: argparse.Namespace) -> RunManifest:
    secrets = load_secrets(args.secrets)
    if args.n_e_star is not None:
        n_e_star = args.n_e_star
    elif args.dataset is not None:
        n_e_star = load_dataset(args.dataset).spec.n_e_star
    else:
        msg = "oracle needs --n-e-star or --dataset"
        raise ParameterError(msg)

    ga_config = _load_config(GaConfig, args.ga, seed=args.seed, workers=args.threads)
    iterations = args.iteration if args.iteration is not None else range(len(secrets.dynamics))
    results = []
    for iteration in iterations:
        result = oracle_optimum(
            secrets.for_iteration(iteration),
            n_e_star,
            objective_name=args.objective,
            exhaustive=args.exhaustive,
            ga_config=ga_config,
        )
        results.append(
            {"iteration": iteration, "J": result.J, "graph": result.graph.to_dict(), "method": result.method}
        )

    out = _output_path(args.out, "oracle.json")
    payload = {"objective": args.objective, "n_e_star": n_e_star, "results": results}
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return RunManifest(
        subcommand="oracle",
        config={"objective": args.objective, "exhaustive": args.exhaustive, "ga": dataclasses.asdict(ga_config)},
        seeds={"ga": ga_config.seed},
        inputs=[args.secrets],
        outputs=[str(out)],
        started_at="",
    )


def graph_report(graph: Graph) -> dict[str, Any]:
    """Metric dump of a single graph; per-vertex entries use 1-based vertex numbers."""
    eigenvalues = spectrum(graph)
    degrees = degree_stats(graph)
    report: dict[str, Any] = {
        "n_v": graph.n_v,
        "n_e": graph.n_e,
        "density": graph.density,
        "connected": is_connected(graph),
        "spectrum": eigenvalues.tolist(),
        "lambda_2": float(eigenvalues[1]) if graph.n_v > 1 else 0.0,
        "lambda_n": float(eigenvalues[-1]),
        "eigenratio": _float_or_none(eigenratio(graph)),
        "var_hat_d": degrees.norm_var,
    }
    vertices = [{"vertex": i + 1, "degree": int(degrees.d[i])} for i in range(graph.n_v)]

    if report["connected"]:
        betweenness = betweenness_stats(graph)
        structure = structural_stats(graph)
        report.update(
            var_hat_b=betweenness.norm_var,
            avg_shortest_path=structure.avg_shortest_path,
            var_shortest_path=structure.var_shortest_path,
            diameter=structure.diameter,
            girth=structure.girth,
            has_cycle=structure.has_cycle,
            mean_shortest_return_cycle=structure.mean_shortest_return_cycle,
            global_clustering=structure.global_clustering,
        )
        for i, vertex in enumerate(vertices):
            vertex.update(
                betweenness=float(betweenness.b[i]),
                local_clustering=float(structure.local_clustering[i]),
                eigenvector_centrality=float(structure.eigenvector_centrality[i]),
            )
    report["vertices"] = vertices
    return report


def _metrics(args: argparse.Namespace) -> RunManifest | None:
    graph = Graph.from_dict(json.loads(Path(args.graph).read_text(encoding="utf-8")))
    text = json.dumps(graph_report(graph), indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        return None

    out = _output_path(args.out, "metrics.json")
    out.write_text(text, encoding="utf-8")
    return RunManifest(
        subcommand="metrics", config={}, seeds={}, inputs=[args.graph], outputs=[str(out)], started_at=""
    )


def _add_strategy_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, default=3.0, help="weight exponent of A and AN (default 3)")
    parser.add_argument("--p", type=float, default=None, help="selected fraction of BWNE, PF and DPF")
    parser.add_argument("--n-e-out", type=int, default=None, help="edges of the designed graph (default n_e*)")
    parser.add_argument("--nn", default=None, help="JSON file with the NNGA surrogate config")
    parser.add_argument("--ga", default=None, help="JSON file with the genetic algorithm config")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1, help="fitness evaluation workers")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="netdesign", description="Data-driven design of synchronizing network graphs.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    gen = subparsers.add_parser("gen-dataset", help="generate a dataset and its secrets file")
    gen.add_argument("--spec", required=True, help="a named spec (e.g. D_small_l) or a JSON spec file")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--iterations", type=int, default=None)
    gen.add_argument("--threads", type=int, default=1)
    gen.add_argument("--out", default=None)
    gen.set_defaults(handler=_gen_dataset)

    analyze = subparsers.add_parser("analyze", help="correlation, per-vertex and Pareto front CSVs")
    analyze.add_argument("--dataset", required=True)
    analyze.add_argument("--out", default=None, help="output directory")
    analyze.set_defaults(handler=_analyze)

    design_parser = subparsers.add_parser("design", help="design a graph with one strategy")
    design_parser.add_argument("--dataset", required=True)
    design_parser.add_argument("--strategy", required=True, choices=STRATEGY_NAMES)
    design_parser.add_argument("--iteration", type=int, default=0)
    design_parser.add_argument("--out", default=None)
    _add_strategy_options(design_parser)
    design_parser.set_defaults(handler=_design)

    validate = subparsers.add_parser("validate", help="score strategies with the hidden dynamics")
    validate.add_argument("--dataset", required=True)
    validate.add_argument("--secrets", required=True)
    validate.add_argument("--strategies", "--strategy", dest="strategies", default=",".join(STRATEGY_NAMES))
    validate.add_argument("--iteration", type=int, action="append", default=None, help="repeatable; default all")
    validate.add_argument("--oracle", default=None, help="oracle JSON output providing J*")
    validate.add_argument("--out", default=None)
    _add_strategy_options(validate)
    validate.set_defaults(handler=_validate)

    oracle = subparsers.add_parser("oracle", help="optimize with the known dynamics (L*, J*)")
    oracle.add_argument("--secrets", required=True)
    oracle.add_argument("--dataset", default=None, help="dataset providing n_e*")
    oracle.add_argument("--n-e-star", type=int, default=None)
    oracle.add_argument("--objective", choices=("J", "negQ"), default="J")
    oracle.add_argument("--exhaustive", action="store_true", help="brute force (up to 6 vertices)")
    oracle.add_argument("--iteration", type=int, action="append", default=None, help="repeatable; default all")
    oracle.add_argument("--ga", default=None, help="JSON file with the genetic algorithm config")
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--threads", type=int, default=1)
    oracle.add_argument("--out", default=None)
    oracle.set_defaults(handler=_oracle)

    metrics = subparsers.add_parser("metrics", help="metric dump of one graph JSON")
    metrics.add_argument("--graph", required=True)
    metrics.add_argument("--out", default=None, help="default: standard output")
    metrics.set_defaults(handler=_metrics)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if validation := _check_args(args):
        parser.error(validation)

    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    started_at = datetime.now(timezone.utc).isoformat()
    start = time.perf_counter()
    try:
        manifest = args.handler(args)
    except (NetDesignError, OSError, json.JSONDecodeError) as e:
        print(f"netdesign: error: {e}", file=sys.stderr)
        return EXIT_RUNTIME

    if manifest is not None:
        manifest.started_at = started_at
        manifest.wall_clock_seconds = time.perf_counter() - start
        manifest.output_sha256 = {
            output: hashlib.sha256(Path(output).read_bytes()).hexdigest() for output in manifest.outputs
        }
        manifest.write(_manifest_path(Path(manifest.outputs[0])))
    return EXIT_OK


def _check_args(args: argparse.Namespace) -> str | None:
    if getattr(args, "threads", 1) < 1:
        return "--threads must be positive"
    if getattr(args, "iterations", None) is not None and args.iterations < 1:
        return "--iterations must be positive"
    return None
