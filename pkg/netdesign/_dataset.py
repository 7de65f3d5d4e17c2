from __future__ import annotations

__all__ = [
    "CoverageStats",
    "DataSample",
    "Dataset",
    "DatasetSpec",
    "DynamicsSpec",
    "FamilyCounts",
    "Secrets",
    "connected_graph_count",
    "coverage_stats",
    "default_specs",
    "generate_dataset",
    "load_dataset",
    "load_secrets",
    "load_spec",
    "resolve_spec",
    "save_dataset",
    "save_secrets",
]

import dataclasses
import functools
import json
import logging
import math
from collections.abc import Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Literal

import numpy as np

from ._config import MetricMemoConfig
from ._dynamics import (
    LinearDynamics,
    NodeDynamics,
    NonlinearDynamics,
    dynamics_from_dict,
    linear_objective,
    nonlinear_objectives,
)
from ._exceptions import DatasetParseError, DatasetValidationError, ParameterError
from ._graph import GeneratorKind, Graph, generate, is_connected, max_edges
from ._memo import MemoizedMetrics
from ._metrics import MetricBundle, metric_bundle

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DATASET_KIND = "netdesign-dataset"
SECRETS_KIND = "netdesign-secrets"
COVERAGE_TABLE_MAX_N = 20

Case = Literal["linear", "nonlinear"]


@dataclasses.dataclass(frozen=True)
class FamilyCounts:
    """
    How many graphs of each random family an iteration requests, and the family parameters.

    The deterministic families (complete, path, ring, every star, the 2-nearest-neighbor ring) are always included.
    Random-edge graphs are requested ``random_edges_per_count`` times for every edge count from n_e^min to
    n_e^max - 1, except n_e*. Erdos-Renyi graphs draw their edge probability uniformly from ``erdos_renyi_p``, by
    default [ln(n_v) / n_v, 1].
    """

    erdos_renyi: int = 100
    small_world: int = 100
    scale_free: int = 100
    random_edges_per_count: int = 1
    erdos_renyi_p: tuple[float, float] | None = None
    small_world_k: int = 4
    rewire_prob: float = 0.2
    scale_free_m: int = 2
    nearest_neighbors_k: int = 2

    def __post_init__(self):
        if self.erdos_renyi_p is not None:
            object.__setattr__(self, "erdos_renyi_p", tuple(float(p) for p in self.erdos_renyi_p))
            low, high = self.erdos_renyi_p
            if not (0.0 <= low <= high <= 1.0):
                msg = f"erdos_renyi_p must be a range inside [0, 1], got {self.erdos_renyi_p}"
                raise ParameterError(msg)
        counts = (self.erdos_renyi, self.small_world, self.scale_free, self.random_edges_per_count)
        if any(count < 0 for count in counts):
            msg = f"Family counts must be non-negative, got {counts}"
            raise ParameterError(msg)

    def to_dict(self) -> dict[str, Any]:
        data = dataclasses.asdict(self)
        if self.erdos_renyi_p is not None:
            data["erdos_renyi_p"] = list(self.erdos_renyi_p)
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> FamilyCounts:
        return cls(**data)


@dataclasses.dataclass(frozen=True)
class DynamicsSpec:
    """
    How the hidden node dynamics of every iteration are chosen.

    Linear case: either a fixed ``a`` or ``a_range``, a range a_i is drawn from uniformly and independently in every
    iteration. Nonlinear case: a fixed ``a`` plus ``x0`` and the synchronization settings.
    """

    case: Case
    a: tuple[float, ...] | None = None
    a_range: tuple[float, float] | None = None
    x0: tuple[float, ...] | None = None
    e_thres: float = 0.01
    t_max: float = 1.0
    dt: float = 1e-3

    def __post_init__(self):
        for name in ("a", "a_range", "x0"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(float(v) for v in value))

        if self.case == "linear":
            if (self.a is None) == (self.a_range is None):
                msg = "Linear dynamics need exactly one of a and a_range"
                raise ParameterError(msg)
            if self.a_range is not None and not (self.a_range[0] <= self.a_range[1] < 0):
                msg = f"a_range must be an interval of negative numbers, got {self.a_range}"
                raise ParameterError(msg)
        elif self.case == "nonlinear":
            if self.a is None or self.x0 is None:
                msg = "Nonlinear dynamics need a and x0"
                raise ParameterError(msg)
        else:
            msg = f"Unknown case {self.case!r}"
            raise ParameterError(msg)

    def draw(self, n_v: int, rng: np.random.Generator) -> NodeDynamics:
        if self.case == "linear":
            if self.a_range is not None:
                return LinearDynamics(a=rng.uniform(self.a_range[0], self.a_range[1], size=n_v))
            dynamics = LinearDynamics(a=self.a)
        else:
            dynamics = NonlinearDynamics(a=self.a, x0=self.x0, e_thres=self.e_thres, t_max=self.t_max, dt=self.dt)

        if dynamics.n_v != n_v:
            msg = f"Dynamics have {dynamics.n_v} nodes, the dataset {n_v}"
            raise ParameterError(msg)
        return dynamics

    def to_dict(self) -> dict[str, Any]:
        return {
            key: list(value) if isinstance(value, tuple) else value
            for key, value in dataclasses.asdict(self).items()
            if value is not None
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> DynamicsSpec:
        return cls(**data)


@dataclasses.dataclass(frozen=True)
class DatasetSpec:
    """
    Everything needed to regenerate a dataset: size, graph families, seed and the hidden dynamics.

    ``dynamics`` is None once the spec has been redacted (as in every saved dataset).
    """

    case: Case
    n_v: int
    n_e_star: int
    iterations: int = 20
    families: FamilyCounts = dataclasses.field(default_factory=FamilyCounts)
    seed: int = 0
    dynamics: DynamicsSpec | None = None
    name: str = "custom"
    retry_cap: int = 50

    def __post_init__(self):
        if self.case not in ("linear", "nonlinear"):
            msg = f"Unknown case {self.case!r}"
            raise ParameterError(msg)
        if self.n_v < 5:
            msg = f"Datasets need at least 5 vertices for every graph family, got n_v={self.n_v}"
            raise ParameterError(msg)
        if not (self.n_v - 1 <= self.n_e_star <= max_edges(self.n_v)):
            msg = f"n_e_star must be in [{self.n_v - 1}, {max_edges(self.n_v)}], got {self.n_e_star}"
            raise ParameterError(msg)
        if self.iterations < 1 or self.retry_cap < 1:
            msg = "iterations and retry_cap must be positive"
            raise ParameterError(msg)
        if not (0 <= self.seed < 2**64):
            msg = f"seed must be a 64-bit unsigned integer, got {self.seed}"
            raise ParameterError(msg)
        if self.dynamics is not None and self.dynamics.case != self.case:
            msg = f"Dynamics case {self.dynamics.case!r} does not match the dataset case {self.case!r}"
            raise ParameterError(msg)

    def redacted(self) -> DatasetSpec:
        return dataclasses.replace(self, dynamics=None)

    def with_seed(self, seed: int) -> DatasetSpec:
        return dataclasses.replace(self, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        data = {
            "name": self.name,
            "case": self.case,
            "n_v": self.n_v,
            "n_e_star": self.n_e_star,
            "iterations": self.iterations,
            "families": self.families.to_dict(),
            "seed": self.seed,
            "retry_cap": self.retry_cap,
        }
        if self.dynamics is not None:
            data["dynamics"] = self.dynamics.to_dict()
        return data

    def public_dict(self) -> dict[str, Any]:
        return self.redacted().to_dict()

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> DatasetSpec:
        data = dict(data)
        families = FamilyCounts.from_dict(data.pop("families", {}))
        dynamics = data.pop("dynamics", None)
        return cls(
            families=families,
            dynamics=DynamicsSpec.from_dict(dynamics) if dynamics is not None else None,
            **data,
        )


@dataclasses.dataclass(frozen=True)
class DataSample:
    graph: Graph
    J: float
    iteration: int = 0
    metrics: MetricBundle | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "iteration": self.iteration,
            "edges": [list(edge) for edge in self.graph.edges],
            "J": self.J,
        }
        if self.metrics is not None:
            data["metrics"] = self.metrics.to_dict()
        return data


@dataclasses.dataclass(frozen=True)
class Secrets:
    """The hidden dynamics of every iteration; only the oracle and the validation read them."""

    spec_name: str
    seed: int
    dynamics: tuple[NodeDynamics, ...]

    def for_iteration(self, iteration: int) -> NodeDynamics:
        try:
            return self.dynamics[iteration]
        except IndexError:
            msg = f"No dynamics stored for iteration {iteration}"
            raise ParameterError(msg) from None

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": SECRETS_KIND,
            "schema_version": SCHEMA_VERSION,
            "spec_name": self.spec_name,
            "seed": self.seed,
            "dynamics": [dynamics.to_dict() for dynamics in self.dynamics],
        }


@dataclasses.dataclass(frozen=True)
class Dataset:
    spec: DatasetSpec
    samples: tuple[DataSample, ...]
    warnings: tuple[str, ...] = ()
    secrets: Secrets | None = dataclasses.field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        object.__setattr__(self, "warnings", tuple(self.warnings))
        for sample in self.samples:
            if sample.graph.n_v != self.spec.n_v:
                msg = f"Sample graph has {sample.graph.n_v} vertices, the dataset {self.spec.n_v}"
                raise ParameterError(msg)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[DataSample]:
        return iter(self.samples)

    @property
    def graphs(self) -> list[Graph]:
        return [sample.graph for sample in self.samples]

    @property
    def objectives(self) -> np.ndarray:
        return np.array([sample.J for sample in self.samples], dtype=float)

    def iterations(self) -> list[int]:
        return sorted({sample.iteration for sample in self.samples})

    def iteration(self, iteration: int) -> Dataset:
        return dataclasses.replace(self, samples=tuple(s for s in self.samples if s.iteration == iteration))

    def redacted(self) -> Dataset:
        """The dataset as strategies see it: graphs and objective values, no dynamics."""
        return Dataset(spec=self.spec.redacted(), samples=self.samples, warnings=self.warnings)


def _graph_requests(spec: DatasetSpec, rng: np.random.Generator) -> list[tuple[GeneratorKind, dict[str, Any]]]:
    n_v, families = spec.n_v, spec.families
    requests: list[tuple[GeneratorKind, dict[str, Any]]] = [
        (GeneratorKind.COMPLETE, {}),
        (GeneratorKind.PATH, {}),
        (GeneratorKind.RING, {}),
        *((GeneratorKind.STAR, {"center": center}) for center in range(n_v)),
        (GeneratorKind.K_NEAREST_NEIGHBORS, {"k": families.nearest_neighbors_k}),
    ]

    low, high = families.erdos_renyi_p or (min(1.0, math.log(n_v) / n_v), 1.0)
    requests.extend(
        (GeneratorKind.ERDOS_RENYI, {"p": float(rng.uniform(low, high))}) for _ in range(families.erdos_renyi)
    )
    requests.extend(
        (GeneratorKind.SMALL_WORLD, {"k": families.small_world_k, "rewire_prob": families.rewire_prob})
        for _ in range(families.small_world)
    )
    requests.extend((GeneratorKind.SCALE_FREE, {"m": families.scale_free_m}) for _ in range(families.scale_free))
    requests.extend(
        (GeneratorKind.RANDOM_EDGES, {"e": e})
        for e in range(n_v - 1, max_edges(n_v))
        if e != spec.n_e_star
        for _ in range(families.random_edges_per_count)
    )
    return requests


def _generate_iteration(
    spec: DatasetSpec, iteration: int, seed: np.random.SeedSequence
) -> tuple[list[Graph], np.ndarray, list[str], NodeDynamics]:
    rng = np.random.default_rng(seed)
    dynamics = spec.dynamics.draw(spec.n_v, rng)

    graphs: list[Graph] = []
    warnings: list[str] = []
    for kind, params in _graph_requests(spec, rng):
        for _ in range(spec.retry_cap):
            graph = generate(kind, spec.n_v, rng, **params)
            if is_connected(graph):
                graphs.append(graph)
                break
        else:
            warning = (
                f"iteration {iteration}: {kind.value}({', '.join(f'{k}={v:.4g}' for k, v in params.items())}) "
                f"stayed disconnected after {spec.retry_cap} attempts, skipped"
            )
            logger.warning(warning)
            warnings.append(warning)

    if isinstance(dynamics, LinearDynamics):
        objectives = np.array([linear_objective(dynamics, graph).J for graph in graphs])
    else:
        objectives = np.array([result.J for result in nonlinear_objectives(dynamics, graphs)])

    logger.debug("Iteration %d: %d graphs", iteration, len(graphs))
    return graphs, objectives, warnings, dynamics


def generate_dataset(spec: DatasetSpec, threads: int = 1) -> Dataset:
    """
    Generates every iteration of a dataset: the graphs of the requested families, discarding disconnected ones, and
    their objective values under the hidden dynamics of that iteration.

    Iteration k draws from its own random stream (spawned from the spec's seed), so the result does not depend on
    ``threads``. The hidden dynamics are returned in ``Dataset.secrets``.
    """
    if spec.dynamics is None:
        msg = "Cannot generate a dataset from a redacted spec"
        raise ParameterError(msg)
    if threads < 1:
        msg = f"threads must be positive, got {threads}"
        raise ParameterError(msg)

    seeds = np.random.SeedSequence(spec.seed).spawn(spec.iterations)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        results = list(executor.map(lambda k: _generate_iteration(spec, k, seeds[k]), range(spec.iterations)))

    memo = MemoizedMetrics(MetricMemoConfig("metrics", metric_bundle))
    samples: list[DataSample] = []
    warnings: list[str] = []
    for iteration, (graphs, objectives, iteration_warnings, _) in enumerate(results):
        bundles = memo.process_chunk(graphs)["metrics"]
        samples.extend(
            DataSample(graph=graph, J=float(J), iteration=iteration, metrics=bundle)
            for graph, J, bundle in zip(graphs, objectives, bundles)
        )
        warnings.extend(iteration_warnings)

    secrets = Secrets(spec_name=spec.name, seed=spec.seed, dynamics=tuple(result[3] for result in results))
    logger.info("Generated dataset %s: %d samples over %d iterations", spec.name, len(samples), spec.iterations)
    return Dataset(spec=spec, samples=tuple(samples), warnings=tuple(warnings), secrets=secrets)


@functools.cache
def _connected_labeled_graphs(n: int) -> int:
    if n == 1:
        return 1
    total = 2 ** math.comb(n, 2)
    return total - sum(
        math.comb(n - 1, k - 1) * _connected_labeled_graphs(k) * 2 ** math.comb(n - k, 2) for k in range(1, n)
    )


def connected_graph_count(n_v: int) -> int | None:
    """Number of connected labeled graphs on n_v vertices; None outside the tabulated range 1..20."""
    if not (1 <= n_v <= COVERAGE_TABLE_MAX_N):
        return None
    return _connected_labeled_graphs(n_v)


@dataclasses.dataclass(frozen=True)
class CoverageStats:
    sample_count: float  # mean per iteration
    decision_space_size: int | None
    coverage_percent: float | None


def coverage_stats(dataset: Dataset) -> CoverageStats:
    iterations = dataset.iterations()
    sample_count = len(dataset) / len(iterations) if iterations else 0.0
    size = connected_graph_count(dataset.spec.n_v)
    if size is None:
        return CoverageStats(sample_count=sample_count, decision_space_size=None, coverage_percent=None)
    return CoverageStats(
        sample_count=sample_count, decision_space_size=size, coverage_percent=100.0 * sample_count / size
    )


def _linear_middle_a(n_v: int) -> tuple[float, ...]:
    return tuple(float(-n_v + (i - 1)) for i in range(1, n_v + 1))


def _nonlinear_dynamics() -> DynamicsSpec:
    return DynamicsSpec(
        case="nonlinear",
        a=tuple(1.0 + 0.2 * i for i in range(1, 11)),
        x0=(-1.0, -2.0, -3.0, -4.0, -5.0, 2.0, 4.0, 6.0, 8.0, 10.0),
        e_thres=0.01,
        t_max=1.0,
    )


def default_specs() -> dict[str, DatasetSpec]:
    """The five benchmark datasets, keyed by name."""
    return {
        "D_middle_l": DatasetSpec(
            name="D_middle_l",
            case="linear",
            n_v=20,
            n_e_star=45,
            families=FamilyCounts(erdos_renyi=150, small_world=150, scale_free=150),
            dynamics=DynamicsSpec(case="linear", a=_linear_middle_a(20)),
        ),
        "D_small_l": DatasetSpec(
            name="D_small_l",
            case="linear",
            n_v=10,
            n_e_star=20,
            families=FamilyCounts(erdos_renyi=70, small_world=70, scale_free=70),
            dynamics=DynamicsSpec(case="linear", a_range=(-20.0, -1.0)),
        ),
        "D_large_l": DatasetSpec(
            name="D_large_l",
            case="linear",
            n_v=20,
            n_e_star=45,
            families=FamilyCounts(erdos_renyi=1500, small_world=1500, scale_free=1500),
            dynamics=DynamicsSpec(case="linear", a=_linear_middle_a(20)),
        ),
        "D_middle_nl": DatasetSpec(
            name="D_middle_nl",
            case="nonlinear",
            n_v=10,
            n_e_star=20,
            families=FamilyCounts(erdos_renyi=60, small_world=60, scale_free=60),
            dynamics=_nonlinear_dynamics(),
        ),
        "D_large_nl": DatasetSpec(
            name="D_large_nl",
            case="nonlinear",
            n_v=10,
            n_e_star=20,
            families=FamilyCounts(erdos_renyi=1550, small_world=1550, scale_free=1550),
            dynamics=_nonlinear_dynamics(),
        ),
    }


def load_spec(path: str | Path) -> DatasetSpec:
    try:
        data = json.loads(Path(path).read_text())
        return DatasetSpec.from_dict(data)
    except (json.JSONDecodeError, TypeError) as e:
        msg = f"Malformed dataset spec {path}: {e}"
        raise ParameterError(msg) from e


def resolve_spec(name_or_path: str) -> DatasetSpec:
    """A named benchmark spec, or a spec read from a JSON file."""
    specs = default_specs()
    if name_or_path in specs:
        return specs[name_or_path]
    if Path(name_or_path).is_file():
        return load_spec(name_or_path)
    msg = f"Unknown dataset spec {name_or_path!r}; expected one of {', '.join(specs)} or a JSON file"
    raise ParameterError(msg)


def _dumps(data: Mapping[str, Any]) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """Writes the redacted dataset as JSON Lines: a metadata line, then one line per sample."""
    header = {
        "kind": DATASET_KIND,
        "schema_version": SCHEMA_VERSION,
        "spec": dataset.spec.public_dict(),
        "n_samples": len(dataset),
        "warnings": list(dataset.warnings),
    }
    with Path(path).open("w", encoding="utf-8") as f:
        f.write(_dumps(header) + "\n")
        for sample in dataset.samples:
            f.write(_dumps(sample.to_dict()) + "\n")


def _parse_sample(data: Any, spec: DatasetSpec, line_number: int) -> DataSample:
    if not isinstance(data, dict):
        msg = "expected a sample object"
        raise DatasetParseError(msg, line_number)
    try:
        edges = tuple(tuple(edge) for edge in data["edges"])
        J = data["J"]
        iteration = data.get("iteration", 0)
        metrics = MetricBundle.from_dict(data["metrics"]) if "metrics" in data else None
    except (KeyError, TypeError, ValueError) as e:
        msg = f"malformed sample: {e!r}"
        raise DatasetParseError(msg, line_number) from e

    if isinstance(J, bool) or not isinstance(J, (int, float)) or not (0.0 <= J <= 1.0):
        msg = f"J must be a number in [0, 1], got {J!r}"
        raise DatasetValidationError(msg, line_number)
    if not isinstance(iteration, int) or not (0 <= iteration < spec.iterations):
        msg = f"iteration must be an integer in [0, {spec.iterations}), got {iteration!r}"
        raise DatasetValidationError(msg, line_number)
    try:
        graph = Graph(spec.n_v, edges)
    except (ParameterError, TypeError, ValueError) as e:
        raise DatasetValidationError(str(e), line_number) from e
    if not is_connected(graph):
        msg = "sample graph is disconnected"
        raise DatasetValidationError(msg, line_number)

    return DataSample(graph=graph, J=float(J), iteration=iteration, metrics=metrics)


def load_dataset(path: str | Path) -> Dataset:
    """Reads a dataset written by `save_dataset`; any malformed line fails the whole load."""
    with Path(path).open(encoding="utf-8") as f:
        lines = f.read().splitlines()

    if not lines:
        msg = "empty dataset file"
        raise DatasetParseError(msg, 1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        msg = f"invalid JSON: {e.msg}"
        raise DatasetParseError(msg, 1) from e
    if not isinstance(header, dict) or header.get("kind") != DATASET_KIND:
        msg = "not a netdesign dataset file"
        raise DatasetParseError(msg, 1)
    if header.get("schema_version") != SCHEMA_VERSION:
        msg = f"unsupported schema version {header.get('schema_version')!r}"
        raise DatasetParseError(msg, 1)
    try:
        spec = DatasetSpec.from_dict(header["spec"])
        n_samples = int(header["n_samples"])
    except (KeyError, TypeError, ValueError) as e:
        msg = f"malformed metadata: {e}"
        raise DatasetParseError(msg, 1) from e
    if spec.dynamics is not None:
        msg = "dataset metadata must not contain dynamics parameters"
        raise DatasetValidationError(msg, 1)

    samples = []
    for line_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            msg = f"invalid JSON: {e.msg}"
            raise DatasetParseError(msg, line_number) from e
        samples.append(_parse_sample(data, spec, line_number))

    if len(samples) != n_samples:
        msg = f"expected {n_samples} samples, found {len(samples)} (truncated file?)"
        raise DatasetParseError(msg, len(lines) + 1)

    return Dataset(spec=spec, samples=tuple(samples), warnings=tuple(header.get("warnings", ())))


def save_secrets(secrets: Secrets, path: str | Path) -> None:
    Path(path).write_text(json.dumps(secrets.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8")


def load_secrets(path: str | Path) -> Secrets:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        msg = f"invalid JSON: {e.msg}"
        raise DatasetParseError(msg, e.lineno) from e
    if not isinstance(data, dict) or data.get("kind") != SECRETS_KIND:
        msg = "not a netdesign secrets file"
        raise DatasetParseError(msg, 1)
    try:
        return Secrets(
            spec_name=str(data["spec_name"]),
            seed=int(data["seed"]),
            dynamics=tuple(dynamics_from_dict(entry) for entry in data["dynamics"]),
        )
    except (KeyError, TypeError) as e:
        msg = f"malformed secrets file: {e!r}"
        raise DatasetParseError(msg) from e
