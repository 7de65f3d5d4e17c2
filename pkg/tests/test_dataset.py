import json
import logging
import math
from pathlib import Path

import numpy as np
import pytest
from dirty_equals import IsPartialDict

from netdesign import (
    DatasetParseError,
    DatasetValidationError,
    DynamicsSpec,
    FamilyCounts,
    LinearDynamics,
    NonlinearDynamics,
    ParameterError,
    connected_graph_count,
    coverage_stats,
    default_specs,
    generate_dataset,
    is_connected,
    load_dataset,
    load_secrets,
    resolve_spec,
    save_dataset,
    save_secrets,
)
from tests.factories import DatasetSpecFactory, DynamicsSpecFactory, FamilyCountsFactory

# complete, path, ring, 6 stars, 2-nearest-neighbor ring, 4 + 4 + 4 random family graphs and one random-edge graph
# for every edge count 5..14 except n_e* = 8
REQUESTS_PER_ITERATION = 3 + 6 + 1 + 12 + 9


class TestGenerateDataset:
    def test_linear(self, linear_dataset, linear_spec):
        assert linear_dataset.warnings == ()
        assert len(linear_dataset) == 2 * REQUESTS_PER_ITERATION
        assert linear_dataset.iterations() == [0, 1]
        assert len(linear_dataset.iteration(1)) == REQUESTS_PER_ITERATION
        assert all(is_connected(graph) for graph in linear_dataset.graphs)
        assert np.all((linear_dataset.objectives >= 0) & (linear_dataset.objectives <= 1))
        assert all(sample.metrics is not None and sample.metrics.n_e == sample.graph.n_e for sample in linear_dataset)
        assert linear_dataset.spec == linear_spec

    def test_fixed_families(self, linear_dataset):
        edge_counts = sorted(sample.graph.n_e for sample in linear_dataset.iteration(0))

        # complete graph, 2-nearest-neighbor ring and ring
        assert 15 in edge_counts
        assert 12 in edge_counts
        assert edge_counts.count(5) >= 7  # path and stars

    def test_secrets(self, linear_dataset, linear_spec):
        secrets = linear_dataset.secrets

        assert secrets.spec_name == linear_spec.name
        assert secrets.seed == linear_spec.seed
        assert len(secrets.dynamics) == 2
        assert all(isinstance(dynamics, LinearDynamics) for dynamics in secrets.dynamics)
        # a is redrawn from a_range in every iteration
        assert secrets.dynamics[0] != secrets.dynamics[1]
        assert all(-5.0 <= a <= -1.0 for dynamics in secrets.dynamics for a in dynamics.a)

        with pytest.raises(ParameterError, match="No dynamics stored for iteration 2"):
            secrets.for_iteration(2)

    def test_nonlinear(self, nonlinear_dataset):
        assert nonlinear_dataset.warnings == ()
        assert len(nonlinear_dataset) == 2 * REQUESTS_PER_ITERATION
        assert np.all((nonlinear_dataset.objectives >= 0) & (nonlinear_dataset.objectives <= 1))
        assert nonlinear_dataset.secrets.dynamics[0] == nonlinear_dataset.secrets.dynamics[1]
        assert isinstance(nonlinear_dataset.secrets.dynamics[0], NonlinearDynamics)

    def test_deterministic(self, linear_dataset, linear_spec):
        regenerated = generate_dataset(linear_spec, threads=2)

        assert regenerated == linear_dataset
        assert regenerated.secrets == linear_dataset.secrets

    def test_seed_matters(self, linear_dataset, linear_spec):
        assert generate_dataset(linear_spec.with_seed(linear_spec.seed + 1)).samples != linear_dataset.samples

    def test_disconnected_families_are_reported(self, caplog):
        spec = DatasetSpecFactory(
            iterations=1, retry_cap=20, families=FamilyCountsFactory(erdos_renyi=3, erdos_renyi_p=(0.0, 0.0))
        )

        with caplog.at_level(logging.WARNING, logger="netdesign"):
            dataset = generate_dataset(spec)

        assert len(dataset.warnings) == 3
        assert "stayed disconnected after 20 attempts" in dataset.warnings[0]
        assert len(dataset) == REQUESTS_PER_ITERATION - 3
        assert len(caplog.records) == 3

    def test_redacted_spec(self, linear_spec):
        with pytest.raises(ParameterError, match="redacted spec"):
            generate_dataset(linear_spec.redacted())

    def test_redacted(self, linear_dataset):
        redacted = linear_dataset.redacted()

        assert redacted.spec.dynamics is None
        assert redacted.secrets is None
        assert redacted.samples == linear_dataset.samples


class TestSpecs:
    def test_default_specs(self):
        specs = default_specs()

        assert list(specs) == ["D_middle_l", "D_small_l", "D_large_l", "D_middle_nl", "D_large_nl"]
        assert specs["D_middle_l"].n_v == 20
        assert specs["D_middle_l"].n_e_star == 45
        assert specs["D_middle_l"].dynamics.a == tuple(float(a) for a in range(-20, 0))
        assert specs["D_small_l"].dynamics.a_range == (-20.0, -1.0)
        assert specs["D_large_l"].families.erdos_renyi == 1500
        assert specs["D_middle_nl"].dynamics.x0 == (-1.0, -2.0, -3.0, -4.0, -5.0, 2.0, 4.0, 6.0, 8.0, 10.0)
        assert specs["D_middle_nl"].dynamics.a[0] == pytest.approx(1.2)
        assert specs["D_large_nl"].families.scale_free == 1550
        assert all(spec.iterations == 20 for spec in specs.values())

    def test_resolve(self, tmp_path: Path):
        spec = DatasetSpecFactory()
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(spec.to_dict()))

        assert resolve_spec("D_small_l") == default_specs()["D_small_l"]
        assert resolve_spec(str(path)) == spec

        with pytest.raises(ParameterError, match="Unknown dataset spec 'D_tiny'"):
            resolve_spec("D_tiny")

    @pytest.mark.parametrize(
        ["params", "match"],
        [
            ({"n_v": 4, "n_e_star": 4}, "at least 5 vertices"),
            ({"n_e_star": 16}, r"\[5, 15\]"),
            ({"seed": -1}, "64-bit"),
            ({"iterations": 0}, "positive"),
            ({"case": "nonlinear"}, "does not match"),
        ],
    )
    def test_invalid_spec(self, params, match):
        with pytest.raises(ParameterError, match=match):
            DatasetSpecFactory(**params)

    @pytest.mark.parametrize(
        ["params", "match"],
        [
            ({"a": (-1.0,) * 6}, "exactly one of a and a_range"),
            ({"a_range": (-1.0, 2.0)}, "negative"),
            ({"case": "nonlinear", "a_range": None, "a": (1.0,)}, "need a and x0"),
            ({"case": "chaotic"}, "Unknown case"),
        ],
    )
    def test_invalid_dynamics(self, params, match):
        with pytest.raises(ParameterError, match=match):
            DynamicsSpecFactory(**params)

    def test_invalid_families(self):
        with pytest.raises(ParameterError, match="non-negative"):
            FamilyCounts(small_world=-1)

    def test_dynamics_size(self):
        spec = DynamicsSpec(case="linear", a=(-1.0, -2.0))

        with pytest.raises(ParameterError, match="Dynamics have 2 nodes, the dataset 6"):
            spec.draw(6, np.random.default_rng(0))


class TestCoverage:
    @pytest.mark.parametrize(
        ["n_v", "count"], [(1, 1), (2, 1), (3, 4), (4, 38), (5, 728), (6, 26704), (7, 1866256)]
    )
    def test_connected_graph_count(self, n_v, count):
        assert connected_graph_count(n_v) == count

    def test_outside_table(self):
        assert connected_graph_count(0) is None
        assert connected_graph_count(21) is None

    def test_coverage(self, linear_dataset):
        stats = coverage_stats(linear_dataset)

        assert stats.sample_count == REQUESTS_PER_ITERATION
        assert stats.decision_space_size == 26704
        assert stats.coverage_percent == pytest.approx(100 * REQUESTS_PER_ITERATION / 26704)


class TestSerialization:
    def test_save_load(self, linear_dataset, tmp_path: Path):
        path = tmp_path / "dataset.jsonl"

        save_dataset(linear_dataset, path)
        loaded = load_dataset(path)

        assert loaded == linear_dataset.redacted()
        lines = path.read_text().splitlines()
        assert len(lines) == len(linear_dataset) + 1
        header = json.loads(lines[0])
        assert header == IsPartialDict(kind="netdesign-dataset", schema_version=1, n_samples=len(linear_dataset))
        assert "dynamics" not in header["spec"]
        assert "J" in json.loads(lines[1])

    def test_deterministic_bytes(self, linear_dataset, tmp_path: Path):
        save_dataset(linear_dataset, tmp_path / "first.jsonl")
        save_dataset(generate_dataset(linear_dataset.spec), tmp_path / "second.jsonl")

        assert (tmp_path / "first.jsonl").read_bytes() == (tmp_path / "second.jsonl").read_bytes()

    def test_secrets(self, linear_dataset, tmp_path: Path):
        path = tmp_path / "dataset.secrets.json"

        save_secrets(linear_dataset.secrets, path)

        assert load_secrets(path) == linear_dataset.secrets
        assert json.loads(path.read_text()) == IsPartialDict(kind="netdesign-secrets")

    @pytest.fixture
    def lines(self, linear_dataset, tmp_path: Path) -> list[str]:
        save_dataset(linear_dataset.iteration(0), tmp_path / "dataset.jsonl")
        return (tmp_path / "dataset.jsonl").read_text().splitlines()

    def _load(self, lines: list[str], tmp_path: Path):
        path = tmp_path / "corrupted.jsonl"
        path.write_text("\n".join(lines) + "\n")
        return load_dataset(path)

    def test_invalid_json(self, lines: list[str], tmp_path: Path):
        lines[3] = lines[3][:-5]

        with pytest.raises(DatasetParseError, match="line 4: invalid JSON") as exc_info:
            self._load(lines, tmp_path)

        assert exc_info.value.line_number == 4

    def test_truncated(self, lines: list[str], tmp_path: Path):
        with pytest.raises(DatasetParseError, match="truncated"):
            self._load(lines[:-1], tmp_path)

    @pytest.mark.parametrize(
        ["change", "match"],
        [
            ({"J": 1.5}, r"J must be a number in \[0, 1\]"),
            ({"J": "0.5"}, r"J must be a number in \[0, 1\]"),
            ({"iteration": 2}, "iteration must be an integer"),
            ({"edges": [[0, 1], [2, 3], [4, 5]]}, "disconnected"),
            ({"edges": [[0, 0]]}, "Self-loop"),
        ],
    )
    def test_invalid_sample(self, lines: list[str], tmp_path: Path, change, match):
        lines[2] = json.dumps({**json.loads(lines[2]), **change})

        with pytest.raises(DatasetValidationError, match=f"line 3: {match}"):
            self._load(lines, tmp_path)

    def test_dynamics_in_header(self, lines: list[str], tmp_path: Path):
        header = json.loads(lines[0])
        header["spec"]["dynamics"] = {"case": "linear", "a": [-1.0] * 6}
        lines[0] = json.dumps(header)

        with pytest.raises(DatasetValidationError, match="must not contain dynamics"):
            self._load(lines, tmp_path)

    @pytest.mark.parametrize(
        ["header", "match"],
        [
            ("", "line 1: invalid JSON"),
            ('{"kind": "something-else"}', "not a netdesign dataset file"),
            ('{"kind": "netdesign-dataset", "schema_version": 2}', "unsupported schema version"),
        ],
    )
    def test_invalid_header(self, lines: list[str], tmp_path: Path, header, match):
        lines[0] = header

        with pytest.raises(DatasetParseError, match=match):
            self._load(lines, tmp_path)

    def test_empty_file(self, tmp_path: Path):
        (tmp_path / "empty.jsonl").write_text("")

        with pytest.raises(DatasetParseError, match="empty dataset file"):
            load_dataset(tmp_path / "empty.jsonl")

    def test_nan_j(self, lines: list[str], tmp_path: Path):
        lines[1] = json.dumps({**json.loads(lines[1]), "J": math.nan})

        with pytest.raises(DatasetValidationError, match="line 2"):
            self._load(lines, tmp_path)
