from __future__ import annotations

__all__ = ["MemoizedMetrics"]

from collections.abc import Callable, Iterable, Iterator
from typing import Any

from lru import LRU

from ._config import MetricMemoConfig
from ._exceptions import ParameterError
from ._graph import Graph


class MemoizedMetrics:
    """
    A class that memoizes per-graph metrics when processing graphs in chunks. Given a list of metric configurations,
    `process_chunk` computes the metrics a chunk needs, reusing values computed for graphs seen in previous chunks (up
    to a limit).

    See MetricMemoConfig for description of the parameters. Graphs are immutable values, so they are used directly as
    cache keys; two graphs with the same labeled edge set share their cached metrics.

    MemoizedMetrics is eager: configs with `prefetch` graphs are evaluated in the constructor.
    """

    def __init__(self, *configs: MetricMemoConfig):
        self.memoized_values: dict[str, LRU[Graph, Any]] = {}
        self.memoized_values_configs: dict[str, MetricMemoConfig] = {}

        for config in configs:
            if config.name in self.memoized_values_configs:
                msg = (
                    "Metric names have to be unique. If two metrics share a computation, "
                    "compute them together and memoize the combined value."
                )
                raise ParameterError(msg)

            self.memoized_values_configs[config.name] = config
            self.memoized_values[config.name] = LRU(config.lru_cache_size)

            if config.prefetch:
                self.memoized_values[config.name].update(
                    {graph: config.compute(graph) for graph in list(config.prefetch)[: config.lru_cache_size]}
                )

    def _config(self, name: str) -> MetricMemoConfig:
        try:
            return self.memoized_values_configs[name]
        except KeyError:
            msg = f"No memoized metric named {name!r}"
            raise ParameterError(msg) from None

    def process_chunk(
        self,
        graphs: Iterable[Graph],
        names: Iterable[str] | None = None,
        map_fn: Callable[[Callable[[Graph], Any], list[Graph]], Iterator[Any]] = map,
    ) -> dict[str, list[Any]]:
        """
        Returns, for every requested metric, its values on the chunk in chunk order.

        Missing values are computed with `map_fn` (for example `ThreadPoolExecutor.map`).
        """
        graphs = list(graphs)
        names = list(self.memoized_values_configs) if names is None else list(names)

        # find which values are not memoized yet (a chunk may repeat a graph)
        need_values: dict[str, list[Graph]] = {}
        for name in names:
            config = self._config(name)
            cache = self.memoized_values[config.name]
            missing = list(dict.fromkeys(graph for graph in graphs if graph not in cache))
            if missing:
                need_values[name] = missing

        # compute them; the LRU is temporarily grown so the values of this chunk are not evicted before we read them
        for name, missing in need_values.items():
            cache = self.memoized_values[name]
            cache.set_size(cache.get_size() + len(missing))
            compute = self.memoized_values_configs[name].compute
            cache.update(dict(zip(missing, map_fn(compute, missing))))

        values = {name: [self.memoized_values[name][graph] for graph in graphs] for name in names}

        # set the correct size for the LRU cache (as we temporarily increased the size before)
        for name in need_values:
            self.memoized_values[name].set_size(self.memoized_values_configs[name].lru_cache_size)

        return values

    def get(self, name: str, graph: Graph) -> Any:
        cache = self.memoized_values[self._config(name).name]
        if graph not in cache:
            cache[graph] = self.memoized_values_configs[name].compute(graph)
        return cache[graph]
