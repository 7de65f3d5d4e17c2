from __future__ import annotations

__all__ = [
    "LinearDynamics",
    "NodeDynamics",
    "NonlinearDynamics",
    "SyncResult",
    "Trajectory",
    "dynamics_from_dict",
    "eigenratio_objective",
    "linear_objective",
    "nonlinear_objective",
    "nonlinear_objectives",
    "objective",
    "simulate_nonlinear",
]

import dataclasses
import math
from collections.abc import Mapping, Sequence
from typing import Any, Union

import numpy as np

from ._exceptions import DivergenceError, DomainError, ParameterError
from ._graph import Graph, is_connected
from ._linalg import EigenMethod, eigvalsh
from ._metrics import eigenratio

DIVERGENCE_BOUND = 1e6


def _as_tuple(values: Sequence[float] | np.ndarray) -> tuple[float, ...]:
    return tuple(float(v) for v in np.asarray(values, dtype=float).ravel())


@dataclasses.dataclass(frozen=True)
class LinearDynamics:
    """Stable scalar nodes x_i' = a_i x_i, a_i < 0, coupled diffusively: x' = (A - L) x with A = diag(a)."""

    a: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", _as_tuple(self.a))
        if not self.a:
            msg = "Dynamics need at least one node"
            raise ParameterError(msg)
        if any(not (a_i < 0) for a_i in self.a):
            msg = f"Linear node dynamics must be stable (all a_i < 0), got {list(self.a)}"
            raise ParameterError(msg)

    @property
    def n_v(self) -> int:
        return len(self.a)

    def to_dict(self) -> dict[str, Any]:
        return {"case": "linear", "a": list(self.a)}


@dataclasses.dataclass(frozen=True)
class NonlinearDynamics:
    """
    Bistable nodes f(x_i) = a_i (x_i - x_i^3), a_i > 0, coupled diffusively: x' = f(x) - L x, from x(0) = x0.

    Synchronization is measured on the integration grid of step `dt` over [0, `t_max`]; the network counts as
    synchronized once the total deviation from the average state stays at or below `e_thres`.
    """

    a: tuple[float, ...]
    x0: tuple[float, ...]
    e_thres: float = 0.01
    t_max: float = 1.0
    dt: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "a", _as_tuple(self.a))
        object.__setattr__(self, "x0", _as_tuple(self.x0))
        if not self.a or len(self.a) != len(self.x0):
            msg = f"a and x0 must have the same positive length, got {len(self.a)} and {len(self.x0)}"
            raise ParameterError(msg)
        if any(not (a_i > 0) for a_i in self.a):
            msg = f"Nonlinear node dynamics need all a_i > 0, got {list(self.a)}"
            raise ParameterError(msg)
        if not (self.e_thres > 0 and self.t_max > 0 and self.dt > 0):
            msg = "e_thres, t_max and dt must be positive"
            raise ParameterError(msg)
        if abs(self.n_steps * self.dt - self.t_max) > 1e-9 * max(1.0, self.t_max):
            msg = f"dt={self.dt} must divide t_max={self.t_max} evenly"
            raise ParameterError(msg)

    @property
    def n_v(self) -> int:
        return len(self.a)

    @property
    def n_steps(self) -> int:
        return round(self.t_max / self.dt)

    def to_dict(self) -> dict[str, Any]:
        return {
            "case": "nonlinear",
            "a": list(self.a),
            "x0": list(self.x0),
            "e_thres": self.e_thres,
            "t_max": self.t_max,
            "dt": self.dt,
        }


NodeDynamics = Union[LinearDynamics, NonlinearDynamics]


def dynamics_from_dict(data: Mapping[str, Any]) -> NodeDynamics:
    case = data.get("case")
    if case == "linear":
        return LinearDynamics(a=data["a"])
    if case == "nonlinear":
        return NonlinearDynamics(
            a=data["a"],
            x0=data["x0"],
            e_thres=float(data.get("e_thres", 0.01)),
            t_max=float(data.get("t_max", 1.0)),
            dt=float(data.get("dt", 1e-3)),
        )
    msg = f"Unknown dynamics case {case!r}"
    raise ParameterError(msg)


@dataclasses.dataclass(frozen=True)
class SyncResult:
    """
    Objective value J in [0, 1] plus the quantities it was derived from.

    Linear case: `lambda_u` (slowest uncoupled mode), `lambda_c` (slowest coupled mode) and `beta` (the complete-graph
    lower bound), with beta <= lambda_c <= lambda_u < 0. Nonlinear case: `t_sync`.
    """

    J: float
    t_sync: float | None = None
    lambda_u: float | None = None
    lambda_c: float | None = None
    beta: float | None = None


@dataclasses.dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), n_v)


def _check_network(n_v: int, graph: Graph) -> None:
    if n_v != graph.n_v:
        msg = f"Dynamics have {n_v} nodes but the graph has {graph.n_v} vertices"
        raise ParameterError(msg)
    if not is_connected(graph):
        msg = "Synchronization objectives need a connected graph"
        raise DomainError(msg)


def linear_objective(dynamics: LinearDynamics, graph: Graph, method: EigenMethod = "lapack") -> SyncResult:
    """J = -(lambda_c - lambda_u) / |beta - lambda_u|: 0 means no speed-up over the uncoupled nodes, 1 the ideal one."""
    _check_network(dynamics.n_v, graph)
    n_v = dynamics.n_v
    if n_v < 2:
        msg = "The linear objective needs at least two nodes"
        raise ParameterError(msg)

    a = np.array(dynamics.a)
    lambda_u = float(a.max())
    lambda_c = float(eigvalsh(np.diag(a) - graph.laplacian(), method=method)[-1])
    beta = (float(a.sum()) - n_v * (n_v - 1)) / n_v

    J = -(lambda_c - lambda_u) / abs(beta - lambda_u)
    return SyncResult(J=min(max(J, 0.0), 1.0), lambda_u=lambda_u, lambda_c=lambda_c, beta=beta)


def _coupled_rhs(x: np.ndarray, a: np.ndarray, laplacians: np.ndarray) -> np.ndarray:
    # x: (batch, n_v), laplacians: (batch, n_v, n_v)
    return a * (x - x**3) - np.einsum("bij,bj->bi", laplacians, x)


def _rk4_step(x: np.ndarray, a: np.ndarray, laplacians: np.ndarray, dt: float) -> np.ndarray:
    k1 = _coupled_rhs(x, a, laplacians)
    k2 = _coupled_rhs(x + 0.5 * dt * k1, a, laplacians)
    k3 = _coupled_rhs(x + 0.5 * dt * k2, a, laplacians)
    k4 = _coupled_rhs(x + dt * k3, a, laplacians)
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_bounded(x: np.ndarray, step: int) -> None:
    if not np.all(np.abs(x) <= DIVERGENCE_BOUND):
        msg = f"State left the bound {DIVERGENCE_BOUND:g} at step {step}"
        raise DivergenceError(msg, step=step)


def _total_error(states: np.ndarray) -> np.ndarray:
    return np.abs(states - states.mean(axis=-1, keepdims=True)).sum(axis=-1)


def _sync_result(dynamics: NonlinearDynamics, e_tot: np.ndarray) -> SyncResult:
    above = np.flatnonzero(e_tot > dynamics.e_thres)
    if above.size == 0:
        t_sync = 0.0
    elif above[-1] == len(e_tot) - 1:
        t_sync = dynamics.t_max
    else:
        t_sync = (above[-1] + 1) * dynamics.t_max / dynamics.n_steps

    J = 1.0 - t_sync / dynamics.t_max
    return SyncResult(J=min(max(J, 0.0), 1.0), t_sync=t_sync)


def simulate_nonlinear(dynamics: NonlinearDynamics, graph: Graph) -> Trajectory:
    """Fixed-step RK4 integration of x' = a (x - x^3) - L x."""
    _check_network(dynamics.n_v, graph)
    a = np.array(dynamics.a)
    laplacians = graph.laplacian()[np.newaxis]

    states = np.empty((dynamics.n_steps + 1, dynamics.n_v))
    x = np.array(dynamics.x0)[np.newaxis]
    states[0] = x[0]
    for step in range(1, dynamics.n_steps + 1):
        x = _rk4_step(x, a, laplacians, dynamics.dt)
        _check_bounded(x, step)
        states[step] = x[0]

    return Trajectory(times=np.linspace(0.0, dynamics.t_max, dynamics.n_steps + 1), states=states)


def nonlinear_objective(dynamics: NonlinearDynamics, graph: Graph) -> SyncResult:
    """
    J = 1 - t_sync / t_max, where t_sync is the first grid time from which the total error stays within the threshold.

    The total error is the sum over nodes of |x_i - mean(x)|.
    """
    return _sync_result(dynamics, _total_error(simulate_nonlinear(dynamics, graph).states))


def nonlinear_objectives(
    dynamics: NonlinearDynamics, graphs: Sequence[Graph], chunk_size: int = 512
) -> list[SyncResult]:
    """nonlinear_objective over many graphs, integrating a chunk of networks in lockstep."""
    for graph in graphs:
        _check_network(dynamics.n_v, graph)
    a = np.array(dynamics.a)
    results: list[SyncResult] = []

    for start in range(0, len(graphs), chunk_size):
        chunk = graphs[start : start + chunk_size]
        laplacians = np.stack([graph.laplacian() for graph in chunk])
        x = np.tile(np.array(dynamics.x0), (len(chunk), 1))
        e_tot = np.empty((dynamics.n_steps + 1, len(chunk)))
        e_tot[0] = _total_error(x)
        for step in range(1, dynamics.n_steps + 1):
            x = _rk4_step(x, a, laplacians, dynamics.dt)
            _check_bounded(x, step)
            e_tot[step] = _total_error(x)
        results.extend(_sync_result(dynamics, e_tot[:, k]) for k in range(len(chunk)))

    return results


def objective(dynamics: NodeDynamics, graph: Graph) -> SyncResult:
    if isinstance(dynamics, LinearDynamics):
        return linear_objective(dynamics, graph)
    return nonlinear_objective(dynamics, graph)


def eigenratio_objective(graph: Graph) -> float:
    """-Q, the dynamics-free synchronizability index (larger is better); -inf for disconnected graphs."""
    q = eigenratio(graph)
    return -q if math.isfinite(q) else -math.inf
