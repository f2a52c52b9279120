"""Synchronous round-based execution of the consensus protocols.

A run advances all agents simultaneously: every agent first scales its
current state by the round's weights and sends one (x, y) message pair per
out-edge, then every agent folds the received messages and its own self-term
into the next state.  During rounds 0..K of the privacy-preserving variants
the x-side folds the *net* observed flow scaled by sigma(k) instead, which
keeps the total x-mass invariant despite the free weights; the running
estimate is always the ratio z = x / y.

Every run produces a :class:`RunRecord` holding the full trajectory and,
unless disabled, the complete per-edge message transcript in canonical edge
order.  Replaying the transcript reproduces the states exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import Digraph
from .weights import WeightSchedule, validate_column_stochastic


class EngineError(ValueError):
    """Base class for protocol execution errors."""


class ScheduleTooShortError(EngineError):
    pass


class NotColumnStochasticError(EngineError):
    pass


class ScheduleMismatchError(EngineError):
    pass


class DimensionMismatchError(EngineError):
    pass


@dataclass(frozen=True)
class RunRecord:
    """Trajectory plus transcript of one run.

    ``x`` and ``z`` have shape (rounds+1, n) or (rounds+1, n, d); ``y`` has
    shape (rounds+1, n).  ``mx``/``my`` hold, for each round and edge, the
    transmitted x- and y-message values; ``mx`` gains a trailing coordinate
    axis in the vector case.  ``messages_recorded`` is False for large runs
    executed with the transcript disabled.
    """

    graph: Digraph
    schedule: WeightSchedule
    rounds: int
    mode: str  # "conventional" | "private" | "private-vector"
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    mx: np.ndarray | None
    my: np.ndarray | None
    seed: object = None

    @property
    def messages_recorded(self) -> bool:
        return self.mx is not None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def dim(self) -> int | None:
        return self.schedule.dim

    def x0(self) -> np.ndarray:
        return self.x[0]


def _check_finite(arr, k: int) -> None:
    if not np.all(np.isfinite(arr)):
        raise FloatingPointError(f"non-finite state at round {k}")


def _mass_tol(x0: np.ndarray) -> float:
    return 1e-9 * (1.0 + float(np.abs(x0).sum()))


def run_push_sum(
    g: Digraph, x0, schedule: WeightSchedule, rounds: int
) -> RunRecord:
    """Conventional protocol: one column-stochastic weight family drives both
    states; requires an unperturbed schedule."""
    if not schedule.is_conventional():
        raise NotColumnStochasticError(
            "conventional run needs a schedule without perturbed rounds"
        )
    if rounds > schedule.rounds:
        raise ScheduleTooShortError(
            f"schedule covers {schedule.rounds} rounds, need {rounds}"
        )
    for k in range(rounds):
        if not validate_column_stochastic(schedule.c2(k), 1e-9):
            raise NotColumnStochasticError(f"round {k} weights not column-stochastic")
    x0 = np.asarray(x0, dtype=float).reshape(g.n)
    return _run_scalar(g, x0, schedule, rounds, mode="conventional")


def run_private_push_sum(
    g: Digraph, x0, schedule: WeightSchedule, rounds: int,
    record_messages: bool = True,
) -> RunRecord:
    """Privacy-preserving protocol, scalar states."""
    _check_private_schedule(schedule, rounds, dim=None)
    x0 = np.asarray(x0, dtype=float).reshape(g.n)
    return _run_scalar(
        g, x0, schedule, rounds, mode="private", record_messages=record_messages
    )


def run_private_push_sum_vector(
    g: Digraph, x0, schedule: WeightSchedule, rounds: int,
    record_messages: bool = True,
) -> RunRecord:
    """Privacy-preserving protocol, d-dimensional states with one independent
    x-side weight and sigma per coordinate during the perturbed rounds."""
    if schedule.dim is None:
        raise ScheduleMismatchError("vector run needs a vector schedule")
    _check_private_schedule(schedule, rounds, dim=schedule.dim)
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (g.n, schedule.dim):
        raise DimensionMismatchError(
            f"x0 has shape {x0.shape}, expected ({g.n}, {schedule.dim})"
        )
    return _run_vector(g, x0, schedule, rounds, record_messages=record_messages)


def _check_private_schedule(schedule: WeightSchedule, rounds: int, dim) -> None:
    if schedule.is_conventional() or schedule.sigma is None:
        raise ScheduleMismatchError("schedule has no perturbation phase or sigma")
    if dim is None and schedule.dim is not None:
        raise ScheduleMismatchError("scalar run got a vector schedule")
    if len(schedule.sigma) != schedule.K + 1:
        raise ScheduleMismatchError(
            f"sigma covers {len(schedule.sigma)} rounds, expected {schedule.K + 1}"
        )
    if rounds <= schedule.K + 1:
        raise EngineError(f"rounds={rounds} must exceed K+1={schedule.K + 1}")
    if rounds > schedule.rounds:
        raise ScheduleTooShortError(
            f"schedule covers {schedule.rounds} rounds, need {rounds}"
        )


def _run_scalar(
    g: Digraph, x0, schedule, rounds, mode, record_messages: bool = True
) -> RunRecord:
    n, m = g.n, g.m
    frm, to = g.from_idx, g.to_idx
    x = np.empty((rounds + 1, n))
    y = np.empty((rounds + 1, n))
    z = np.empty((rounds + 1, n))
    x[0] = x0
    y[0] = 1.0
    z[0] = x[0] / y[0]
    mx = np.empty((rounds, m)) if record_messages else None
    my = np.empty((rounds, m)) if record_messages else None

    for k in range(rounds):
        c1e, c1s = schedule.c1_edge_values(k), schedule.c1_self_values(k)
        c2e, c2s = schedule.c2_edges[k], schedule.c2_self[k]
        msg_x = c1e * x[k, frm]
        msg_y = c2e * y[k, frm]
        if record_messages:
            mx[k] = msg_x
            my[k] = msg_y
        inflow_x = np.bincount(to, weights=msg_x, minlength=n)
        if k <= schedule.K:
            outflow_x = np.bincount(frm, weights=msg_x, minlength=n)
            net = inflow_x - outflow_x
            if abs(net.sum()) > _mass_tol(x[k]):
                raise EngineError(f"net perturbation flow not zero-sum at round {k}")
            x[k + 1] = x[k] + schedule.sigma[k] * net
        else:
            x[k + 1] = inflow_x + c1s * x[k]
        y[k + 1] = np.bincount(to, weights=msg_y, minlength=n) + c2s * y[k]
        z[k + 1] = x[k + 1] / y[k + 1]
        _check_finite(x[k + 1], k + 1)
        _check_finite(y[k + 1], k + 1)

    return RunRecord(
        graph=g, schedule=schedule, rounds=rounds, mode=mode,
        x=x, y=y, z=z, mx=mx, my=my,
    )


def _run_vector(g: Digraph, x0, schedule, rounds, record_messages=True) -> RunRecord:
    n, m, d = g.n, g.m, schedule.dim
    frm, to = g.from_idx, g.to_idx
    x = np.empty((rounds + 1, n, d))
    y = np.empty((rounds + 1, n))
    z = np.empty((rounds + 1, n, d))
    x[0] = x0
    y[0] = 1.0
    z[0] = x[0]
    mx = np.empty((rounds, m, d)) if record_messages else None
    my = np.empty((rounds, m)) if record_messages else None

    for k in range(rounds):
        c1e = schedule.c1_edge_values(k)  # (m, d) pre-K, (m,) after
        if c1e.ndim == 1:
            c1e = c1e[:, None]
        c1s = schedule.c1_self_values(k)
        if c1s.ndim == 1:
            c1s = c1s[:, None]
        msg_x = c1e * x[k, frm]  # (m, d)
        msg_y = schedule.c2_edges[k] * y[k, frm]
        if record_messages:
            mx[k] = msg_x
            my[k] = msg_y
        inflow_x = np.zeros((n, d))
        np.add.at(inflow_x, to, msg_x)
        if k <= schedule.K:
            outflow_x = np.zeros((n, d))
            np.add.at(outflow_x, frm, msg_x)
            net = inflow_x - outflow_x
            if np.abs(net.sum(axis=0)).max() > _mass_tol(x[k]):
                raise EngineError(f"net perturbation flow not zero-sum at round {k}")
            x[k + 1] = x[k] + schedule.sigma[k][None, :] * net
        else:
            x[k + 1] = inflow_x + c1s * x[k]
        y[k + 1] = np.bincount(to, weights=msg_y, minlength=n) + schedule.c2_self[k] * y[k]
        z[k + 1] = x[k + 1] / y[k + 1][:, None]
        _check_finite(x[k + 1], k + 1)
        _check_finite(y[k + 1], k + 1)

    return RunRecord(
        graph=g, schedule=schedule, rounds=rounds, mode="private-vector",
        x=x, y=y, z=z, mx=mx, my=my,
    )


def check_run_invariants(run: RunRecord) -> None:
    """Raise if a recorded run violates the conservation laws.

    Checks, for every round: x-mass within 1e-9 * (1 + ||x(0)||_1) of its
    initial value (per coordinate in the vector case), y-mass within
    1e-9 * n of n, and y bounded below by eta^n (up to 1e-12 slack) from
    round 1 on.
    """
    n = run.n
    x_flat = run.x.reshape(run.rounds + 1, n, -1)
    x_mass = x_flat.sum(axis=1)
    tol = _mass_tol(run.x[0])
    drift = np.abs(x_mass - x_mass[0]).max()
    if drift > tol:
        raise EngineError(f"x-mass drift {drift:.3e} exceeds {tol:.3e}")
    y_drift = np.abs(run.y.sum(axis=1) - n).max()
    if y_drift > 1e-9 * n:
        raise EngineError(f"y-mass drift {y_drift:.3e} exceeds {1e-9 * n:.3e}")
    floor = run.schedule.eta**n * (1.0 - 1e-12)
    y_min = run.y[1:].min()
    if y_min < floor:
        raise EngineError(f"y floor violated: {y_min:.3e} < {floor:.3e}")


def stopping_check(z_k: np.ndarray, target, eps: float) -> bool:
    """True iff every agent's estimate is within ``eps`` of ``target``
    (per-agent l2 norm over coordinates in the vector case)."""
    if eps <= 0:
        raise EngineError(f"eps must be positive, got {eps}")
    z_k = np.asarray(z_k, dtype=float)
    target = np.asarray(target, dtype=float)
    dev = z_k - target
    if dev.ndim == 1:
        per_agent = np.abs(dev)
    else:
        per_agent = np.linalg.norm(dev, axis=1)
    return bool(per_agent.max() < eps)


def first_round_within(run: RunRecord, target, eps: float) -> int | None:
    """First recorded round whose estimates all sit within ``eps`` of
    ``target``, or None."""
    for k in range(run.rounds + 1):
        if stopping_check(run.z[k], target, eps):
            return k
    return None


def write_trajectory_csv(run: RunRecord, path) -> None:
    """``round,agent,coord,x,y,z`` rows for every recorded state."""
    d = run.dim or 1
    x = run.x if run.dim else run.x[:, :, None]
    z = run.z if run.dim else run.z[:, :, None]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round", "agent", "coord", "x", "y", "z"])
        for k in range(run.rounds + 1):
            for i in range(run.n):
                for l in range(d):
                    w.writerow(
                        [k, i + 1, l, repr(float(x[k, i, l])),
                         repr(float(run.y[k, i])), repr(float(z[k, i, l]))]
                    )


def write_transcript_json(run: RunRecord, path) -> None:
    """Per-round edge messages: ``{round, edges: [{from, to, mx, my}]}``."""
    if not run.messages_recorded:
        raise EngineError("run executed without message recording")
    doc = []
    for k in range(run.rounds):
        entries = []
        for e, (frm, to) in enumerate(run.graph.edges):
            mx_e = run.mx[k, e]
            mx_list = [float(mx_e)] if np.ndim(mx_e) == 0 else [float(v) for v in mx_e]
            entries.append(
                {"from": frm, "to": to, "mx": mx_list, "my": float(run.my[k, e])}
            )
        doc.append({"round": k, "edges": entries})
    Path(path).write_text(json.dumps(doc))
