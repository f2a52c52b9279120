"""Per-round mixing weights and the scalar perturbation sequence.

Two weight families drive a run.  The y-side weights are always
column-stochastic with supported entries in (eta, 1).  The x-side weights
coincide with the y-side from round K+1 on; during rounds 0..K they are free
reals drawn from a configurable range, and the state update is additionally
scaled by a round-indexed factor sigma(k) (a diagonal matrix of per-coordinate
factors in the vector-state case).

A schedule stores only the supported entries, aligned with the graph's
canonical edge order plus one self-loop slot per agent; dense n x n views are
materialized on demand.  Storing the post-K x-side weights is unnecessary
because they are the y-side weights by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .graph import Digraph

DEFAULT_C1_RANGE = (-100.0, 100.0)
DEFAULT_SIGMA_DIST = "normal:0:10"


class WeightError(ValueError):
    """Base class for weight-generation errors."""


class EtaTooLargeError(WeightError):
    pass


class BadRangeError(WeightError):
    pass


def max_eta(g: Digraph) -> float:
    """Largest admissible lower bound: 1 / (max out-degree + 1)."""
    return 1.0 / (max(g.out_degree(i) for i in range(1, g.n + 1)) + 1)


def parse_dist(spec) -> Callable[[np.random.Generator, int], np.ndarray]:
    """Turn ``normal:mean:var`` / ``uniform:lo:hi`` / ``const:v`` into a
    sampler.  Callables pass through unchanged."""
    if callable(spec):
        return spec
    parts = str(spec).split(":")
    kind = parts[0]
    args = [float(p) for p in parts[1:]]
    if kind == "normal" and len(args) == 2:
        mean, var = args
        if var < 0:
            raise WeightError(f"negative variance in {spec!r}")
        return lambda rng, size: rng.normal(mean, np.sqrt(var), size)
    if kind == "uniform" and len(args) == 2:
        lo, hi = args
        if not lo < hi:
            raise BadRangeError(f"empty interval in {spec!r}")
        return lambda rng, size: rng.uniform(lo, hi, size)
    if kind == "const" and len(args) == 1:
        return lambda rng, size: np.full(size, args[0])
    raise WeightError(f"unrecognized distribution spec {spec!r}")


class _Support:
    """Per-graph layout of the supported weight slots.

    Edges with a common sender are contiguous in the canonical order, so each
    column's slots are one self-loop plus one contiguous edge block.
    """

    def __init__(self, g: Digraph):
        self.g = g
        out_deg = np.array([g.out_degree(i) for i in range(1, g.n + 1)])
        self.out_deg = out_deg
        self.col_size = out_deg + 1
        self.edge_start = np.searchsorted(g.from_idx, np.arange(g.n))
        # Columns grouped by slot count, for vectorized simplex sampling.
        self.groups = []
        for d in np.unique(self.col_size):
            cols = np.flatnonzero(self.col_size == d)
            pos = self.edge_start[cols][:, None] + np.arange(d - 1)[None, :]
            self.groups.append((int(d), cols, pos.astype(np.intp)))


def _support(g: Digraph) -> _Support:
    cache = getattr(g, "_weight_support", None)
    if cache is None:
        cache = _Support(g)
        object.__setattr__(g, "_weight_support", cache)
    return cache


def _c2_values_batch(g: Digraph, eta: float, rng: np.random.Generator, rounds: int):
    """``rounds`` rounds of column-stochastic values: per column, eta plus
    (1 - d*eta) times a uniform point of the (d-1)-simplex."""
    if not 0 < eta < max_eta(g):
        raise EtaTooLargeError(
            f"eta={eta} outside (0, {max_eta(g)}) for this graph"
        )
    sup = _support(g)
    edge_vals = np.empty((rounds, g.m))
    self_vals = np.empty((rounds, g.n))
    for d, cols, pos in sup.groups:
        u = np.sort(rng.random((rounds, len(cols), d - 1)), axis=2)
        gaps = np.diff(u, axis=2, prepend=0.0, append=1.0)
        w = eta + (1.0 - d * eta) * gaps
        self_vals[:, cols] = w[:, :, 0]
        if d > 1:
            edge_vals[:, pos.ravel()] = w[:, :, 1:].reshape(rounds, -1)
    return edge_vals, self_vals


def _c2_values(g: Digraph, eta: float, rng: np.random.Generator):
    edge_vals, self_vals = _c2_values_batch(g, eta, rng, 1)
    return edge_vals[0], self_vals[0]


def _dense(g: Digraph, edge_vals, self_vals) -> np.ndarray:
    out = np.zeros((g.n, g.n))
    out[g.to_idx, g.from_idx] = edge_vals
    out[np.arange(g.n), np.arange(g.n)] = self_vals
    return out


def generate_c2_round(g: Digraph, eta: float, rng: np.random.Generator) -> np.ndarray:
    """Dense column-stochastic y-side matrix with supported entries in
    (eta, 1)."""
    return _dense(g, *_c2_values(g, eta, rng))


def generate_c1_perturbation_round(
    g: Digraph, lo: float, hi: float, rng: np.random.Generator
) -> np.ndarray:
    """Dense x-side matrix for a perturbed round: supported entries i.i.d.
    uniform on (lo, hi), no column constraint."""
    if not lo < hi:
        raise BadRangeError(f"empty range ({lo}, {hi})")
    vals = rng.uniform(lo, hi, g.m + g.n)
    return _dense(g, vals[: g.m], vals[g.m :])


def generate_protocol1_round(
    g: Digraph, rng: np.random.Generator, spread: float = 2.0
) -> np.ndarray:
    """Dense x-side matrix for the sum-one baseline mechanism: free entries on
    the out-edges, self-loop balancing each column to exactly 1."""
    edge_vals = rng.uniform(-spread, spread, g.m)
    self_vals = 1.0 - np.bincount(g.from_idx, weights=edge_vals, minlength=g.n)
    return _dense(g, edge_vals, self_vals)


def validate_column_stochastic(mat, tol: float) -> bool:
    """True iff every column sums to 1 within ``tol`` and no entry is
    negative."""
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise WeightError(f"expected a square matrix, got shape {mat.shape}")
    if np.any(mat < 0):
        return False
    return bool(np.all(np.abs(mat.sum(axis=0) - 1.0) <= tol))


@dataclass(frozen=True)
class WeightSchedule:
    """All mixing weights and perturbation factors for one run.

    ``K = -1`` marks a conventional schedule with no perturbed rounds.  For
    ``dim`` set, the perturbed x-side weights and sigma carry one independent
    value per coordinate.
    """

    graph: Digraph
    K: int
    eta: float
    rounds: int
    c2_edges: np.ndarray  # (rounds, m)
    c2_self: np.ndarray  # (rounds, n)
    c1p_edges: np.ndarray  # (K+1, m) or (K+1, m, dim)
    c1p_self: np.ndarray  # (K+1, n) or (K+1, n, dim)
    sigma: np.ndarray | None  # (K+1,) or (K+1, dim)
    dim: int | None = None

    def c1_edge_values(self, k: int) -> np.ndarray:
        return self.c1p_edges[k] if k <= self.K else self.c2_edges[k]

    def c1_self_values(self, k: int) -> np.ndarray:
        return self.c1p_self[k] if k <= self.K else self.c2_self[k]

    def c1(self, k: int, coord: int | None = None) -> np.ndarray:
        """Dense x-side matrix for round ``k`` (one coordinate if vector)."""
        e, s = self.c1_edge_values(k), self.c1_self_values(k)
        if e.ndim == 2:
            if coord is None:
                raise WeightError("vector schedule: pick a coordinate")
            e, s = e[:, coord], s[:, coord]
        return _dense(self.graph, e, s)

    def c2(self, k: int) -> np.ndarray:
        """Dense y-side matrix for round ``k``."""
        return _dense(self.graph, self.c2_edges[k], self.c2_self[k])

    def is_conventional(self) -> bool:
        return self.K < 0

    def with_round0(
        self, c1_edges0=None, c1_self0=None, sigma0=None
    ) -> "WeightSchedule":
        """Copy with round-0 x-side weights and/or sigma(0) replaced."""
        c1e = self.c1p_edges.copy()
        c1s = self.c1p_self.copy()
        sig = None if self.sigma is None else self.sigma.copy()
        if c1_edges0 is not None:
            c1e[0] = c1_edges0
        if c1_self0 is not None:
            c1s[0] = c1_self0
        if sigma0 is not None:
            sig[0] = sigma0
        return replace(self, c1p_edges=c1e, c1p_self=c1s, sigma=sig)

    def to_json_dict(self) -> dict:
        """Round-indexed dense matrices plus sigma, JSON-serializable."""
        doc = {
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edges],
            "K": self.K,
            "eta": self.eta,
            "rounds": self.rounds,
            "dim": self.dim,
            "sigma": None if self.sigma is None else self.sigma.tolist(),
            "c2": [self.c2(k).tolist() for k in range(self.rounds)],
        }
        if self.dim is None:
            doc["c1"] = [self.c1(k).tolist() for k in range(self.rounds)]
        else:
            doc["c1_coords"] = [
                [self.c1(k, coord=l).tolist() for l in range(self.dim)]
                for k in range(min(self.K + 1, self.rounds))
            ]
        return doc


def schedule_from_json_dict(doc: dict) -> WeightSchedule:
    """Inverse of :meth:`WeightSchedule.to_json_dict`."""
    from .graph import build_digraph

    g = build_digraph(doc["n"], [tuple(e) for e in doc["edges"]])
    rounds, k_horizon, dim = doc["rounds"], doc["K"], doc.get("dim")
    c2e = np.empty((rounds, g.m))
    c2s = np.empty((rounds, g.n))
    diag = np.arange(g.n)
    for k in range(rounds):
        mat = np.asarray(doc["c2"][k])
        c2e[k] = mat[g.to_idx, g.from_idx]
        c2s[k] = mat[diag, diag]
    if dim is None:
        c1e = np.empty((k_horizon + 1, g.m))
        c1s = np.empty((k_horizon + 1, g.n))
        for k in range(k_horizon + 1):
            mat = np.asarray(doc["c1"][k])
            c1e[k] = mat[g.to_idx, g.from_idx]
            c1s[k] = mat[diag, diag]
    else:
        c1e = np.empty((k_horizon + 1, g.m, dim))
        c1s = np.empty((k_horizon + 1, g.n, dim))
        for k in range(k_horizon + 1):
            for l in range(dim):
                mat = np.asarray(doc["c1_coords"][k][l])
                c1e[k, :, l] = mat[g.to_idx, g.from_idx]
                c1s[k, :, l] = mat[diag, diag]
    sigma = None if doc["sigma"] is None else np.asarray(doc["sigma"], dtype=float)
    return WeightSchedule(
        graph=g, K=k_horizon, eta=doc["eta"], rounds=rounds,
        c2_edges=c2e, c2_self=c2s, c1p_edges=c1e, c1p_self=c1s,
        sigma=sigma, dim=dim,
    )


def build_schedule(
    g: Digraph,
    K: int,
    eta: float,
    rounds: int,
    sigma_dist=DEFAULT_SIGMA_DIST,
    c1_range: tuple[float, float] = DEFAULT_C1_RANGE,
    rng: np.random.Generator | None = None,
    dim: int | None = None,
) -> WeightSchedule:
    """Assemble a full schedule: column-stochastic y-side weights for every
    round, free x-side weights and sigma for rounds 0..K.

    The three weight families draw from independent child streams of ``rng``,
    so schedules built from the same seed nest across K: a larger horizon
    reuses the shorter one's y-side weights, perturbation rows, and sigma
    prefix, and only appends to them.

    sigma(0) is resampled until nonzero (per coordinate in the vector case):
    the deniability constructions divide by it, and a zero round-0 factor
    would make the initial perturbation vacuous.
    """
    if K < 1:
        raise WeightError(f"perturbation horizon must be >= 1, got {K}")
    if rounds <= K + 1:
        raise WeightError(f"rounds={rounds} must exceed K+1={K + 1}")
    lo, hi = c1_range
    if not lo < hi:
        raise BadRangeError(f"empty x-side weight range ({lo}, {hi})")
    rng = np.random.default_rng() if rng is None else rng
    rng_c2, rng_c1, rng_sigma = rng.spawn(3)
    sampler = parse_dist(sigma_dist)

    c2e, c2s = _c2_values_batch(g, eta, rng_c2, rounds)

    pert_shape = (K + 1, g.m + g.n) if dim is None else (K + 1, g.m + g.n, dim)
    pert = rng_c1.uniform(lo, hi, pert_shape)
    c1e, c1s = pert[:, : g.m], pert[:, g.m :]

    sig_shape = (K + 1,) if dim is None else (K + 1, dim)
    sigma = np.asarray(sampler(rng_sigma, sig_shape), dtype=float).reshape(sig_shape)
    row0 = np.atleast_1d(sigma[0])
    for _ in range(100):
        zero0 = row0 == 0
        if not zero0.any():
            break
        redraw = np.asarray(sampler(rng_sigma, sig_shape), dtype=float).reshape(sig_shape)
        row0[zero0] = np.atleast_1d(redraw[0])[zero0]
        sigma[0] = row0 if dim is not None else row0[0]
    else:
        raise WeightError("sigma distribution keeps producing sigma(0)=0")

    return WeightSchedule(
        graph=g, K=K, eta=eta, rounds=rounds,
        c2_edges=c2e, c2_self=c2s, c1p_edges=c1e, c1p_self=c1s,
        sigma=sigma, dim=dim,
    )


def build_conventional_schedule(
    g: Digraph, eta: float, rounds: int, rng: np.random.Generator | None = None
) -> WeightSchedule:
    """Schedule for the conventional protocol: both weight families equal and
    column-stochastic in every round."""
    if rounds < 1:
        raise WeightError(f"rounds={rounds} must be >= 1")
    rng = np.random.default_rng() if rng is None else rng
    c2e, c2s = _c2_values_batch(g, eta, rng, rounds)
    return WeightSchedule(
        graph=g, K=-1, eta=eta, rounds=rounds,
        c2_edges=c2e, c2_self=c2s,
        c1p_edges=np.empty((0, g.m)), c1p_self=np.empty((0, g.n)),
        sigma=None, dim=None,
    )
