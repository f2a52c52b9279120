"""Adversary information sets, inference attacks, and deniability witnesses.

Two threat models are wired to the run transcript:

* a coalition of protocol-compliant agents that pools its own states, its own
  generated weights, every message it sent or received, and the public
  perturbation factors sigma(k);
* an external eavesdropper that captures every on-wire message pair but no
  agent-internal weight and no sigma.

The attacks assemble the linear equations each adversary can actually write
down and solve them by minimum-norm least squares.  The exact-recovery
routines cover the two situations where privacy provably collapses: a target
whose whole neighborhood is compromised, and runs executed with all
perturbation factors equal to one.  The deniability constructors produce an
alternate initial state plus modified round-0 weights whose replay is
indistinguishable from the original run in the respective adversary's view.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Digraph, incidence_matrix
from .weights import DEFAULT_C1_RANGE, WeightSchedule
from .engine import RunRecord
from .numerics import min_norm_least_squares


class AdversaryError(ValueError):
    """Base class for attack/witness construction errors."""


class EmptyCoalitionError(AdversaryError):
    pass


class FullCoalitionError(AdversaryError):
    pass


class TargetCompromisedError(AdversaryError):
    pass


class NeighborhoodNotCoveredError(AdversaryError):
    pass


class SigmaNotUnityError(AdversaryError):
    pass


class NoLegitimateNeighborError(AdversaryError):
    pass


class DegenerateDeltaError(AdversaryError):
    pass


class ZeroDivisorInitialError(AdversaryError):
    pass


class ZeroInitialValueError(AdversaryError):
    pass


class DegenerateDeltaSigmaError(AdversaryError):
    pass


# ---------------------------------------------------------------------------
# Views


@dataclass(frozen=True)
class HbcView:
    """Everything a compromised coalition observes across a run.

    Arrays are aligned with ``edges_sent`` (edges leaving coalition members)
    and ``edges_recv`` (edges entering them); ``w1_*``/``w2_*`` are the
    weights the members generated themselves.  States and weights of agents
    outside the coalition never appear here; messages on edges between two
    outside agents do not either.
    """

    graph: Digraph
    compromised: tuple[int, ...]
    n_rounds: int
    K: int
    sigma: np.ndarray
    x_own: np.ndarray
    y_own: np.ndarray
    edges_sent: tuple[int, ...]
    sent_mx: np.ndarray
    sent_my: np.ndarray
    edges_recv: tuple[int, ...]
    recv_mx: np.ndarray
    recv_my: np.ndarray
    w1_sent: np.ndarray
    w2_sent: np.ndarray
    w1_self: np.ndarray
    w2_self: np.ndarray
    sent_pos: dict = field(repr=False)
    recv_pos: dict = field(repr=False)

    @property
    def y0(self) -> np.ndarray:
        """Initial y-state, public for every agent."""
        return np.ones(self.graph.n)


@dataclass(frozen=True)
class EveView:
    """Every transmitted message pair, and nothing else.

    No agent-internal state, no individual weight, and no sigma value is
    present; the all-ones initial y-state is public knowledge.
    """

    graph: Digraph
    n_rounds: int
    mx: np.ndarray
    my: np.ndarray

    @property
    def y0(self) -> np.ndarray:
        return np.ones(self.graph.n)


def _require_transcript(run: RunRecord) -> None:
    if not run.messages_recorded:
        raise AdversaryError("run was executed without a message transcript")


def _stack_c1_edges(run: RunRecord, idx: np.ndarray) -> np.ndarray:
    rows = []
    for k in range(run.rounds):
        vals = run.schedule.c1_edge_values(k)
        if run.dim is not None and vals.ndim == 1:
            vals = np.repeat(vals[:, None], run.dim, axis=1)
        rows.append(vals[idx])
    return np.stack(rows)


def _stack_c1_self(run: RunRecord, agents0: np.ndarray) -> np.ndarray:
    rows = []
    for k in range(run.rounds):
        vals = run.schedule.c1_self_values(k)
        if run.dim is not None and vals.ndim == 1:
            vals = np.repeat(vals[:, None], run.dim, axis=1)
        rows.append(vals[agents0])
    return np.stack(rows)


def build_hbc_view(run: RunRecord, compromised) -> HbcView:
    """Project the run onto the information set of coalition ``compromised``."""
    _require_transcript(run)
    g = run.graph
    members = tuple(sorted(set(int(j) for j in compromised)))
    if not members:
        raise EmptyCoalitionError("coalition is empty")
    if len(members) >= g.n:
        raise FullCoalitionError("coalition covers every agent")
    if any(not 1 <= j <= g.n for j in members):
        raise AdversaryError(f"coalition members outside 1..{g.n}")
    member_set = set(members)
    agents0 = np.array([j - 1 for j in members], dtype=np.intp)

    sent_idx = np.array(
        [e for e, (frm, _) in enumerate(g.edges) if frm in member_set],
        dtype=np.intp,
    )
    recv_idx = np.array(
        [e for e, (_, to) in enumerate(g.edges) if to in member_set],
        dtype=np.intp,
    )
    sched = run.schedule
    w2_sent = sched.c2_edges[: run.rounds, sent_idx]
    w2_self = sched.c2_self[: run.rounds, agents0]
    return HbcView(
        graph=g,
        compromised=members,
        n_rounds=run.rounds,
        K=sched.K,
        sigma=sched.sigma.copy(),
        x_own=run.x[:, agents0].copy(),
        y_own=run.y[:, agents0].copy(),
        edges_sent=tuple(int(e) for e in sent_idx),
        sent_mx=run.mx[:, sent_idx].copy(),
        sent_my=run.my[:, sent_idx].copy(),
        edges_recv=tuple(int(e) for e in recv_idx),
        recv_mx=run.mx[:, recv_idx].copy(),
        recv_my=run.my[:, recv_idx].copy(),
        w1_sent=_stack_c1_edges(run, sent_idx),
        w2_sent=w2_sent.copy(),
        w1_self=_stack_c1_self(run, agents0),
        w2_self=w2_self.copy(),
        sent_pos={int(e): i for i, e in enumerate(sent_idx)},
        recv_pos={int(e): i for i, e in enumerate(recv_idx)},
    )


def build_eve_view(run: RunRecord) -> EveView:
    """Project the run onto the wiretapper's information set."""
    _require_transcript(run)
    return EveView(
        graph=run.graph,
        n_rounds=run.rounds,
        mx=run.mx.copy(),
        my=run.my.copy(),
    )


# ---------------------------------------------------------------------------
# Attack reports


@dataclass(frozen=True)
class AttackReport:
    """Outcome of one inference attempt."""

    target: int
    truth: object
    estimate: object
    equations: int
    unknowns: int
    residual: float
    rank: int
    method: str

    @property
    def underdetermined(self) -> bool:
        return self.rank < self.unknowns

    @property
    def relative_error(self) -> float:
        if self.truth is None:
            raise AdversaryError("no ground truth attached to this report")
        t = np.asarray(self.truth, dtype=float)
        e = np.asarray(self.estimate, dtype=float)
        return float(np.linalg.norm(e - t) / (1.0 + np.linalg.norm(t)))


# ---------------------------------------------------------------------------
# Honest-but-curious least-squares attack


def _hbc_target_edges(view: HbcView, target: int):
    g = view.graph
    if target in view.compromised:
        raise TargetCompromisedError(f"agent {target} is part of the coalition")
    in_t = g.in_neighbors[target - 1]
    out_t = g.out_neighbors[target - 1]
    member_set = set(view.compromised)
    legit_in = [m for m in in_t if m not in member_set]
    legit_out = [m for m in out_t if m not in member_set]
    covered_out = [m for m in out_t if m in member_set]
    return in_t, legit_in, legit_out, covered_out


def _hbc_net_flow(view: HbcView, target: int, in_t, covered_out, component) -> np.ndarray:
    """Net observed flow into the target: coalition-sent messages toward it
    minus its messages received by the coalition."""
    g = view.graph
    src = view.sent_mx if component == "x" else view.sent_my
    dst = view.recv_mx if component == "x" else view.recv_my
    flow = np.zeros(src.shape[:1] + src.shape[2:])
    for m in in_t:
        flow = flow + src[:, view.sent_pos[g.edge_index(m, target)]]
    for h in covered_out:
        flow = flow - dst[:, view.recv_pos[g.edge_index(target, h)]]
    return flow


def hbc_attack(
    view: HbcView, target: int, M: int, truth=None
) -> AttackReport:
    """Least-squares inference of the target's initial value by the coalition.

    Requires every in-neighbor of the target compromised and exactly one
    uncompromised out-neighbor; the messages on that one edge stay hidden and
    enter the system as per-round product unknowns.  Unknown layout:
    x(0..M+1), hidden x-products(0..M), y(1..M+1), hidden y-products(0..M).
    """
    g = view.graph
    in_t, legit_in, legit_out, covered_out = _hbc_target_edges(view, target)
    if legit_in:
        raise AdversaryError(
            f"in-neighbors {legit_in} of agent {target} are not compromised"
        )
    if len(legit_out) != 1:
        raise AdversaryError(
            f"attack needs exactly one uncompromised out-neighbor, "
            f"found {legit_out}"
        )
    if not covered_out:
        raise AdversaryError("no compromised out-neighbor to read ratios from")
    K = view.K
    if M < K + 1:
        raise AdversaryError(f"M={M} must be at least K+1={K + 1}")
    if view.n_rounds < M + 1:
        raise AdversaryError(
            f"view covers {view.n_rounds} rounds, attack horizon needs {M + 1}"
        )

    if view.sent_mx.ndim == 3:
        d = view.sent_mx.shape[2]
        estimates, residuals, ranks = [], [], []
        for l in range(d):
            est, res, rank, eqs, unk = _hbc_solve_coord(view, target, M, coord=l)
            estimates.append(est)
            residuals.append(res)
            ranks.append(rank)
        return AttackReport(
            target=target, truth=truth, estimate=np.array(estimates),
            equations=eqs, unknowns=unk,
            residual=float(np.linalg.norm(residuals)), rank=min(ranks),
            method="hbc-least-squares",
        )
    est, res, rank, eqs, unk = _hbc_solve_coord(view, target, M, coord=None)
    return AttackReport(
        target=target, truth=truth, estimate=est, equations=eqs, unknowns=unk,
        residual=res, rank=rank, method="hbc-least-squares",
    )


def _hbc_solve_coord(view: HbcView, target: int, M: int, coord):
    g = view.graph
    in_t, _, _, covered_out = _hbc_target_edges(view, target)
    K = view.K
    sigma = view.sigma if coord is None else view.sigma[:, coord]

    def pick(arr):
        return arr if coord is None else arr[..., coord]

    dx = _hbc_net_flow(view, target, in_t, covered_out, "x")
    if coord is not None:
        dx = dx[:, coord]
    dy = _hbc_net_flow(view, target, in_t, covered_out, "y")
    h0 = covered_out[0]
    ratio_pos = view.recv_pos[g.edge_index(target, h0)]
    zbar = pick(view.recv_mx[:, ratio_pos]) / view.recv_my[:, ratio_pos]

    n_eq = 3 * M - K + 2
    n_unk = 4 * M + 5
    ox, op, oy, oq = 0, M + 2, 2 * M + 3, 3 * M + 4
    a = np.zeros((n_eq, n_unk))
    b = np.zeros(n_eq)
    row = 0
    for k in range(K + 1):  # perturbed x-updates
        a[row, ox + k + 1] = 1.0
        a[row, ox + k] = -1.0
        a[row, op + k] = sigma[k]
        b[row] = sigma[k] * dx[k]
        row += 1
    for k in range(K + 1, M + 1):  # mixing x-updates, self-weight eliminated
        a[row, ox + k + 1] = 1.0
        a[row, ox + k] = -1.0
        a[row, op + k] = 1.0
        b[row] = dx[k]
        row += 1
    for k in range(M + 1):  # y-updates; y(0) = 1 is public
        a[row, oq + k] = 1.0
        if k == 0:
            a[row, oy + 0] = 1.0
            b[row] = dy[0] + 1.0
        else:
            a[row, oy + k] = 1.0
            a[row, oy + k - 1] = -1.0
            b[row] = dy[k]
        row += 1
    for k in range(K + 1, M + 1):  # ratio ties, valid once both families match
        a[row, ox + k] = 1.0
        a[row, oy + k - 1] = -zbar[k]
        row += 1
    assert row == n_eq
    sol, residual, rank = min_norm_least_squares(a, b)
    return float(sol[0]), float(residual), int(rank), n_eq, n_unk


# ---------------------------------------------------------------------------
# Eavesdropper attack and exact recoveries


def _eve_edge_sets(view: EveView, target: int):
    g = view.graph
    into = np.flatnonzero(g.to_idx == target - 1)
    outof = np.flatnonzero(g.from_idx == target - 1)
    if len(outof) == 0:
        raise AdversaryError(f"agent {target} has no out-edges to observe")
    return into, outof


def eve_recover_y(view: EveView, target: int) -> np.ndarray:
    """The target's full y-trajectory, reconstructed by accumulating net
    observed y-flow on top of the public initial value."""
    into, outof = _eve_edge_sets(view, target)
    net = view.my[:, into].sum(axis=1) - view.my[:, outof].sum(axis=1)
    y = np.empty(view.n_rounds + 1)
    y[0] = 1.0
    y[1:] = 1.0 + np.cumsum(net)
    return y


def eve_recover_x_tail(view: EveView, target: int, K: int):
    """The target's x-states for rounds K+1..M, via the message ratio on any
    of its out-edges (both weight families coincide there)."""
    into, outof = _eve_edge_sets(view, target)
    y = eve_recover_y(view, target)
    e0 = outof[0]
    ks = np.arange(K + 1, view.n_rounds)
    ratio = view.mx[ks, e0] / (
        view.my[ks, e0] if view.mx.ndim == 2 else view.my[ks, e0][:, None]
    )
    x_tail = ratio * (y[ks] if view.mx.ndim == 2 else y[ks][:, None])
    return ks, x_tail


def _eve_net_x_flow(view: EveView, target: int) -> np.ndarray:
    into, outof = _eve_edge_sets(view, target)
    return view.mx[:, into].sum(axis=1) - view.mx[:, outof].sum(axis=1)


def eve_attack(
    view: EveView, target: int, M: int, K: int, truth=None
) -> AttackReport:
    """Least-squares inference of the target's initial value by the
    eavesdropper.

    The y-trajectory and the post-perturbation x-states are recovered exactly
    from the wire; what remains is one telescoped equation linking x(0) and
    the K+1 hidden sigma factors through the observed net flows.
    """
    if M < K + 1:
        raise AdversaryError(f"M={M} must be at least K+1={K + 1}")
    if view.n_rounds < M + 1:
        raise AdversaryError(
            f"view covers {view.n_rounds} rounds, attack horizon needs {M + 1}"
        )
    net = _eve_net_x_flow(view, target)
    ks, x_tail = eve_recover_x_tail(view, target, K)
    anchor = x_tail[0]  # x_target(K+1)

    n_unk = K + 2  # x(0) and sigma(0..K)
    if np.ndim(anchor) == 0:
        a = np.zeros((1, n_unk))
        a[0, 0] = 1.0
        a[0, 1:] = net[: K + 1]
        sol, residual, rank = min_norm_least_squares(a, [anchor])
        estimate = float(sol[0])
    else:
        d = anchor.shape[0]
        est, res = [], []
        rank = 0
        for l in range(d):
            a = np.zeros((1, n_unk))
            a[0, 0] = 1.0
            a[0, 1:] = net[: K + 1, l]
            sol, r, rank = min_norm_least_squares(a, [anchor[l]])
            est.append(float(sol[0]))
            res.append(r)
        estimate = np.array(est)
        residual = float(np.linalg.norm(res))
    return AttackReport(
        target=target, truth=truth, estimate=estimate,
        equations=1, unknowns=n_unk, residual=float(residual), rank=int(rank),
        method="eve-least-squares",
    )


def full_neighborhood_reconstruction(view: HbcView, target: int) -> float:
    """Exact recovery of the target's initial value when its entire
    neighborhood is compromised.

    The coalition rebuilds the target's y-trajectory from net y-flows,
    anchors one x-state through the message ratio on a compromised out-edge,
    and unwinds the sigma-weighted net x-flows back to round 0.
    """
    g = view.graph
    in_t, legit_in, legit_out, covered_out = _hbc_target_edges(view, target)
    if legit_in or legit_out:
        raise NeighborhoodNotCoveredError(
            f"agent {target} keeps uncompromised neighbors "
            f"{sorted(set(legit_in) | set(legit_out))}"
        )
    K = view.K
    if view.n_rounds < K + 2:
        raise AdversaryError("view too short to anchor past the perturbed rounds")
    dx = _hbc_net_flow(view, target, in_t, covered_out, "x")
    dy = _hbc_net_flow(view, target, in_t, covered_out, "y")
    y_t = 1.0 + np.cumsum(dy)  # y_t[k-1] = y(k)
    h0 = covered_out[0]
    pos = view.recv_pos[g.edge_index(target, h0)]
    anchor_k = K + 1
    z_anchor = view.recv_mx[anchor_k, pos] / view.recv_my[anchor_k, pos]
    x_anchor = z_anchor * y_t[anchor_k - 1]
    return float(x_anchor - np.sum(view.sigma * dx[: K + 1]))


def eve_reconstruction_sigma1(
    view: EveView, target: int, sigma=None
) -> float:
    """Exact eavesdropper recovery for runs whose perturbation factors are
    all one: the x-update telescopes to plain accumulated net flows.

    ``sigma`` is a harness-side guard: the wire carries no sigma values, so
    callers that know the run used non-unit factors pass them here to mark
    the reconstruction inapplicable.
    """
    if sigma is not None and not np.allclose(np.asarray(sigma, dtype=float), 1.0):
        raise SigmaNotUnityError("run used non-unit perturbation factors")
    _, outof = _eve_edge_sets(view, target)
    net = _eve_net_x_flow(view, target)
    y = eve_recover_y(view, target)
    k_anchor = view.n_rounds - 1
    e0 = outof[0]
    z_anchor = view.mx[k_anchor, e0] / view.my[k_anchor, e0]
    x_anchor = z_anchor * y[k_anchor]
    return float(x_anchor - np.sum(net[:k_anchor]))


# ---------------------------------------------------------------------------
# Deniability witnesses


@dataclass(frozen=True)
class DeniabilityWitness:
    """Alternate initial state and schedule that replay to the same view."""

    x0_alt: np.ndarray
    schedule_alt: WeightSchedule
    sigma0_alt: float | None
    case: str


def _require_scalar_run(run: RunRecord) -> None:
    if run.dim is not None:
        raise AdversaryError("deniability constructions operate on scalar runs")


def construct_deniable_run_hbc(
    run: RunRecord, target: int, legit: int, delta: float,
    rng: np.random.Generator | None = None,
) -> DeniabilityWitness:
    """Witness against the coalition: move ``delta`` of initial value from
    the uncompromised neighbor ``legit`` to ``target`` and rescale the two
    agents' round-0 outgoing weights so every message the coalition can see,
    and every state from round 1 on, is unchanged.

    The hidden message on the target--legit edge absorbs the shift; its
    weight picks up the delta/sigma(0) correction.  Both self-loop weights are
    redrawn freely: they cancel out of the update rule and no view depends on
    them.
    """
    _require_scalar_run(run)
    g = run.graph
    sched = run.schedule
    if sched.is_conventional():
        raise AdversaryError("witness needs a perturbed-schedule run")
    sigma0 = float(sched.sigma[0])
    if sigma0 == 0.0:
        raise AdversaryError("round-0 perturbation factor is zero")
    t0, l0 = target - 1, legit - 1
    in_t = set(g.in_neighbors[t0])
    out_t = set(g.out_neighbors[t0])
    if legit not in (in_t | out_t):
        raise NoLegitimateNeighborError(
            f"agent {legit} is not a neighbor of agent {target}"
        )
    x0 = run.x[0]
    xt, xl = float(x0[t0]), float(x0[l0])
    if delta == 0.0:
        raise DegenerateDeltaError("delta must be nonzero")
    if delta == -xt or delta == xl:
        raise ZeroDivisorInitialError(
            "delta makes an alternate initial value zero"
        )
    xt_new, xl_new = xt + delta, xl - delta
    if xt_new == 0.0 or xl_new == 0.0:
        raise ZeroDivisorInitialError("alternate initial value underflows to zero")

    rng = np.random.default_rng(0) if rng is None else rng
    c1e = sched.c1p_edges[0].copy()
    c1s = sched.c1p_self[0].copy()
    frm, to = g.from_idx, g.to_idx
    case = "out" if legit in out_t else "in"
    for e in range(g.m):
        if frm[e] == t0:
            if case == "out" and to[e] == l0:
                c1e[e] = (sigma0 * sched.c1p_edges[0][e] * xt + delta) / (
                    sigma0 * xt_new
                )
            else:
                c1e[e] = sched.c1p_edges[0][e] * xt / xt_new
        elif frm[e] == l0:
            if case == "in" and to[e] == t0:
                c1e[e] = (sigma0 * sched.c1p_edges[0][e] * xl - delta) / (
                    sigma0 * xl_new
                )
            else:
                c1e[e] = sched.c1p_edges[0][e] * xl / xl_new
    lo, hi = DEFAULT_C1_RANGE
    c1s[t0] = rng.uniform(lo, hi)
    c1s[l0] = rng.uniform(lo, hi)

    x0_alt = x0.copy()
    x0_alt[t0] = xt_new
    x0_alt[l0] = xl_new
    return DeniabilityWitness(
        x0_alt=x0_alt,
        schedule_alt=sched.with_round0(c1_edges0=c1e, c1_self0=c1s),
        sigma0_alt=None,
        case=f"hbc-{case}-neighbor",
    )


def construct_deniable_run_eve(
    run: RunRecord, delta_sigma: float,
    rng: np.random.Generator | None = None,
) -> DeniabilityWitness:
    """Witness against the eavesdropper: shift the whole initial state by
    ``delta_sigma`` times the incidence-weighted round-0 message stack,
    rescale every round-0 off-diagonal weight to keep the wire identical,
    and absorb the shift into the hidden round-0 perturbation factor.

    Keeping round 1 states equal forces the replacement factor
    sigma(0) - delta_sigma (the messages themselves are unchanged, so the
    shifted start must be exactly undone by the smaller factor).
    """
    _require_scalar_run(run)
    _require_transcript(run)
    g = run.graph
    sched = run.schedule
    if sched.is_conventional():
        raise AdversaryError("witness needs a perturbed-schedule run")
    sigma0 = float(sched.sigma[0])
    if sigma0 == 0.0:
        raise AdversaryError("round-0 perturbation factor is zero")
    if delta_sigma == 0.0:
        raise DegenerateDeltaSigmaError("delta_sigma must be nonzero")
    x0 = run.x[0]
    if np.any(x0 == 0.0):
        raise ZeroInitialValueError("every initial value must be nonzero")
    r = incidence_matrix(g)
    x0_alt = x0 + delta_sigma * (r @ run.mx[0])
    if np.any(x0_alt == 0.0):
        raise ZeroInitialValueError("alternate initial state hits an exact zero")

    frm = g.from_idx
    c1e = sched.c1p_edges[0] * x0[frm] / x0_alt[frm]
    rng = np.random.default_rng(0) if rng is None else rng
    lo, hi = DEFAULT_C1_RANGE
    c1s = rng.uniform(lo, hi, g.n)
    sigma0_alt = sigma0 - delta_sigma
    return DeniabilityWitness(
        x0_alt=x0_alt,
        schedule_alt=sched.with_round0(
            c1_edges0=c1e, c1_self0=c1s, sigma0=sigma0_alt
        ),
        sigma0_alt=sigma0_alt,
        case="eve",
    )


# ---------------------------------------------------------------------------
# View comparison


def _pairwise_deviation(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise AdversaryError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b) / (1.0 + np.abs(a))))


def hbc_view_deviation(a: HbcView, b: HbcView) -> float:
    """Largest per-entry relative deviation across every field the coalition
    observes."""
    if a.compromised != b.compromised or a.graph.edges != b.graph.edges:
        raise AdversaryError("views describe different coalitions or graphs")
    pairs = [
        (a.x_own, b.x_own), (a.y_own, b.y_own),
        (a.sent_mx, b.sent_mx), (a.sent_my, b.sent_my),
        (a.recv_mx, b.recv_mx), (a.recv_my, b.recv_my),
        (a.w1_sent, b.w1_sent), (a.w2_sent, b.w2_sent),
        (a.w1_self, b.w1_self), (a.w2_self, b.w2_self),
        (a.sigma, b.sigma),
    ]
    return max(_pairwise_deviation(u, v) for u, v in pairs)


def eve_view_deviation(a: EveView, b: EveView) -> float:
    """Largest per-entry relative deviation across the wire transcript."""
    if a.graph.edges != b.graph.edges:
        raise AdversaryError("views describe different graphs")
    return max(
        _pairwise_deviation(a.mx, b.mx), _pairwise_deviation(a.my, b.my)
    )


def states_deviation(a: RunRecord, b: RunRecord, from_round: int = 1) -> float:
    """Largest relative state deviation between two runs from a given round."""
    return max(
        _pairwise_deviation(a.x[from_round:], b.x[from_round:]),
        _pairwise_deviation(a.y[from_round:], b.y[from_round:]),
    )
