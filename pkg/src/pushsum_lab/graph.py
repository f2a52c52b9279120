"""Directed communication topologies.

Agents are numbered 1..n.  An edge ``(i, j)`` means agent ``i`` sends to
agent ``j``; ``j`` is then an out-neighbor of ``i`` and ``i`` an in-neighbor
of ``j``.  Edges are kept sorted lexicographically after construction, and
that order fixes the edge indices used by message transcripts, weight
schedules, and the incidence matrix.

Graph files are plain text: first line ``n m``, then ``m`` lines ``from to``
(1-based).  Generator specs have the form ``ring+k:<n>:<extra>:<seed>``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class GraphError(ValueError):
    """Base class for topology construction errors."""


class TooFewAgentsError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class EndpointOutOfRangeError(GraphError):
    pass


class InfeasibleDegreeError(GraphError):
    pass


@dataclass(frozen=True)
class Digraph:
    """Validated directed graph with derived neighbor lists.

    Immutable after construction; build instances via :func:`build_digraph`
    or the generators below.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    in_neighbors: tuple[tuple[int, ...], ...]
    out_neighbors: tuple[tuple[int, ...], ...]
    # 0-based endpoint arrays aligned with the canonical edge order.
    from_idx: np.ndarray = field(repr=False, compare=False)
    to_idx: np.ndarray = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_degree(self, i: int) -> int:
        """Out-degree of agent ``i`` (1-based)."""
        return len(self.out_neighbors[i - 1])

    def edge_index(self, frm: int, to: int) -> int:
        """Position of edge ``(frm, to)`` in the canonical order."""
        try:
            return self.edges.index((frm, to))
        except ValueError:
            raise GraphError(f"no edge ({frm}, {to})") from None


def build_digraph(n: int, edges) -> Digraph:
    """Validate ``(n, edges)`` and return a :class:`Digraph`.

    Requires n > 2, endpoints in 1..n, no self-loops, no duplicates.
    """
    if n <= 2:
        raise TooFewAgentsError(f"need more than 2 agents, got {n}")
    seen: set[tuple[int, int]] = set()
    for frm, to in edges:
        if not (1 <= frm <= n and 1 <= to <= n):
            raise EndpointOutOfRangeError(f"edge ({frm}, {to}) outside 1..{n}")
        if frm == to:
            raise SelfLoopError(f"self-loop at agent {frm}")
        if (frm, to) in seen:
            raise DuplicateEdgeError(f"duplicate edge ({frm}, {to})")
        seen.add((frm, to))
    ordered = tuple(sorted(seen))
    ins: list[list[int]] = [[] for _ in range(n)]
    outs: list[list[int]] = [[] for _ in range(n)]
    for frm, to in ordered:
        outs[frm - 1].append(to)
        ins[to - 1].append(frm)
    return Digraph(
        n=n,
        edges=ordered,
        in_neighbors=tuple(tuple(v) for v in ins),
        out_neighbors=tuple(tuple(v) for v in outs),
        from_idx=np.array([f - 1 for f, _ in ordered], dtype=np.intp),
        to_idx=np.array([t - 1 for _, t in ordered], dtype=np.intp),
    )


def _reaches_all(n: int, adj: list[list[int]], start: int) -> bool:
    seen = [False] * n
    seen[start] = True
    queue = deque([start])
    count = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == n


def is_strongly_connected(g: Digraph) -> bool:
    """True iff a directed trail exists between every ordered agent pair."""
    fwd: list[list[int]] = [[] for _ in range(g.n)]
    rev: list[list[int]] = [[] for _ in range(g.n)]
    for frm, to in g.edges:
        fwd[frm - 1].append(to - 1)
        rev[to - 1].append(frm - 1)
    return _reaches_all(g.n, fwd, 0) and _reaches_all(g.n, rev, 0)


def incidence_matrix(g: Digraph) -> np.ndarray:
    """n x m signed incidence matrix in canonical edge order.

    Column ``e`` carries +1 at the receiving agent and -1 at the sending
    agent, so every column sums to zero.
    """
    r = np.zeros((g.n, g.m))
    r[g.to_idx, np.arange(g.m)] = 1.0
    r[g.from_idx, np.arange(g.m)] = -1.0
    return r


def generate_ring_plus_random(n: int, extra_out: int, seed) -> Digraph:
    """Directed ring 1->2->...->n->1 plus ``extra_out`` distinct random
    out-edges per agent.  Deterministic for a given seed."""
    if n <= 2:
        raise TooFewAgentsError(f"need more than 2 agents, got {n}")
    if extra_out < 0 or extra_out > n - 2:
        raise InfeasibleDegreeError(
            f"extra_out={extra_out} infeasible for n={n} (0..{n - 2})"
        )
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    for i in range(1, n + 1):
        ring_to = (i % n) + 1
        edges.append((i, ring_to))
        if extra_out:
            candidates = [j for j in range(1, n + 1) if j not in (i, ring_to)]
            picks = rng.choice(len(candidates), size=extra_out, replace=False)
            edges.extend((i, candidates[p]) for p in sorted(picks))
    return build_digraph(n, edges)


def demo_digraph() -> Digraph:
    """The 5-agent strongly connected digraph used by the default scenarios.

    Agent 1 receives from {4, 5} and sends to {2, 4, 5}; agent 2 has no
    other link to the rest of the graph than the chain 2 -> 3 -> 4.
    """
    return build_digraph(
        5,
        [(1, 2), (1, 4), (1, 5), (2, 3), (3, 4), (4, 1), (4, 5), (5, 1)],
    )


def load_graph(path) -> Digraph:
    """Read a graph file (``n m`` header then ``from to`` lines)."""
    lines = [
        ln for ln in Path(path).read_text().splitlines() if ln.strip()
    ]
    if not lines:
        raise GraphError(f"empty graph file: {path}")
    n, m = (int(tok) for tok in lines[0].split())
    if len(lines) - 1 != m:
        raise GraphError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        frm, to = (int(tok) for tok in ln.split())
        edges.append((frm, to))
    return build_digraph(n, edges)


def save_graph(g: Digraph, path) -> None:
    """Write ``g`` in the plain-text graph file format."""
    out = [f"{g.n} {g.m}"]
    out.extend(f"{frm} {to}" for frm, to in g.edges)
    Path(path).write_text("\n".join(out) + "\n")


def parse_graph_spec(spec: str) -> Digraph:
    """Resolve a CLI graph spec: a path, ``demo5``, or
    ``ring+k:<n>:<extra>:<seed>``."""
    if spec == "demo5":
        return demo_digraph()
    if spec.startswith("ring+k:"):
        parts = spec.split(":")
        if len(parts) != 4:
            raise GraphError(f"bad generator spec {spec!r}")
        return generate_ring_plus_random(int(parts[1]), int(parts[2]), int(parts[3]))
    return load_graph(spec)
