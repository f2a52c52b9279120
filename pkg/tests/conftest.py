import numpy as np
import pytest

from pushsum_lab import (
    build_digraph,
    build_schedule,
    demo_digraph,
    is_strongly_connected,
    run_private_push_sum,
)


def random_strongly_connected(n, rng, density=0.5):
    """Random strongly connected digraph on n agents (rejection sampling)."""
    while True:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)
                 if i != j]
        keep = rng.random(len(pairs)) < density
        edges = [p for p, k in zip(pairs, keep) if k]
        if not edges:
            continue
        g = build_digraph(n, edges)
        if is_strongly_connected(g):
            return g


@pytest.fixture(scope="session")
def demo5():
    return demo_digraph()


@pytest.fixture(scope="session")
def demo_x0():
    return np.array([10.0, 15.0, 20.0, 25.0, 30.0])


@pytest.fixture(scope="session")
def demo_run(demo5, demo_x0):
    """One seeded privacy-preserving run on the demo graph, defaults."""
    sched = build_schedule(
        demo5, K=2, eta=0.01, rounds=120, rng=np.random.default_rng(2024)
    )
    return run_private_push_sum(demo5, demo_x0, sched, rounds=120)
