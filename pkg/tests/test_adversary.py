import numpy as np
import pytest

from pushsum_lab.adversary import (
    DegenerateDeltaError,
    DegenerateDeltaSigmaError,
    EmptyCoalitionError,
    FullCoalitionError,
    NeighborhoodNotCoveredError,
    NoLegitimateNeighborError,
    SigmaNotUnityError,
    TargetCompromisedError,
    ZeroDivisorInitialError,
    ZeroInitialValueError,
    AdversaryError,
    build_eve_view,
    build_hbc_view,
    construct_deniable_run_eve,
    construct_deniable_run_hbc,
    eve_attack,
    eve_recover_x_tail,
    eve_recover_y,
    eve_reconstruction_sigma1,
    eve_view_deviation,
    full_neighborhood_reconstruction,
    hbc_attack,
    hbc_view_deviation,
    states_deviation,
)
from pushsum_lab.engine import run_private_push_sum, run_private_push_sum_vector
from pushsum_lab.graph import demo_digraph
from pushsum_lab.weights import build_schedule

MILD = dict(sigma_dist="uniform:0.5:1.5", c1_range=(-2.0, 2.0))


def make_run(seed=1, rounds=40, K=2, x0=(40.0, 3.0, -7.0, 12.0, 5.0), **kw):
    g = demo_digraph()
    sched = build_schedule(g, K=K, eta=0.01, rounds=rounds,
                           rng=np.random.default_rng(seed), **kw)
    return run_private_push_sum(g, np.array(x0, dtype=float), sched, rounds)


@pytest.fixture(scope="module")
def run40():
    return make_run()


@pytest.fixture(scope="module")
def hbc45(run40):
    return build_hbc_view(run40, [4, 5])


@pytest.fixture(scope="module")
def eve(run40):
    return build_eve_view(run40)


class TestViews:
    def test_hbc_contains_sigma(self, hbc45, run40):
        assert np.array_equal(hbc45.sigma, run40.schedule.sigma)
        assert hbc45.K == 2

    def test_eve_has_no_sigma_and_no_weights(self, eve):
        fields = set(vars(eve))
        assert "sigma" not in fields
        assert not any(f.startswith("w1") or f.startswith("w2") for f in fields)

    def test_eve_message_counts(self, eve, run40):
        assert eve.mx.shape == (run40.rounds, run40.graph.m)
        assert eve.my.shape == (run40.rounds, run40.graph.m)

    def test_hbc_only_own_states(self, hbc45):
        assert hbc45.x_own.shape[1] == 2  # coalition members only
        assert hbc45.compromised == (4, 5)

    def test_hbc_edges_are_incident(self, hbc45, run40):
        g = run40.graph
        assert all(g.edges[e][0] in (4, 5) for e in hbc45.edges_sent)
        assert all(g.edges[e][1] in (4, 5) for e in hbc45.edges_recv)
        # the legit edge (1, 2) is invisible to the coalition
        hidden = g.edge_index(1, 2)
        assert hidden not in hbc45.edges_sent
        assert hidden not in hbc45.edges_recv

    def test_hbc_weights_are_own_columns(self, hbc45, run40):
        sched = run40.schedule
        for i, e in enumerate(hbc45.edges_sent):
            for k in range(run40.rounds):
                assert hbc45.w2_sent[k, i] == sched.c2_edges[k, e]

    def test_coalition_guards(self, run40):
        with pytest.raises(EmptyCoalitionError):
            build_hbc_view(run40, [])
        with pytest.raises(FullCoalitionError):
            build_hbc_view(run40, [1, 2, 3, 4, 5])

    def test_requires_transcript(self, demo5, demo_x0):
        sched = build_schedule(demo5, K=2, eta=0.01, rounds=10,
                               rng=np.random.default_rng(0))
        run = run_private_push_sum(demo5, demo_x0, sched, 10,
                                   record_messages=False)
        with pytest.raises(AdversaryError):
            build_eve_view(run)


class TestEveRecovery:
    def test_y_trajectory_exact(self, eve, run40):
        for agent in range(1, 6):
            y = eve_recover_y(eve, agent)
            truth = run40.y[:, agent - 1]
            assert np.max(np.abs(y - truth) / (1 + np.abs(truth))) <= 1e-9

    def test_x_tail_exact(self, eve, run40):
        ks, x_tail = eve_recover_x_tail(eve, 1, K=2)
        assert ks[0] == 3
        truth = run40.x[ks, 0]
        assert np.max(np.abs(x_tail - truth) / (1 + np.abs(truth))) <= 1e-9

    def test_perturbed_states_not_recovered_by_tail(self, eve, run40):
        ks, _ = eve_recover_x_tail(eve, 1, K=2)
        assert 0 not in ks and 1 not in ks and 2 not in ks


class TestHbcAttack:
    def test_counts_match_closed_forms(self, hbc45):
        for horizon in (3, 10, 25):
            rep = hbc_attack(hbc45, 1, horizon)
            assert rep.equations == 3 * horizon - 2 + 2
            assert rep.unknowns == 4 * horizon + 5
            assert rep.equations < rep.unknowns
            assert rep.underdetermined

    def test_underdetermined_for_any_admissible_horizon(self):
        for k_horizon in (1, 2, 5):
            run = make_run(seed=7, rounds=30, K=k_horizon)
            view = build_hbc_view(run, [4, 5])
            for horizon in range(k_horizon + 1, 12):
                rep = hbc_attack(view, 1, horizon)
                assert rep.equations == 3 * horizon - k_horizon + 2
                assert rep.equations < rep.unknowns
                assert rep.rank < rep.unknowns

    def test_residual_is_small(self, hbc45):
        # the assembled system is consistent: the truth satisfies it
        rep = hbc_attack(hbc45, 1, 20)
        assert rep.residual <= 1e-6 * (1 + np.abs(hbc45.x_own).max())

    def test_guards(self, hbc45, run40):
        with pytest.raises(TargetCompromisedError):
            hbc_attack(hbc45, 4, 10)
        # target 2 keeps an uncompromised in-neighbor (agent 1)
        with pytest.raises(AdversaryError):
            hbc_attack(hbc45, 2, 10)
        with pytest.raises(AdversaryError):
            hbc_attack(hbc45, 1, 2)  # horizon below K+1
        with pytest.raises(AdversaryError):
            hbc_attack(hbc45, 1, 60)  # view too short

    def test_estimates_scatter(self):
        ests = []
        for seed in range(30):
            run = make_run(seed=100 + seed, rounds=40)
            view = build_hbc_view(run, [4, 5])
            ests.append(hbc_attack(view, 1, 35, truth=40.0).estimate)
        ests = np.array(ests)
        assert ests.std() > 4.0
        assert np.median(np.abs(ests - 40.0) / 41.0) > 0.1


class TestEveAttack:
    def test_counts(self, eve):
        rep = eve_attack(eve, 1, 30, K=2)
        assert rep.equations == 1
        assert rep.unknowns == 4
        assert rep.rank == 1
        assert rep.underdetermined

    def test_estimate_is_shrunk_toward_zero(self, eve):
        # the huge observed flows dominate the single telescoped equation,
        # so the minimum-norm estimate collapses far below the truth
        rep = eve_attack(eve, 1, 30, K=2, truth=40.0)
        assert abs(rep.estimate) < 1.0
        assert rep.relative_error > 0.1

    def test_horizon_guards(self, eve):
        with pytest.raises(AdversaryError):
            eve_attack(eve, 1, 2, K=2)
        with pytest.raises(AdversaryError):
            eve_attack(eve, 1, 60, K=2)


class TestFullNeighborhoodReconstruction:
    @pytest.mark.parametrize("k_horizon", [1, 2, 5])
    def test_exact_recovery(self, k_horizon):
        # target 3 has in={2}, out={4}; coalition {2, 4} covers it
        for seed in range(10):
            run = make_run(seed=200 + seed, rounds=20, K=k_horizon, **MILD)
            view = build_hbc_view(run, [2, 4])
            est = full_neighborhood_reconstruction(view, 3)
            truth = run.x[0, 2]
            assert abs(est - truth) / (1 + abs(truth)) <= 1e-8

    def test_guard(self, hbc45):
        # agent 1 keeps legitimate neighbor 2 outside the coalition
        with pytest.raises(NeighborhoodNotCoveredError):
            full_neighborhood_reconstruction(hbc45, 1)


class TestEveSigmaOneReconstruction:
    @pytest.mark.parametrize("k_horizon", [1, 3])
    def test_exact_recovery(self, k_horizon):
        for seed in range(10):
            run = make_run(seed=300 + seed, rounds=20, K=k_horizon,
                           sigma_dist="const:1", c1_range=(-2.0, 2.0))
            view = build_eve_view(run)
            for agent in (1, 3):
                est = eve_reconstruction_sigma1(view, agent,
                                                sigma=run.schedule.sigma)
                truth = run.x[0, agent - 1]
                assert abs(est - truth) / (1 + abs(truth)) <= 1e-8

    def test_guard_on_random_sigma(self, run40, eve):
        with pytest.raises(SigmaNotUnityError):
            eve_reconstruction_sigma1(eve, 1, sigma=run40.schedule.sigma)


class TestDeniabilityHbc:
    def test_initial_value_swap_arithmetic(self):
        run = make_run(x0=(10.0, 15.0, 20.0, 25.0, 30.0), **MILD)
        wit = construct_deniable_run_hbc(run, 1, 2, 5.0)
        assert wit.x0_alt[0] == 15.0
        assert wit.x0_alt[1] == 10.0
        assert wit.x0_alt.sum() == run.x[0].sum()
        assert np.array_equal(wit.x0_alt[2:], run.x[0, 2:])

    def test_legit_edge_weight_formula(self):
        # sigma(0)=1, weight 0.5 on the hidden edge, x_t=10, delta=5
        # the corrected weight must be (1*0.5*10 + 5) / (1 * 15) = 2/3
        run0 = make_run(x0=(10.0, 15.0, 20.0, 25.0, 30.0), **MILD)
        g = run0.graph
        e12 = g.edge_index(1, 2)
        c1e0 = run0.schedule.c1p_edges[0].copy()
        c1e0[e12] = 0.5
        sched = run0.schedule.with_round0(c1_edges0=c1e0, sigma0=1.0)
        run = run_private_push_sum(g, run0.x[0], sched, run0.rounds)
        wit = construct_deniable_run_hbc(run, 1, 2, 5.0)
        assert wit.schedule_alt.c1p_edges[0][e12] == pytest.approx(2.0 / 3.0,
                                                                   rel=1e-12)

    @pytest.mark.parametrize("delta", [-5.0, 3.7, 100.0])
    def test_replay_out_neighbor(self, delta):
        run = make_run(seed=11, x0=(10.0, 15.0, 20.0, 25.0, 30.0), **MILD)
        wit = construct_deniable_run_hbc(run, 1, 2, delta)
        alt = run_private_push_sum(run.graph, wit.x0_alt, wit.schedule_alt,
                                   run.rounds)
        dev = hbc_view_deviation(build_hbc_view(run, [4, 5]),
                                 build_hbc_view(alt, [4, 5]))
        assert dev <= 1e-9
        assert states_deviation(run, alt, from_round=1) <= 1e-9
        assert not np.array_equal(wit.x0_alt, run.x[0])

    def test_replay_in_neighbor_case(self):
        # agent 1 is an in-neighbor of target 2
        run = make_run(seed=12, x0=(10.0, 15.0, 20.0, 25.0, 30.0), **MILD)
        wit = construct_deniable_run_hbc(run, 2, 1, 3.7)
        assert wit.case == "hbc-in-neighbor"
        alt = run_private_push_sum(run.graph, wit.x0_alt, wit.schedule_alt,
                                   run.rounds)
        dev = hbc_view_deviation(build_hbc_view(run, [4, 5]),
                                 build_hbc_view(alt, [4, 5]))
        assert dev <= 1e-9
        assert states_deviation(run, alt, from_round=1) <= 1e-9

    @pytest.mark.parametrize("magnitude", [1.0, 10.0, 1e3, 1e6])
    def test_unbounded_diameter_witnesses(self, magnitude):
        run = make_run(seed=13, x0=(10.0, 15.0, 20.0, 25.0, 30.0), **MILD)
        # skip the degenerate shifts -x_target(0) and +x_legit(0)
        deltas = [d for d in (magnitude, -magnitude) if d not in (-10.0, 15.0)]
        for delta in deltas:
            wit = construct_deniable_run_hbc(run, 1, 2, delta)
            alt = run_private_push_sum(run.graph, wit.x0_alt,
                                       wit.schedule_alt, run.rounds)
            dev = hbc_view_deviation(build_hbc_view(run, [4, 5]),
                                     build_hbc_view(alt, [4, 5]))
            assert dev <= 1e-9
            assert abs(wit.x0_alt[0] - run.x[0, 0]) == abs(delta)

    def test_guards(self, run40):
        with pytest.raises(DegenerateDeltaError):
            construct_deniable_run_hbc(run40, 1, 2, 0.0)
        with pytest.raises(ZeroDivisorInitialError):
            construct_deniable_run_hbc(run40, 1, 2, -run40.x[0, 0])
        with pytest.raises(ZeroDivisorInitialError):
            construct_deniable_run_hbc(run40, 1, 2, run40.x[0, 1])
        with pytest.raises(NoLegitimateNeighborError):
            construct_deniable_run_hbc(run40, 1, 3, 1.0)  # 3 not a neighbor


class TestDeniabilityEve:
    @pytest.mark.parametrize("delta_sigma", [0.5, -2.0, 10.0])
    def test_replay(self, delta_sigma):
        run = make_run(seed=14, x0=(10.0, 15.0, 20.0, 25.0, 30.0), **MILD)
        wit = construct_deniable_run_eve(run, delta_sigma)
        alt = run_private_push_sum(run.graph, wit.x0_alt, wit.schedule_alt,
                                   run.rounds)
        assert eve_view_deviation(build_eve_view(run),
                                  build_eve_view(alt)) <= 1e-9
        assert states_deviation(run, alt, from_round=1) <= 1e-9
        assert not np.array_equal(wit.x0_alt, run.x[0])

    def test_shift_follows_incidence_stack(self):
        from pushsum_lab.graph import incidence_matrix

        run = make_run(seed=15, x0=(10.0, 15.0, 20.0, 25.0, 30.0), **MILD)
        ds = 0.75
        wit = construct_deniable_run_eve(run, ds)
        expected = run.x[0] + ds * (incidence_matrix(run.graph) @ run.mx[0])
        assert np.array_equal(wit.x0_alt, expected)
        assert wit.sigma0_alt == float(run.schedule.sigma[0]) - ds

    def test_shift_scales_with_delta_sigma(self):
        run = make_run(seed=16, x0=(10.0, 15.0, 20.0, 25.0, 30.0), **MILD)
        w1 = construct_deniable_run_eve(run, 1.0)
        w2 = construct_deniable_run_eve(run, 1000.0)
        d1 = np.linalg.norm(w1.x0_alt - run.x[0])
        d2 = np.linalg.norm(w2.x0_alt - run.x[0])
        assert d2 == pytest.approx(1000.0 * d1, rel=1e-9)

    def test_guards(self, run40):
        with pytest.raises(DegenerateDeltaSigmaError):
            construct_deniable_run_eve(run40, 0.0)
        run_zero = make_run(seed=17, x0=(0.0, 1.0, 2.0, 3.0, 4.0), **MILD)
        with pytest.raises(ZeroInitialValueError):
            construct_deniable_run_eve(run_zero, 0.5)


@pytest.fixture(scope="module")
def vector_run():
    g = demo_digraph()
    sched = build_schedule(g, K=2, eta=0.01, rounds=25, dim=3,
                           rng=np.random.default_rng(21))
    x0 = np.random.default_rng(22).normal(0, np.sqrt(50), size=(5, 3))
    x0[0] = (40.0, -40.0, 4.0)
    return run_private_push_sum_vector(g, x0, sched, 25)


class TestVectorAttacks:
    def test_hbc_per_coordinate(self, vector_run):
        view = build_hbc_view(vector_run, [4, 5])
        rep = hbc_attack(view, 1, 20, truth=vector_run.x[0, 0])
        assert rep.estimate.shape == (3,)
        assert rep.equations == 3 * 20 - 2 + 2
        assert rep.unknowns == 4 * 20 + 5
        assert rep.relative_error > 0.1

    def test_eve_per_coordinate(self, vector_run):
        view = build_eve_view(vector_run)
        rep = eve_attack(view, 1, 20, K=2, truth=vector_run.x[0, 0])
        assert rep.estimate.shape == (3,)
        assert rep.relative_error > 0.1

    def test_eve_y_recovery_vector(self, vector_run):
        view = build_eve_view(vector_run)
        y = eve_recover_y(view, 2)
        truth = vector_run.y[:, 1]
        assert np.max(np.abs(y - truth) / (1 + np.abs(truth))) <= 1e-9
