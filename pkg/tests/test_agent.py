import math

import numpy as np
import pytest

from dqnfoil.agent import (SGD, BufferNotReady, EpsilonSchedule, QNetwork, ReplayBuffer, Trainer,
                           TrainingConfig, Transition, bellman_targets, epsilon_at, forward,
                           loss_and_grads, net_init, replay_push, replay_sample, select_action,
                           train_batch)
from dqnfoil.agent import training as training_mod
from dqnfoil.env import EnvConfig
from dqnfoil.errors import ConfigurationError, DivergenceError


def numeric_grads(net, states, actions, targets, h=1e-6):
    out = []
    for p in net.params():
        g = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            lp = loss_and_grads(net, states, actions, targets)[0]
            p[idx] = old - h
            lm = loss_and_grads(net, states, actions, targets)[0]
            p[idx] = old
            g[idx] = (lp - lm) / (2 * h)
        out.append(g)
    return out


def max_rel_grad_error(seed):
    rng = np.random.default_rng(seed)
    net = net_init([5, 7, 6, 3], rng)
    for b in net.biases:
        b += 0.1 * rng.standard_normal(b.shape)
    states = rng.standard_normal((8, 5))
    actions = rng.integers(0, 3, 8)
    targets = rng.standard_normal(8)
    _, gw, gb = loss_and_grads(net, states, actions, targets)
    num = numeric_grads(net, states, actions, targets)
    worst = 0.0
    for a, n in zip(gw + gb, num):
        worst = max(worst, np.max(np.abs(a - n)) / max(np.max(np.abs(n)), 1e-8))
    return worst


class TestNetwork:
    def test_init_shapes(self):
        net = net_init([4, 8, 3], 0)
        assert [w.shape for w in net.weights] == [(4, 8), (8, 3)]
        assert all(np.all(b == 0) for b in net.biases)
        assert net.n_actions == 3 and net.layer_sizes == [4, 8, 3]

    def test_init_deterministic(self):
        a, b = net_init([4, 8, 3], 7), net_init([4, 8, 3], 7)
        assert all(np.array_equal(x, y) for x, y in zip(a.weights, b.weights))
        c = net_init([4, 8, 3], 8)
        assert not np.array_equal(a.weights[0], c.weights[0])

    def test_init_scale(self):
        w = net_init([400, 400], 0).weights[0]
        assert np.std(w) == pytest.approx(1 / 20, rel=0.02)

    def test_init_bad_sizes(self):
        with pytest.raises(ValueError):
            net_init([4], 0)
        with pytest.raises(ValueError):
            net_init([4, 0, 2], 0)

    def test_zero_weights_give_biases(self):
        net = QNetwork([np.zeros((3, 4)), np.zeros((4, 2))], [np.ones(4), np.array([0.5, -1.0])])
        # hidden activations are relu(1) = 1, output bias sees zero weights
        assert np.array_equal(forward(net, np.ones(3)), [0.5, -1.0])

    def test_relu_clips(self):
        net = QNetwork([np.array([[1.0, -1.0]]), np.array([[1.0], [1.0]])], [np.zeros(2), np.zeros(1)])
        assert forward(net, [2.0])[0] == 2.0
        assert forward(net, [-3.0])[0] == 3.0

    def test_matches_independent_arithmetic(self):
        rng = np.random.default_rng(3)
        net = net_init([3, 5, 2], rng)
        net.biases[0][:] = rng.standard_normal(5)
        x = rng.standard_normal(3)
        w1, w2 = net.weights
        h = [max(0.0, sum(x[i] * w1[i, j] for i in range(3)) + net.biases[0][j]) for j in range(5)]
        q = [sum(h[j] * w2[j, k] for j in range(5)) + net.biases[1][k] for k in range(2)]
        assert np.allclose(forward(net, x), q, atol=1e-12, rtol=0)

    def test_batch_forward(self):
        net = net_init([3, 4, 2], 0)
        xs = np.arange(6.0).reshape(2, 3)
        assert np.allclose(forward(net, xs), [forward(net, x) for x in xs])

    def test_wrong_input_length(self):
        with pytest.raises(ValueError):
            forward(net_init([3, 2], 0), np.ones(4))

    @pytest.mark.parametrize("seed", range(3))
    def test_gradient_finite_differences(self, seed):
        assert max_rel_grad_error(seed) < 1e-4


class TestTrainBatch:
    def test_single_weight_step(self):
        net = QNetwork([np.zeros((1, 1))], [np.zeros(1)])
        tr = Transition(np.array([1.0]), 0, 0.0, np.array([1.0]), True)
        net, loss = train_batch(net, [tr], np.array([1.0]), 0.25)
        assert loss == 1.0
        # gradient of (w + b - 1)^2 at zero is -2 for both w and b
        assert net.weights[0][0, 0] == 0.5 and net.biases[0][0] == 0.5

    def test_fixed_point(self):
        net = net_init([2, 4, 3], 0)
        s = np.array([0.3, -0.2])
        tr = Transition(s, 1, 0.0, s, True)
        target = np.array([forward(net, s)[1]])
        before = [p.copy() for p in net.params()]
        _, loss = train_batch(net, [tr], target, 0.1)
        assert loss == 0.0
        assert all(np.array_equal(a, b) for a, b in zip(before, net.params()))

    def test_loss_decreases(self):
        net = net_init([2, 8, 3], 0)
        s = np.array([0.5, 0.5])
        tr = Transition(s, 2, 0.0, s, True)
        losses = [train_batch(net, [tr], np.array([3.0]), 0.05)[1] for _ in range(50)]
        assert losses[-1] < 1e-3 * losses[0]

    def test_momentum_accumulates(self):
        net = QNetwork([np.zeros((1, 1))], [np.zeros(1)])
        opt = SGD(0.5)
        tr = Transition(np.array([0.0]), 0, 0.0, np.array([0.0]), True)
        train_batch(net, [tr], np.array([1.0]), 0.1, opt)
        train_batch(net, [tr], np.array([1.0]), 0.1, opt)
        # velocity after two steps: g1 * 0.5 + g2, g1 = -2, g2 = -2 * (1 - 0.2)
        assert net.biases[0][0] == pytest.approx(0.2 + 0.1 * (1.0 + 1.6))

    def test_divergence(self):
        net = QNetwork([np.full((1, 1), np.nan)], [np.zeros(1)])
        tr = Transition(np.array([1.0]), 0, 0.0, np.array([1.0]), True)
        with pytest.raises(DivergenceError):
            train_batch(net, [tr], np.array([1.0]), 0.1)

    def test_empty_batch(self):
        with pytest.raises(ValueError):
            train_batch(net_init([1, 1], 0), [], np.array([]), 0.1)


class TestPolicy:
    def test_greedy(self):
        assert select_action([0.1, 0.9, 0.3], 0.0, np.random.default_rng(0)) == 1

    def test_ties_lowest_index(self):
        assert select_action([1.0, 2.0, 2.0], 0.0, np.random.default_rng(0)) == 1

    def test_uniform_when_fully_random(self):
        rng = np.random.default_rng(0)
        n, k = 7000, 7
        counts = np.bincount([select_action(np.arange(k), 1.0, rng) for _ in range(n)], minlength=k)
        p = 1 / k
        assert np.all(np.abs(counts - n * p) < 3 * math.sqrt(n * p * (1 - p)))

    def test_shift_invariant(self):
        q = np.array([0.2, -0.4, 0.7, 0.1])
        a = [select_action(q, 0.3, np.random.default_rng(s)) for s in range(50)]
        b = [select_action(q + 13.0, 0.3, np.random.default_rng(s)) for s in range(50)]
        assert a == b

    def test_empty(self):
        with pytest.raises(ValueError):
            select_action([], 0.5, np.random.default_rng(0))

    def test_epsilon_schedule(self):
        sch = EpsilonSchedule(1.0, 0.1, 100)
        assert epsilon_at(sch, 0) == 1.0
        assert epsilon_at(sch, 50) == pytest.approx(0.55)
        assert epsilon_at(sch, 100) == 0.1 and epsilon_at(sch, 10 ** 6) == 0.1

    def test_epsilon_zero_decay(self):
        assert epsilon_at(EpsilonSchedule(1.0, 0.2, 0), 0) == 0.2

    def test_epsilon_invalid(self):
        with pytest.raises(ConfigurationError):
            EpsilonSchedule(0.1, 0.5, 10)

    def test_bellman_terminal(self):
        net = net_init([2, 3], 0)
        tr = Transition(np.zeros(2), 0, 1.5, np.ones(2), True)
        assert bellman_targets([tr], net, 0.9)[0] == 1.5

    def test_bellman_bootstrap(self):
        net = QNetwork([np.zeros((2, 3))], [np.array([1.0, 4.0, 2.0])])
        tr = Transition(np.zeros(2), 0, 1.0, np.ones(2), False)
        assert bellman_targets([tr], net, 0.5)[0] == 3.0
        assert bellman_targets([tr], net, 0.0)[0] == 1.0


class TestReplay:
    def tr(self, i):
        return Transition(np.array([float(i)]), 0, float(i), np.array([float(i)]), False)

    def test_fifo_eviction(self):
        buf = ReplayBuffer(3)
        for i in range(5):
            replay_push(buf, self.tr(i))
        assert len(buf) == 3
        assert [t.reward for t in buf.entries] == [2.0, 3.0, 4.0]

    def test_not_ready(self):
        buf = ReplayBuffer(10)
        buf.push(self.tr(0))
        with pytest.raises(BufferNotReady):
            replay_sample(buf, 2, np.random.default_rng(0))

    def test_deterministic(self):
        buf = ReplayBuffer(10)
        for i in range(10):
            buf.push(self.tr(i))
        a = [t.reward for t in buf.sample(5, np.random.default_rng(4))]
        b = [t.reward for t in buf.sample(5, np.random.default_rng(4))]
        assert a == b

    def test_uniform(self):
        from scipy.stats import chisquare
        buf = ReplayBuffer(10)
        for i in range(10):
            buf.push(self.tr(i))
        rng = np.random.default_rng(0)
        draws = [int(t.reward) for _ in range(1000) for t in buf.sample(10, rng)]
        assert chisquare(np.bincount(draws, minlength=10)).pvalue > 1e-3

    def test_bad_capacity(self):
        with pytest.raises(ValueError):
            ReplayBuffer(0)


# -- synthetic two-state MDP with a closed-form optimum ------------------------

MDP_GAMMA = 0.5
MDP_R = (0.0, 1.0, 2.0)
# Q* solved by hand from the Bellman optimality equations
MDP_Q = np.array([[4 / 3, 8 / 3], [10 / 3, 5 / 3]])


def mdp_next(s, a):
    nxt = {(0, 0): (0, MDP_R[0]), (0, 1): (1, MDP_R[1]), (1, 0): (0, MDP_R[2]), (1, 1): (1, MDP_R[0])}
    return nxt[(s, a)]


def solve_mdp(max_updates=5000, tol=0.05, seed=0):
    """Train on the full transition set; return (updates used, final sup error)."""
    eye = np.eye(2)
    data = []
    for s in (0, 1):
        for a in (0, 1):
            s2, r = mdp_next(s, a)
            data.append(Transition(eye[s], a, r, eye[s2], False))
    buf = ReplayBuffer(4)
    for t in data:
        buf.push(t)
    rng = np.random.default_rng(seed)
    net = net_init([2, 16, 2], rng)
    err = np.inf
    for k in range(1, max_updates + 1):
        batch = buf.sample(4, rng)
        train_batch(net, batch, bellman_targets(batch, net, MDP_GAMMA), 0.05)
        if k % 50 == 0:
            err = np.max(np.abs(forward(net, eye) - MDP_Q))
            if err < tol / 10:
                return k, err
    return max_updates, err


def test_mdp_optimum_by_value_iteration():
    q = np.zeros((2, 2))
    for _ in range(200):
        q = np.array([[mdp_next(s, a)[1] + MDP_GAMMA * q[mdp_next(s, a)[0]].max() for a in (0, 1)]
                      for s in (0, 1)])
    assert np.allclose(q, MDP_Q, atol=1e-12)


def test_mdp_convergence():
    updates, err = solve_mdp()
    assert err < 0.05 and updates <= 5000


# -- training loop -------------------------------------------------------------

SMALL = TrainingConfig(batch_size=4, episodes=3, hidden=(8,), seed=1)


def test_one_episode_records_each_step():
    rep = Trainer(EnvConfig(), TrainingConfig(batch_size=2, episodes=1, hidden=(8,))).run()
    assert len(rep.returns) == 1 and len(rep.steps) == 4
    assert [s[1] for s in rep.steps] == [0, 1, 2, 3]


def test_best_return_non_decreasing():
    rep = Trainer(EnvConfig(), TrainingConfig(batch_size=4, episodes=8, hidden=(8,))).run()
    assert all(b2 >= b1 for b1, b2 in zip(rep.best_returns, rep.best_returns[1:]))
    assert rep.best_returns[0] >= rep.initial_return
    assert rep.best_return == max([rep.initial_return] + rep.returns)


def test_determinism():
    a = Trainer(EnvConfig(), SMALL).run()
    b = Trainer(EnvConfig(), SMALL).run()
    assert a.returns == b.returns and a.steps == b.steps and a.losses == b.losses


def test_baseline_does_not_learn():
    t = Trainer(EnvConfig(), TrainingConfig(batch_size=4, episodes=3, hidden=(8,), learn=False))
    w0 = t.net.weights[0].copy()
    rep = t.run()
    assert rep.tag == "baseline" and not rep.losses
    assert np.array_equal(w0, t.net.weights[0])
    assert rep.epsilons == [1.0] * 3


def test_target_network_syncs():
    t = Trainer(EnvConfig(), TrainingConfig(batch_size=2, episodes=2, hidden=(8,), target_update=3))
    t.run()
    assert t.updates >= 3
    assert t.target_net is not t.net


def test_divergence_halves_then_aborts(monkeypatch):
    calls = []

    def boom(*a, **k):
        calls.append(a[3])
        raise DivergenceError("nan")

    monkeypatch.setattr(training_mod, "train_batch", boom)
    t = Trainer(EnvConfig(), TrainingConfig(batch_size=1, episodes=2, hidden=(4,), learning_rate=0.4))
    with pytest.raises(DivergenceError) as info:
        t.run()
    assert calls == [0.4, 0.2, 0.1]
    assert info.value.report is t.report and t.report.diverged


@pytest.mark.parametrize("field,value", [("gamma", 1.5), ("learning_rate", 0.0), ("batch_size", 0),
                                          ("episodes", 0), ("momentum", 1.0), ("hidden", (0,))])
def test_config_validation(field, value):
    from dataclasses import replace
    with pytest.raises(ConfigurationError):
        replace(TrainingConfig(), **{field: value}).validate()
