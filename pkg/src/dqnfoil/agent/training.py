"""DQN training loop over :class:`~dqnfoil.env.AirfoilEnv`.

Randomness comes from one master seed. Weight init, exploration and replay
sampling draw from independent streams, and the latter two are re-derived
per episode so a run can be resumed from a checkpoint bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ..aero import AeroMeasures
from ..env import AirfoilEnv, EnvConfig, episode_return
from ..errors import ConfigurationError, DivergenceError
from .network import SGD, QNetwork, forward, net_init, train_batch
from .policy import EpsilonSchedule, bellman_targets, epsilon_at, select_action
from .replay import ReplayBuffer, Transition

STREAM_INIT, STREAM_EXPLORE, STREAM_REPLAY = 0, 1, 2
MAX_HALVINGS = 2


@dataclass(frozen=True)
class TrainingConfig:
    gamma: float = 0.95
    learning_rate: float = 1e-3
    batch_size: int = 32
    buffer_capacity: int = 5000
    episodes: int = 200
    train_every: int = 1
    seed: int = 0
    eps_start: float = 1.0
    eps_end: float = 0.05
    decay_steps: int = 2000
    hidden: tuple = (32, 32)
    momentum: float = 0.0
    target_update: int = 0
    learn: bool = True

    def validate(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigurationError("gamma must lie in [0, 1]", "training.gamma")
        if not self.learning_rate > 0:
            raise ConfigurationError("learning_rate must be positive", "training.learning_rate")
        if not 1 <= self.batch_size <= self.buffer_capacity:
            raise ConfigurationError("need 1 <= batch_size <= buffer_capacity", "training.batch_size")
        if self.episodes < 1:
            raise ConfigurationError("episodes must be >= 1", "training.episodes")
        if self.train_every < 1:
            raise ConfigurationError("train_every must be >= 1", "training.train_every")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigurationError("momentum must lie in [0, 1)", "training.momentum")
        if any(int(h) < 1 for h in self.hidden):
            raise ConfigurationError("hidden layer sizes must be positive", "training.hidden")
        EpsilonSchedule(self.eps_start, self.eps_end, self.decay_steps)

    @property
    def schedule(self):
        return EpsilonSchedule(self.eps_start, self.eps_end, self.decay_steps)


def stream(seed, kind, episode=0):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(kind, episode)))


@dataclass
class TrainingReport:
    returns: list = field(default_factory=list)
    best_returns: list = field(default_factory=list)
    epsilons: list = field(default_factory=list)
    mean_losses: list = field(default_factory=list)
    best_dm: list = field(default_factory=list)
    best_lm: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    losses: list = field(default_factory=list)
    initial_return: float = 0.0
    initial_measures: Optional[AeroMeasures] = None
    best_return: float = -math.inf
    best_measures: Optional[AeroMeasures] = None
    best_polygon: object = None
    tag: str = "dqn"
    diverged: bool = False

    @property
    def episodes(self):
        return len(self.returns)


class Trainer:
    def __init__(self, env_config: EnvConfig, config: TrainingConfig, env: AirfoilEnv = None):
        config.validate()
        self.config = config
        self.env = env or AirfoilEnv(env_config)
        self.env_config = self.env.config
        sizes = [self.env.state_size, *[int(h) for h in config.hidden], self.env.n_actions]
        self.net = net_init(sizes, stream(config.seed, STREAM_INIT))
        self.target_net = self.net.copy() if config.target_update else None
        self.buffer = ReplayBuffer(config.buffer_capacity)
        self.optimizer = SGD(config.momentum)
        self.lr = config.learning_rate
        self.halvings = 0
        self.episode = 0
        self.global_step = 0
        self.updates = 0

        env = self.env
        r0 = 0.0 if self.env_config.reward_delta else env.shape_reward(env.initial_measures)
        self.report = TrainingReport(tag="dqn" if config.learn else "baseline")
        self.report.initial_measures = env.initial_measures
        self.report.initial_return = episode_return([r0] * env.N, config.gamma)
        # the unmodified shape is the first best-so-far candidate
        self.report.best_return = self.report.initial_return
        self.report.best_measures = env.initial_measures
        self.report.best_polygon = env.initial_polygon

    def _epsilon(self):
        if not self.config.learn:
            return 1.0
        return epsilon_at(self.config.schedule, self.global_step)

    def _update(self, rng):
        cfg = self.config
        batch = self.buffer.sample(cfg.batch_size, rng)
        targets = bellman_targets(batch, self.target_net or self.net, cfg.gamma)
        while True:
            try:
                _, loss = train_batch(self.net, batch, targets, self.lr, self.optimizer)
                break
            except DivergenceError:
                self.halvings += 1
                self.report.diverged = True
                if self.halvings > MAX_HALVINGS:
                    raise DivergenceError(
                        f"training diverged after halving the learning rate {MAX_HALVINGS} times "
                        f"(episode {self.episode}, lr {self.lr:g})", self.report)
                self.lr *= 0.5
        self.updates += 1
        if self.target_net is not None and self.updates % cfg.target_update == 0:
            self.target_net = self.net.copy()
        return loss

    def run_episode(self):
        cfg, env, rep = self.config, self.env, self.report
        explore = stream(cfg.seed, STREAM_EXPLORE, self.episode)
        replay = stream(cfg.seed, STREAM_REPLAY, self.episode)
        state = env.reset()
        rewards, losses = [], []
        done = False
        while not done:
            eps = self._epsilon()
            q = forward(self.net, state.vector) if cfg.learn else np.zeros(env.n_actions)
            a = select_action(q, eps, explore)
            out = env.step(a)
            done = out.done
            self.buffer.push(Transition(state.vector, a, out.reward, out.next_state.vector, out.done))
            self.global_step += 1
            if cfg.learn and self.global_step % cfg.train_every == 0 and self.buffer.ready(cfg.batch_size):
                losses.append(self._update(replay))
            rewards.append(out.reward)
            m = out.measures
            rep.steps.append((self.episode, state.step_index, out.point_ref, out.action,
                              out.reward, m.lift_measure, m.drag_measure, out.valid))
            state = out.next_state

        ret = episode_return(rewards, cfg.gamma)
        if ret > rep.best_return:
            rep.best_return = ret
            rep.best_polygon = env.polygon
            rep.best_measures = env.measures
            env.best_polygon = env.polygon
        rep.returns.append(ret)
        rep.best_returns.append(rep.best_return)
        rep.epsilons.append(self._epsilon())
        rep.mean_losses.append(float(np.mean(losses)) if losses else math.nan)
        rep.losses.extend(losses)
        rep.best_dm.append(rep.best_measures.drag_measure)
        rep.best_lm.append(rep.best_measures.lift_measure)
        self.episode += 1
        return ret

    def run(self, episodes=None) -> TrainingReport:
        target = self.config.episodes if episodes is None else self.episode + episodes
        while self.episode < target:
            self.run_episode()
        return self.report

    # -- checkpointing -------------------------------------------------------

    def state_dict(self):
        rep = self.report
        tr = [[t.state.tolist(), t.action, t.reward, t.next_state.tolist(), t.done]
              for t in self.buffer.entries]
        return {
            "layer_sizes": self.net.layer_sizes,
            "weights": [w.tolist() for w in self.net.weights],
            "biases": [b.tolist() for b in self.net.biases],
            "target_weights": None if self.target_net is None else [w.tolist() for w in self.target_net.weights],
            "target_biases": None if self.target_net is None else [b.tolist() for b in self.target_net.biases],
            "velocity": None if self.optimizer.velocity is None else [v.tolist() for v in self.optimizer.velocity],
            "training": asdict(self.config),
            "seed": self.config.seed,
            "episode": self.episode,
            "global_step": self.global_step,
            "updates": self.updates,
            "learning_rate": self.lr,
            "halvings": self.halvings,
            "buffer": tr,
            "current_points": self.env.best_polygon.points.tolist(),
            "report": {
                "returns": rep.returns, "best_returns": rep.best_returns, "epsilons": rep.epsilons,
                "mean_losses": rep.mean_losses, "best_dm": rep.best_dm, "best_lm": rep.best_lm,
                "steps": [list(s[:2]) + [list(s[2])] + list(s[3:]) for s in rep.steps],
                "losses": rep.losses, "best_return": rep.best_return,
                "best_points": rep.best_polygon.points.tolist(),
                "best_measures": asdict(rep.best_measures), "diverged": rep.diverged,
            },
        }

    def load_state_dict(self, state):
        if state["layer_sizes"] != self.net.layer_sizes:
            raise ConfigurationError("checkpoint network shape does not match the configuration")
        self.net = QNetwork(state["weights"], state["biases"])
        if state.get("target_weights") is not None:
            self.target_net = QNetwork(state["target_weights"], state["target_biases"])
        if state.get("velocity") is not None:
            self.optimizer.velocity = [np.array(v) for v in state["velocity"]]
        self.episode = state["episode"]
        self.global_step = state["global_step"]
        self.updates = state["updates"]
        self.lr = state["learning_rate"]
        self.halvings = state["halvings"]
        self.buffer.entries.clear()
        for s, a, r, s2, d in state["buffer"]:
            self.buffer.push(Transition(np.array(s), a, r, np.array(s2), d))
        base = self.env.initial_polygon
        self.env.best_polygon = base.with_points(np.array(state["current_points"]))
        r = state["report"]
        rep = self.report
        rep.returns, rep.best_returns = list(r["returns"]), list(r["best_returns"])
        rep.epsilons, rep.mean_losses = list(r["epsilons"]), list(r["mean_losses"])
        rep.best_dm, rep.best_lm = list(r["best_dm"]), list(r["best_lm"])
        rep.steps = [(s[0], s[1], tuple(s[2]), *s[3:]) for s in r["steps"]]
        rep.losses = list(r["losses"])
        rep.best_return = r["best_return"]
        rep.best_polygon = base.with_points(np.array(r["best_points"]))
        rep.best_measures = AeroMeasures(**r["best_measures"])
        rep.diverged = r["diverged"]


def train(env_config: EnvConfig, training_config: TrainingConfig) -> TrainingReport:
    """Run a full training job and return its report."""
    return Trainer(env_config, training_config).run()
