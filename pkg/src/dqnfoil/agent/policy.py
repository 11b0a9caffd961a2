from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from .network import forward


@dataclass(frozen=True)
class EpsilonSchedule:
    eps_start: float = 1.0
    eps_end: float = 0.05
    decay_steps: int = 2000

    def __post_init__(self):
        if not 0.0 <= self.eps_end <= self.eps_start <= 1.0:
            raise ConfigurationError("need 0 <= eps_end <= eps_start <= 1", "training.eps_start")
        if self.decay_steps < 0:
            raise ConfigurationError("decay_steps must be non-negative", "training.decay_steps")


def epsilon_at(schedule: EpsilonSchedule, global_step: int) -> float:
    """Linear decay from ``eps_start`` to ``eps_end`` over ``decay_steps``."""
    if global_step >= schedule.decay_steps:
        return schedule.eps_end
    frac = global_step / schedule.decay_steps
    return schedule.eps_start + frac * (schedule.eps_end - schedule.eps_start)


def select_action(q_values, epsilon, rng) -> int:
    """Epsilon-greedy choice; ties go to the lowest index."""
    q = np.asarray(q_values)
    if q.size == 0:
        raise ValueError("no q-values")
    if rng.random() < epsilon:
        return int(rng.integers(q.size))
    return int(np.argmax(q))


def bellman_targets(batch, net, gamma) -> np.ndarray:
    """``r`` for terminal transitions, else ``r + gamma * max_a Q(s', a)``."""
    rewards = np.array([tr.reward for tr in batch], dtype=np.float64)
    done = np.array([tr.done for tr in batch], dtype=bool)
    targets = rewards.copy()
    live = ~done
    if gamma and live.any():
        nxt = np.stack([tr.next_state for tr, d in zip(batch, live) if d])
        targets[live] += gamma * forward(net, nxt).max(axis=1)
    return targets
