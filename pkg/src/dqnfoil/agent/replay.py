from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Transition:
    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    done: bool


class BufferNotReady(RuntimeError):
    """Fewer stored transitions than the requested batch size."""


class ReplayBuffer:
    """Bounded FIFO of transitions with uniform sampling with replacement."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = int(capacity)
        self.entries = deque(maxlen=self.capacity)

    def __len__(self):
        return len(self.entries)

    def ready(self, batch_size):
        return len(self.entries) >= batch_size

    def push(self, transition: Transition):
        self.entries.append(transition)

    def sample(self, batch_size, rng):
        if not self.ready(batch_size):
            raise BufferNotReady(f"buffer holds {len(self)} < {batch_size} transitions")
        idx = rng.integers(0, len(self.entries), size=batch_size)
        return [self.entries[i] for i in idx]


def replay_push(buffer, transition):
    buffer.push(transition)


def replay_sample(buffer, batch_size, rng):
    return buffer.sample(batch_size, rng)
