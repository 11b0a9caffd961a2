"""Deep Q-learning: network, replay memory, epsilon-greedy policy and training loop."""
from .network import SGD, QNetwork, forward, loss_and_grads, net_init, train_batch
from .policy import EpsilonSchedule, bellman_targets, epsilon_at, select_action
from .replay import BufferNotReady, ReplayBuffer, Transition, replay_push, replay_sample
from .training import Trainer, TrainingConfig, TrainingReport, train

__all__ = [
    "SGD", "QNetwork", "forward", "loss_and_grads", "net_init", "train_batch",
    "EpsilonSchedule", "bellman_targets", "epsilon_at", "select_action",
    "BufferNotReady", "ReplayBuffer", "Transition", "replay_push", "replay_sample",
    "Trainer", "TrainingConfig", "TrainingReport", "train",
]
