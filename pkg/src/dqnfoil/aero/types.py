from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import ConfigurationError

XFOIL_ENV = "DQNFOIL_XFOIL"


@dataclass(frozen=True)
class CpDistribution:
    cp: np.ndarray
    alpha: float = 0.0
    backend: str = "panel"

    def __post_init__(self):
        cp = np.array(self.cp, dtype=np.float64)
        cp.setflags(write=False)
        object.__setattr__(self, "cp", cp)

    def __len__(self):
        return len(self.cp)


@dataclass(frozen=True)
class AeroMeasures:
    lift_measure: float
    drag_measure: float
    cl: Optional[float] = None
    cd: Optional[float] = None


@dataclass(frozen=True)
class XfoilSettings:
    executable_path: str = field(default_factory=lambda: os.environ.get(XFOIL_ENV, "xfoil"))
    reynolds: Optional[float] = None
    mach: float = 0.0
    alpha: float = 0.0
    timeout: float = 60.0
    workdir: Optional[Path] = None
    keep_files: bool = False

    def __post_init__(self):
        if not self.timeout > 0:
            raise ConfigurationError("timeout must be positive", "xfoil.timeout")
        if not 0.0 <= self.mach <= 0.9:
            raise ConfigurationError("mach must lie in [0, 0.9]", "xfoil.mach")
