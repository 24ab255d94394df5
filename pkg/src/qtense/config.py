"""Run-time limits and seeds, gathered in one place so scripts and the CLI
share defaults."""
from __future__ import annotations

from dataclasses import dataclass, replace

from .algebra import CORE_CAP, POWER_CAP
from .states import STATE_CAP
from .tense import EXHAUSTIVE_CAP, SAMPLES


@dataclass(frozen=True)
class Config:
    core_cap: int = CORE_CAP          # carrier size for axiom checks
    state_cap: int = STATE_CAP        # carrier size for state enumeration
    power_cap: int = POWER_CAP        # elements of a materialized direct power
    exhaustive_cap: int = EXHAUSTIVE_CAP  # |M|^|S| above which certification samples
    samples: int = SAMPLES
    seed: int = 0
    grid: int | None = None           # threshold-term grid exponent, if requested

    def with_cap(self, cap: int | None) -> "Config":
        """One ``--cap`` value raises or lowers every size limit at once."""
        if cap is None:
            return self
        return replace(self, core_cap=cap, state_cap=cap, power_cap=cap, exhaustive_cap=cap)


DEFAULT = Config()
