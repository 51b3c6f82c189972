"""The sweep decoder: cycle the rule through all sweep directions, then judge the residual."""
import logging
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from sweepdecoder.errors import ConfigError, LatticeError
from sweepdecoder.lattice.geometry import LatticeGeometry, boundary_map
from sweepdecoder.lattice.logicals import logical_representatives
from sweepdecoder.metrics import metric_key, metrics
from sweepdecoder.sweep.automaton import REGULAR, VARIANTS, SweepState, sweep_step
from sweepdecoder.sweep.causal import OMEGA, SweepDirection
from sweepdecoder.sweep.rules import RuleTable, rule_table

logger = logging.getLogger(__name__)

CORRECTED = "corrected"
SYNDROME_REMAINS = "syndrome-remains"
LOGICAL_FAILURE = "logical-failure"
OUTCOMES = (CORRECTED, SYNDROME_REMAINS, LOGICAL_FAILURE)


def default_tmax(L: int) -> int:
    return 2 * L


@dataclass
class DecoderConfig:
    direction_order: Tuple[str, ...] = field(
        default=tuple(str(d) for d in OMEGA),
        metadata={"help": "Permutation of the eight sweep directions, e.g. +++,---,..."})
    t_max: Optional[int] = field(
        default=None, metadata={"help": "Steps per direction in the final decode (default 2L)"})
    variant: str = field(
        default=REGULAR, metadata={"help": "Tie-break between equally small face subsets: regular|first"})
    noisy_period: Optional[int] = field(
        default=None, metadata={"help": "Sweeps between direction changes while measuring (default ceil(log2 L))"})
    perfect_period: Optional[int] = field(
        default=None, metadata={"help": "Steps between direction changes in the final decode (default L)"})
    sweeps_per_measurement: int = field(
        default=1, metadata={"help": "Rule applications after each noisy syndrome measurement"})
    repeats: int = field(
        default=1, metadata={"help": "Passes over all directions in the final decode"})

    def __post_init__(self):
        if isinstance(self.direction_order, str):
            self.direction_order = tuple(d.strip() for d in self.direction_order.split(","))
        self.direction_order = tuple(str(SweepDirection.parse(d) if isinstance(d, str)
                                         else SweepDirection(d)) for d in self.direction_order)
        self.validate()

    def validate(self):
        if sorted(self.direction_order) != sorted(str(d) for d in OMEGA):
            raise ConfigError(f"direction order must be a permutation of all eight directions, "
                              f"got {','.join(self.direction_order)}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown rule variant {self.variant!r}, expected one of {VARIANTS}")
        for name in ("t_max", "noisy_period", "perfect_period"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"{name} must be at least 1, got {value}")
        if self.sweeps_per_measurement < 1 or self.repeats < 1:
            raise ConfigError("sweeps_per_measurement and repeats must be at least 1")

    @property
    def directions(self) -> List[SweepDirection]:
        return [SweepDirection.parse(d) for d in self.direction_order]

    def tmax_for(self, L: int) -> int:
        return self.t_max if self.t_max is not None else default_tmax(L)

    def noisy_period_for(self, L: int) -> int:
        return self.noisy_period if self.noisy_period is not None else max(1, math.ceil(math.log2(L)))

    def perfect_period_for(self, L: int) -> int:
        return self.perfect_period if self.perfect_period is not None else L

    def to_dict(self) -> dict:
        data = asdict(self)
        data["direction_order"] = list(self.direction_order)
        return data


class DirectionSchedule(object):
    """Direction in force after a given number of sweeps, advancing every ``period``."""

    def __init__(self, directions: Sequence[SweepDirection], period: int):
        if period < 1:
            raise ConfigError(f"direction period must be at least 1, got {period}")
        self.directions = list(directions)
        self.period = period

    def __call__(self, counter: int) -> SweepDirection:
        return self.directions[(counter // self.period) % len(self.directions)]


def decoder_tables(lattice: LatticeGeometry, config: DecoderConfig) -> Dict[SweepDirection, RuleTable]:
    return {d: rule_table(lattice, d) for d in config.directions}


@dataclass
class DecodeResult:
    outcome: str
    correction: np.ndarray
    steps: int

    @property
    def failed(self) -> bool:
        return self.outcome != CORRECTED


def run_schedule(state: SweepState, tables: Mapping[SweepDirection, RuleTable],
                 config: DecoderConfig) -> np.ndarray:
    """Perfect-measurement decode of every row of ``state``; returns steps used per row.

    Runs ``repeats`` passes of eight times T_max steps, switching direction
    every perfect period, and stops early once every syndrome is clear.
    """
    lattice = next(iter(tables.values())).lattice
    L = lattice.L
    total = config.repeats * len(config.directions) * config.tmax_for(L)
    schedule = DirectionSchedule(config.directions, config.perfect_period_for(L))
    steps = np.full(state.batch, total, dtype=np.int64)
    done = state.clear()
    steps[done] = 0
    with metrics.timer(metric_key("decoder", "decode", lattice.family)):
        for t in range(total):
            if done.all():
                break
            sweep_step(state, tables[schedule(t)], config.variant, active=~done)
            cleared = state.clear() & ~done
            steps[cleared] = t + 1
            done |= cleared
    return steps


def sweep_decode(lattice: LatticeGeometry, tables: Mapping[SweepDirection, RuleTable], syndrome,
                 config: DecoderConfig, seed: int = 0, error=None) -> DecodeResult:
    """Decode one perfectly measured syndrome.

    Without ``error`` the outcome only tells whether the syndrome was
    cleared. With it, a cleared syndrome is further judged against the
    logical operators.

    The schedule runs at most 8 * T_max steps and switches direction every
    L steps by default. Switching sooner clears boundary-stuck syndromes in
    fewer steps but can cut a bulk sweep short before the syndrome reaches
    a vertex where it is trailing; the default period keeps a full bulk
    pass inside every direction.
    """
    state = SweepState.start(lattice, syndrome, [seed])
    steps = run_schedule(state, tables, config)
    correction = state.correction[0]
    if state.syndrome[0].any():
        outcome = SYNDROME_REMAINS
    elif error is not None and is_logical_failure(lattice, np.asarray(error, dtype=bool) ^ correction):
        outcome = LOGICAL_FAILURE
    else:
        outcome = CORRECTED
    return DecodeResult(outcome, correction, int(steps[0]))


def is_logical_failure(lattice: LatticeGeometry, residual) -> np.ndarray:
    """True where a syndrome-free residual flips a logical qubit.

    Accepts one residual (F,) or a batch (B, F).
    """
    residual = np.asarray(residual, dtype=bool)
    if boundary_map(lattice, residual).any():
        raise LatticeError("logical failure is only defined for residuals with trivial syndrome")
    parity = (residual.astype(np.int64) @ logical_x_matrix(lattice).T) & 1
    return parity.any(axis=-1)


@lru_cache(maxsize=16)
def logical_x_matrix(lattice: LatticeGeometry) -> np.ndarray:
    _, xs = logical_representatives(lattice)
    return np.asarray(xs, dtype=np.int64)
