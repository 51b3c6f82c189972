"""The noisy-measurement memory protocol, run on batches of independent trials."""
import logging
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from sweepdecoder.decoder import (
    CORRECTED, LOGICAL_FAILURE, SYNDROME_REMAINS, DecoderConfig, DirectionSchedule,
    decoder_tables, is_logical_failure, run_schedule,
)
from sweepdecoder.errors import ConfigError
from sweepdecoder.lattice import FAMILIES, LatticeGeometry, boundary_map, build_lattice
from sweepdecoder.metrics import metric_key, metrics
from sweepdecoder.noise import NoiseModel, sample_errors, sample_measurement_flips
from sweepdecoder.sweep.automaton import SweepState, sweep_step

logger = logging.getLogger(__name__)

NOISE_STREAM = 0
SWEEP_STREAM = 1


@dataclass
class ProtocolConfig:
    family: str = field(metadata={"help": "Lattice family, e.g. rhombic-periodic"})
    L: int = field(metadata={"help": "Linear lattice size"})
    noise: NoiseModel = field(default_factory=NoiseModel, metadata={"help": "Error model"})
    cycles: int = field(default=1, metadata={"help": "Noisy measurement cycles N before the final decode"})
    decoder: DecoderConfig = field(default_factory=DecoderConfig, metadata={"help": "Decoder settings"})
    trials: int = field(default=1000, metadata={"help": "Independent trials for this point"})
    seed: int = field(default=0, metadata={"help": "Master seed shared by every point of a run"})
    point: int = field(default=0, metadata={"help": "Index of this point in the run, keys the trial streams"})

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown lattice family {self.family!r}, expected one of {FAMILIES}")
        if self.cycles < 1:
            raise ConfigError(f"N must be at least 1, got {self.cycles}")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}")
        if self.seed < 0 or self.point < 0:
            raise ConfigError("seed and point index must be non-negative")

    @property
    def lattice(self) -> LatticeGeometry:
        return build_lattice(self.family, self.L)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["decoder"] = self.decoder.to_dict()
        return data


@dataclass
class TrialOutcome:
    trial: int
    success: bool
    mode: str
    residual_weight: int
    seed: int
    steps: int

    def to_dict(self) -> dict:
        return asdict(self)


def trial_streams(cfg: ProtocolConfig, trial: int):
    """Noise generator and sweep seed of one trial, fixed by (seed, point, trial)."""
    noise = np.random.SeedSequence(cfg.seed, spawn_key=(cfg.point, trial, NOISE_STREAM))
    sweep = np.random.SeedSequence(cfg.seed, spawn_key=(cfg.point, trial, SWEEP_STREAM))
    return np.random.default_rng(noise), int(sweep.generate_state(1, dtype=np.uint64)[0])


def run_batch(cfg: ProtocolConfig, trials: Sequence[int],
              initial_error: Optional[np.ndarray] = None) -> List[TrialOutcome]:
    """Run the listed trials of ``cfg`` side by side.

    Every trial owns its random streams, so an outcome does not depend on
    which other trials share the batch.
    """
    trials = [int(t) for t in trials]
    if not trials:
        return []
    lattice = cfg.lattice
    tables = decoder_tables(lattice, cfg.decoder)
    batch = len(trials)
    streams = [trial_streams(cfg, t) for t in trials]
    rngs = [rng for rng, _ in streams]
    seeds = np.array([s for _, s in streams], dtype=np.uint64)

    error = np.zeros((batch, lattice.n_faces), dtype=bool)
    if initial_error is not None:
        error ^= np.asarray(initial_error, dtype=bool)
    state = SweepState(np.zeros((batch, lattice.n_edges), dtype=bool),
                       np.zeros((batch, lattice.n_faces), dtype=bool), seeds)
    schedule = DirectionSchedule(cfg.decoder.directions, cfg.decoder.noisy_period_for(lattice.L))
    q = cfg.noise.q

    with metrics.timer(metric_key("experiment", "batch", lattice.family)):
        sweeps = 0
        for _ in range(cfg.cycles):
            for b, rng in enumerate(rngs):
                error[b] ^= sample_errors(cfg.noise, lattice, rng)
            true = boundary_map(lattice, error)
            state.syndrome = np.stack([sample_measurement_flips(true[b], q, rng)
                                       for b, rng in enumerate(rngs)])
            for _ in range(cfg.decoder.sweeps_per_measurement):
                error ^= sweep_step(state, tables[schedule(sweeps)], cfg.decoder.variant)
                sweeps += 1

        state.syndrome = boundary_map(lattice, error)
        state.correction = np.zeros_like(error)
        steps = run_schedule(state, tables, cfg.decoder)
        residual = error ^ state.correction

    remains = state.syndrome.any(axis=1)
    logical = np.zeros(batch, dtype=bool)
    if (~remains).any():
        logical[~remains] = is_logical_failure(lattice, residual[~remains])

    outcomes = []
    for b, t in enumerate(trials):
        mode = SYNDROME_REMAINS if remains[b] else LOGICAL_FAILURE if logical[b] else CORRECTED
        outcomes.append(TrialOutcome(trial=t, success=mode == CORRECTED, mode=mode,
                                     residual_weight=int(residual[b].sum()), seed=int(seeds[b]),
                                     steps=int(steps[b])))
    failures = [o.mode for o in outcomes if not o.success]
    for mode in (SYNDROME_REMAINS, LOGICAL_FAILURE):
        if mode in failures:
            metrics.incr(metric_key("experiment", mode.replace("-", "_")), failures.count(mode))
    return outcomes


def run_trial(cfg: ProtocolConfig, trial_index: int) -> TrialOutcome:
    return run_batch(cfg, [trial_index])[0]
