"""Parallel execution of experiment grids and their on-disk results."""
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import replace
from typing import IO, Iterable, List, Optional, Sequence

import pandas as pd
from tqdm import tqdm

from sweepdecoder.decoder import DecoderConfig
from sweepdecoder.experiment.estimate import RateEstimate
from sweepdecoder.experiment.protocol import ProtocolConfig, TrialOutcome, run_batch
from sweepdecoder.metrics import metric_key, metrics
from sweepdecoder.noise import NoiseModel

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["L", "p", "q", "N", "trials", "failures", "p_L", "ci_low", "ci_high", "seed"]
FLOAT_FORMAT = "%.10g"
TRIALS_FILE = "trials.jsonl"
RESULTS_FILE = "results.csv"
SUMMARY_FILE = "summary.json"


def _chunks(n: int, size: int) -> List[List[int]]:
    return [list(range(start, min(start + size, n))) for start in range(0, n, size)]


def run_point(cfg: ProtocolConfig, workers: int = 1, batch_size: int = 64,
              progress: bool = False) -> List[TrialOutcome]:
    """All trials of one point, ordered by trial index whatever the worker count."""
    chunks = _chunks(cfg.trials, max(1, batch_size))
    bar = tqdm(total=cfg.trials, desc=f"{cfg.family} L={cfg.L} p={cfg.noise.p:g}",
               disable=not progress, leave=False)
    outcomes = []
    with metrics.timer(metric_key("experiment", "point", cfg.family)):
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(run_batch, cfg, chunk) for chunk in chunks]
                for future in as_completed(futures):
                    done = future.result()
                    outcomes.extend(done)
                    bar.update(len(done))
        else:
            for chunk in chunks:
                done = run_batch(cfg, chunk)
                outcomes.extend(done)
                bar.update(len(done))
    bar.close()
    return sorted(outcomes, key=lambda o: o.trial)


def estimate_logical_rate(cfg: ProtocolConfig, workers: int = 1, batch_size: int = 64,
                          confidence: float = 0.95) -> RateEstimate:
    """Failure fraction of one point with its Wilson interval."""
    outcomes = run_point(cfg, workers=workers, batch_size=batch_size)
    return RateEstimate.from_outcomes(outcomes, confidence)


def aggregate_row(cfg: ProtocolConfig, estimate: RateEstimate) -> dict:
    return {"L": cfg.L, "p": cfg.noise.p, "q": cfg.noise.q, "N": cfg.cycles,
            "trials": estimate.trials, "failures": estimate.failures, "p_L": estimate.p_L,
            "ci_low": estimate.ci_low, "ci_high": estimate.ci_high, "seed": cfg.seed}


def write_trials(stream: IO[str], cfg: ProtocolConfig, outcomes: Iterable[TrialOutcome]):
    for outcome in outcomes:
        record = {"family": cfg.family, "L": cfg.L, "p": cfg.noise.p, "q": cfg.noise.q,
                  "N": cfg.cycles, "point": cfg.point, **outcome.to_dict()}
        stream.write(json.dumps(record, sort_keys=True) + "\n")


def write_results(frame: pd.DataFrame, path: str):
    frame[CSV_COLUMNS].to_csv(path, index=False, float_format=FLOAT_FORMAT)


def write_summary(summary: dict, path: str):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(summary, f, sort_keys=True, indent=2)


def run_grid(points: Sequence[ProtocolConfig], output_dir: Optional[str] = None, workers: int = 1,
             batch_size: int = 64, progress: bool = True) -> pd.DataFrame:
    """Estimate p_L at every point; with ``output_dir`` also stream trials and write the CSV."""
    rows = []
    trials_stream = None
    if output_dir is not None:
        os.makedirs(output_dir, exist_ok=True)
        trials_stream = open(os.path.join(output_dir, TRIALS_FILE), "w", encoding="utf-8")
    try:
        for cfg in points:
            outcomes = run_point(cfg, workers=workers, batch_size=batch_size, progress=progress)
            estimate = RateEstimate.from_outcomes(outcomes)
            rows.append(aggregate_row(cfg, estimate))
            logger.info("%s L=%d p=%g q=%g N=%d: %d/%d failed (%s)", cfg.family, cfg.L,
                        cfg.noise.p, cfg.noise.q, cfg.cycles, estimate.failures, estimate.trials,
                        estimate.modes or "none")
            if trials_stream is not None:
                write_trials(trials_stream, cfg, outcomes)
    finally:
        if trials_stream is not None:
            trials_stream.close()
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
    if output_dir is not None:
        write_results(frame, os.path.join(output_dir, RESULTS_FILE))
    return frame


def grid_points(family: str, sizes: Sequence[int], rates: Sequence[float], cycles: Sequence[int],
                noise: NoiseModel, decoder: DecoderConfig, trials: int, seed: int) -> List[ProtocolConfig]:
    """One config per (N, L, p), numbered in that order."""
    points = []
    for n in cycles:
        for L in sizes:
            for p in rates:
                points.append(ProtocolConfig(family=family, L=L, noise=replace(noise, p=p), cycles=n,
                                             decoder=decoder, trials=trials, seed=seed,
                                             point=len(points)))
    return points


def scan_alpha(family: str, sizes: Sequence[int], p: float, q_values: Sequence[float], cycles: int,
               decoder: DecoderConfig, trials: int, seed: int, workers: int = 1,
               output_dir: Optional[str] = None) -> pd.DataFrame:
    """p_L at a fixed small p while the measurement error rate q is scanned."""
    points = []
    for q in q_values:
        for L in sizes:
            noise = NoiseModel(p=p, q_override=q)
            points.append(ProtocolConfig(family=family, L=L, noise=noise, cycles=cycles,
                                         decoder=decoder, trials=trials, seed=seed,
                                         point=len(points)))
    frame = run_grid(points, output_dir=output_dir, workers=workers)
    frame["alpha"] = frame["q"] / p if p > 0 else float("inf")
    return frame


def tolerated_rate(frame: pd.DataFrame, by: str = "q", rate: str = "p_L") -> float:
    """Largest ``by`` value at which p_L does not grow with L; nan if none."""
    best = float("nan")
    for value, group in frame.groupby(by):
        curve = group.sort_values("L")[rate].to_numpy()
        if len(curve) > 1 and (curve[1:] <= curve[:-1]).all():
            best = value if math.isnan(best) else max(best, value)
    return float(best)
