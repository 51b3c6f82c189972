from sweepdecoder.experiment.estimate import (
    CrossingEstimate, RateEstimate, find_crossing, wilson_interval,
)
from sweepdecoder.experiment.fit import ThresholdFit, decay_model, fit_sustainable
from sweepdecoder.experiment.protocol import ProtocolConfig, TrialOutcome, run_batch, run_trial
from sweepdecoder.experiment.runner import (
    CSV_COLUMNS, estimate_logical_rate, grid_points, run_grid, run_point, scan_alpha,
    tolerated_rate, write_summary,
)
