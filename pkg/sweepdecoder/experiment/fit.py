"""Fit of the threshold decay p_th(N) towards the sustainable threshold."""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Tuple

import numpy as np
from lmfit import Minimizer, Parameters

from sweepdecoder.errors import ConfigError, FitError

logger = logging.getLogger(__name__)

P_SUS_STARTS = (0.05, 0.1, 0.2, 0.4, 0.7)
GAMMA_STARTS = (0.3, 0.6, 1.0, 1.5, 2.5)
GAMMA_BOUNDS = (1e-3, 10.0)


@dataclass
class ThresholdFit:
    p_sus: float
    gamma: float
    p_th1: float
    identifiable: bool = True
    diagnostics: dict = field(default_factory=dict)

    def predict(self, cycles) -> np.ndarray:
        return decay_model(np.asarray(cycles, dtype=float), self.p_sus, self.gamma, self.p_th1)

    def to_dict(self) -> dict:
        return {"p_sus": self.p_sus, "gamma": None if np.isnan(self.gamma) else self.gamma,
                "p_th1": self.p_th1, "identifiable": self.identifiable,
                "diagnostics": self.diagnostics}


def decay_model(cycles, p_sus, gamma, p_th1):
    return p_sus * (1.0 - (1.0 - p_th1 / p_sus) * cycles ** (-gamma))


def _residual(params, cycles, data, p_th1):
    return decay_model(cycles, params["p_sus"].value, params["gamma"].value, p_th1) - data


def _params(p_sus, gamma, p_th1) -> Parameters:
    params = Parameters()
    params.add("p_sus", value=p_sus, min=1e-9, max=p_th1)
    params.add("gamma", value=gamma, min=GAMMA_BOUNDS[0], max=GAMMA_BOUNDS[1])
    return params


def fit_sustainable(points: Iterable[Tuple[float, float]]) -> ThresholdFit:
    """Least-squares fit of (p_sus, gamma) to measured (N, p_th(N)) points.

    p_th(1) is fixed by the N=1 measurement (averaged if repeated). The
    fit starts from every node of a coarse (p_sus, gamma) grid and keeps
    the best local optimum, so the result depends on the data only.
    """
    data = np.array([(float(n), float(p)) for n, p in points], dtype=float).reshape(-1, 2)
    cycles, values = data[:, 0], data[:, 1]
    distinct = np.unique(cycles)
    if len(distinct) < 4 or 1.0 not in distinct:
        raise ConfigError(f"need at least 4 distinct N including N=1, got {distinct.tolist()}")
    if (cycles < 1).any() or (values <= 0).any():
        raise ConfigError("N must be at least 1 and thresholds positive")
    p_th1 = float(values[cycles == 1.0].mean())

    if np.ptp(values) <= 1e-12 * max(abs(values).max(), 1.0):
        logger.warning("p_th(N) is constant at %g, decay exponent is not identifiable", p_th1)
        return ThresholdFit(p_sus=p_th1, gamma=float("nan"), p_th1=p_th1, identifiable=False,
                            diagnostics={"reason": "constant data"})

    best = None
    for frac, gamma in itertools.product(P_SUS_STARTS, GAMMA_STARTS):
        minner = Minimizer(_residual, _params(frac * p_th1, gamma, p_th1),
                           fcn_args=(cycles, values, p_th1))
        result = minner.minimize(method="leastsq")
        if np.isfinite(result.chisqr) and (best is None or result.chisqr < best.chisqr):
            best = result
    if best is None:
        raise FitError("no start point of the threshold fit converged",
                       diagnostics={"points": data.tolist()})

    refined = Minimizer(_residual, best.params, fcn_args=(cycles, values, p_th1)).minimize(method="leastsq")
    diagnostics = {"chisqr": float(refined.chisqr), "nfev": int(refined.nfev),
                   "message": str(refined.message), "success": bool(refined.success)}
    if not refined.success or not np.isfinite(refined.chisqr):
        raise FitError(f"threshold fit did not converge: {refined.message}", diagnostics=diagnostics)
    if refined.covar is not None:
        diagnostics["covariance"] = np.asarray(refined.covar).tolist()
        diagnostics["stderr"] = {name: refined.params[name].stderr for name in ("p_sus", "gamma")}

    p_sus = float(refined.params["p_sus"].value)
    gamma = float(refined.params["gamma"].value)
    identifiable = bool(GAMMA_BOUNDS[0] * 1.01 < gamma < GAMMA_BOUNDS[1] * 0.99)
    if not identifiable:
        logger.warning("decay exponent %g sits on its bound", gamma)
    logger.info("p_sus=%.4g gamma=%.3g p_th(1)=%.4g", p_sus, gamma, p_th1)
    return ThresholdFit(p_sus=p_sus, gamma=gamma, p_th1=p_th1, identifiable=identifiable,
                        diagnostics=diagnostics)
