import logging

from sweepdecoder.decoder import DecoderConfig
from sweepdecoder.experiment import ProtocolConfig, estimate_logical_rate
from sweepdecoder.noise import NoiseModel

if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO)

    for L in (4, 6, 8):
        cfg = ProtocolConfig(family="rhombic-open", L=L, noise=NoiseModel(p=0.02), cycles=16,
                             decoder=DecoderConfig(), trials=200, seed=1)
        estimate = estimate_logical_rate(cfg, workers=2)
        print(f"L={L}: p_L={estimate.p_L:.4f} [{estimate.ci_low:.4f}, {estimate.ci_high:.4f}] {estimate.modes}")
