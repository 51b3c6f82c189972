# Published thresholds of the sweep decoder, as fractions.
RHOMBIC_P_TH1 = 0.215
RHOMBIC_P_SUS = 0.021
RHOMBIC_GAMMA = 1.06
RHOMBIC_P_TH_N1024 = 0.0217

CUBIC_P_SUS = 0.017
CUBIC_GAMMA = 0.92
CUBIC_PERFECT_WITH_DIRECTION_CHANGE = 0.155

CORRELATED_P_SUS = 0.008

MAX_P_AT_ZERO_Q = 0.029
MAX_Q_AT_ZERO_P = 0.08

# crossing tolerances for desk-scale lattice sizes
RHOMBIC_P_TH1_TOLERANCE = 0.025
CUBIC_PERFECT_TOLERANCE = 0.015
GAMMA_RANGE = (0.6, 1.6)
P_SUS_TOLERANCE = 0.004
