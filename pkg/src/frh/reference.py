"""Published reference values that the acceptance suite reproduces."""

# first local minimum of A(t), keyed by beta
T_BETA = {
    0.80: 14.60, 0.82: 27.56, 0.84: 27.13, 0.86: 27.23, 0.88: 39.83,
    0.90: 40.71, 0.92: 65.28, 0.94: 90.81, 0.96: 154.07, 0.98: 356.19,
}

BETA_C = 0.672

PHASE_CRITICAL = {0.8: [25.53, 31.21, 39.91, 48.24, 55.06], 0.6: [13.87]}

BRANCH_INDEX = {0.8: 3, 0.6: 1}

# K(3,3) radii of convergence
RADIUS = {0.1: 10.0508, 0.3: 5.1655, 0.5: 5.6875, 0.7: 7.0081, 0.9: 10.2901}

# ||u_{n+1}|| / ||u_n|| keyed by (n+1, n) -> t -> (beta 0.2, 0.4, 0.6, 0.8)
RATIO_BETAS = (0.2, 0.4, 0.6, 0.8)
RATIO_TS = (0.01, 0.21, 0.41, 0.61, 0.81)
RATIOS = {
    (6, 5): {
        0.01: (34.98, 10.31, 2.76, 0.70),
        0.21: (64.31, 34.85, 17.12, 7.94),
        0.41: (73.51, 45.55, 25.58, 13.56),
        0.61: (79.59, 53.39, 32.47, 18.64),
        0.81: (84.24, 59.81, 38.49, 23.38),
    },
    (7, 6): {
        0.01: (53.42, 15.23, 3.92, 0.94),
        0.21: (98.21, 51.48, 24.38, 10.79),
        0.41: (112.27, 67.27, 36.42, 18.43),
        0.61: (121.55, 78.86, 46.22, 25.33),
        0.81: (128.64, 88.33, 54.79, 31.78),
    },
    (8, 7): {
        0.01: (94.71, 26.26, 6.57, 1.54),
        0.21: (174.12, 88.76, 40.85, 17.58),
        0.41: (199.04, 116.00, 61.03, 30.02),
        0.61: (215.51, 135.98, 77.46, 41.25),
        0.81: (228.08, 152.32, 91.83, 51.75),
    },
    (9, 8): {
        0.01: (127.74, 34.57, 8.44, 1.93),
        0.21: (234.84, 116.84, 52.45, 22.01),
        0.41: (268.46, 152.69, 78.36, 37.59),
        0.61: (290.66, 178.99, 99.45, 51.65),
        0.81: (307.62, 200.49, 117.90, 64.81),
    },
}


def ratio_reference(beta: float, t: float, pair) -> float:
    return RATIOS[tuple(pair)][t][RATIO_BETAS.index(beta)]
