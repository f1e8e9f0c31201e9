"""Published reference values for the default scenario grid.

Keys are ``(theta, xi, lam)`` for the window/gain tables and
``(theta, xi, model)`` for the levers table.  Window tuples follow the column
order K0.2, K0.4, K0.6, G, GS; ``None`` marks an unbounded window.  Levers
tuples are (dE, alpha) pairs for M/M fixed mu, M/D fixed mu, M/M searched mu
and M/D searched mu.
"""

COLUMNS = ("K0.2", "K0.4", "K0.6", "G", "GS")
KOPACH_COLUMNS = COLUMNS[:3]
SCENARIOS = ((0, 0), (0, 0.5), (1.5, 0), (1.5, 0.5))
LAMBDAS = (18, 19, 19.9, 19.99)
LEVER_GROUPS = ("mm_fixed", "md_fixed", "mm_search", "md_search")

MATCH_RATE_PERCENT = 44.0
MEAN_LOSS_PERCENT = 0.84
JOINT_GAIN_PERCENT = {"theta_zero": 0.0, "theta_positive": 4.0}

WINDOWS_MM = {
    (0, 0, 18): (None, None, None, 60, None),
    (0, 0, 19): (None, 280, 160, 40, 200),
    (0, 0, 19.9): (180, 100, 80, 40, 80),
    (0, 0, 19.99): (160, 100, 80, 40, 80),
    (0, 0.5, 18): (None, None, None, 60, None),
    (0, 0.5, 19): (None, 280, 160, 40, 200),
    (0, 0.5, 19.9): (180, 100, 80, 40, 80),
    (0, 0.5, 19.99): (160, 100, 80, 40, 80),
    (1.5, 0, 18): (None, None, None, 200, None),
    (1.5, 0, 19): (None, None, None, 100, None),
    (1.5, 0, 19.9): (320, 200, 160, 60, 160),
    (1.5, 0, 19.99): (260, 180, 140, 60, 140),
    (1.5, 0.5, 18): (None, None, None, None, None),
    (1.5, 0.5, 19): (None, None, None, 160, None),
    (1.5, 0.5, 19.9): (460, 280, 200, 80, 200),
    (1.5, 0.5, 19.99): (340, 220, 180, 60, 180),
}

WINDOWS_MD = {
    (0, 0, 18): (None, None, None, 60, None),
    (0, 0, 19): (None, None, 160, 40, 200),
    (0, 0, 19.9): (120, 80, 60, 20, 60),
    (0, 0, 19.99): (100, 80, 60, 20, 60),
    (0, 0.5, 18): (None, None, None, 60, None),
    (0, 0.5, 19): (None, None, 160, 40, 200),
    (0, 0.5, 19.9): (120, 80, 60, 20, 60),
    (0, 0.5, 19.99): (100, 80, 60, 20, 60),
    (1.5, 0, 18): (None, None, None, 160, None),
    (1.5, 0, 19): (None, None, None, 80, None),
    (1.5, 0, 19.9): (260, 160, 120, 40, 120),
    (1.5, 0, 19.99): (180, 120, 100, 40, 100),
    (1.5, 0.5, 18): (None, None, None, None, None),
    (1.5, 0.5, 19): (None, None, None, 160, None),
    (1.5, 0.5, 19.9): (380, 220, 160, 60, 160),
    (1.5, 0.5, 19.99): (240, 160, 120, 40, 120),
}

GAINS_MM = {
    (0, 0, 18): (0.0, 0.0, 0.0, 0.0, 0.0),
    (0, 0, 19): (0.0, 0.0, 0.0, 0.46, 0.0),
    (0, 0, 19.9): (0.56, 1.93, 4.02, 21.19, 3.02),
    (0, 0, 19.99): (2.23, 6.18, 12.07, 42.5, 9.08),
    (0, 0.5, 18): (0.0, 0.0, 0.0, 0.0, 0.0),
    (0, 0.5, 19): (0.0, 0.0, 0.0, 0.2, 0.0),
    (0, 0.5, 19.9): (0.26, 0.84, 1.59, 8.49, 1.46),
    (0, 0.5, 19.99): (1.04, 2.63, 4.57, 15.41, 4.27),
    (1.5, 0, 18): (0.0, 0.0, 0.0, 0.0, 0.0),
    (1.5, 0, 19): (0.0, 0.0, 0.0, 0.02, 0.0),
    (1.5, 0, 19.9): (0.22, 1.09, 2.57, 16.67, 2.05),
    (1.5, 0, 19.99): (1.57, 4.91, 10.03, 36.67, 7.71),
    (1.5, 0.5, 18): (0.0, 0.0, 0.0, 0.0, 0.0),
    (1.5, 0.5, 19): (0.0, 0.0, 0.0, 0.0, 0.0),
    (1.5, 0.5, 19.9): (0.04, 0.29, 0.72, 5.48, 0.73),
    (1.5, 0.5, 19.99): (0.54, 1.74, 3.31, 11.82, 3.2),
}

GAINS_MD = {
    (0, 0, 18): (0.0, 0.0, 0.0, 0.0, 0.0),
    (0, 0, 19): (0.0, 0.0, 0.0, 0.06, 0.0),
    (0, 0, 19.9): (0.22, 0.86, 1.86, 13.24, 1.4),
    (0, 0, 19.99): (2.3, 6.06, 11.59, 42.6, 8.84),
    (0, 0.5, 18): (0.0, 0.0, 0.0, 0.0, 0.0),
    (0, 0.5, 19): (0.0, 0.0, 0.0, 0.03, 0.0),
    (0, 0.5, 19.9): (0.1, 0.38, 0.75, 5.59, 0.69),
    (0, 0.5, 19.99): (1.07, 2.59, 4.42, 15.65, 4.18),
    (1.5, 0, 18): (0.0, 0.0, 0.0, 0.0, 0.0),
    (1.5, 0, 19): (0.0, 0.0, 0.0, 0.0, 0.0),
    (1.5, 0, 19.9): (0.06, 0.39, 1.02, 10.26, 0.84),
    (1.5, 0, 19.99): (1.8, 5.14, 10.11, 38.14, 7.84),
    (1.5, 0.5, 18): (0.0, 0.0, 0.0, 0.0, 0.0),
    (1.5, 0.5, 19): (0.0, 0.0, 0.0, 0.0, 0.0),
    (1.5, 0.5, 19.9): (0.01, 0.09, 0.25, 3.51, 0.27),
    (1.5, 0.5, 19.99): (0.69, 1.93, 3.49, 12.87, 3.38),
}

LEVERS = {
    (0, 0, 'K0.2'): (0.03, 0.87, 0.2, 0.7, 0.13, 0.82, 0.11, 0.79),
    (0, 0, 'K0.4'): (0.12, 0.88, 0.15, 0.87, 0.21, 0.83, 0.15, 0.82),
    (0, 0, 'K0.6'): (0.2, 0.87, 0.21, 0.79, 0.29, 0.85, 0.21, 0.81),
    (0, 0, 'G'): (0.97, 0.81, 0.43, 0.73, 0.81, 0.84, 0.85, 0.68),
    (0, 0, 'GS'): (0.29, 0.8, 0.06, 0.92, 0.15, 0.87, 0.2, 0.86),
    (0, 0.5, 'K0.2'): (0.05, 0.87, 0.05, 0.84, 0.06, 0.82, 0.05, 0.79),
    (0, 0.5, 'K0.4'): (0.07, 0.88, 0.07, 0.87, 0.09, 0.83, 0.06, 0.82),
    (0, 0.5, 'K0.6'): (0.09, 0.87, 0.09, 0.79, 0.12, 0.85, 0.09, 0.81),
    (0, 0.5, 'G'): (0.43, 0.81, 0.19, 0.73, 0.36, 0.84, 0.38, 0.68),
    (0, 0.5, 'GS'): (0.14, 0.8, 0.03, 0.92, 0.07, 0.87, 0.1, 0.86),
    (1.5, 0, 'K0.2'): (0.01, 0.99, 0.01, 0.97, 0.02, 0.98, 0.02, 0.97),
    (1.5, 0, 'K0.4'): (0.01, 0.99, 0.02, 0.98, 0.02, 0.98, 0.02, 0.98),
    (1.5, 0, 'K0.6'): (0.01, 0.99, 0.02, 0.98, 0.02, 0.99, 0.02, 0.99),
    (1.5, 0, 'G'): (0.13, 0.96, 0.06, 0.98, 0.09, 0.97, 0.16, 0.99),
    (1.5, 0, 'GS'): (0.05, 0.96, 0.0, 1.0, 0.01, 0.99, 0.04, 0.97),
    (1.5, 0.5, 'K0.2'): (0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0),
    (1.5, 0.5, 'K0.4'): (0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0),
    (1.5, 0.5, 'K0.6'): (0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0),
    (1.5, 0.5, 'G'): (0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.02, 0.99),
    (1.5, 0.5, 'GS'): (0.0, 0.99, 0.0, 1.0, 0.0, 1.0, 0.0, 0.99),
}
