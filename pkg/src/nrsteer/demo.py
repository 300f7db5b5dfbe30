"""Bundled demonstration instance with externally recorded reference values.

A 3×3 unitary (printed at 6-decimal precision, hence the relaxed unitarity
tolerance) whose numerical range misses the origin, together with the known
outcomes of the steering pipeline on it: the squared-moduli speed profile,
the expected one-hot weight vector and rotation direction, the window for
the minimal steering time, and a push time at which the origin is strictly
inside the perturbed range.  The ``example`` CLI command re-derives and
checks all of these.
"""

from __future__ import annotations

import numpy as np

# 6-decimal source data: unitary only to ~1.3e-6
DEMO_UNITARITY_TOL = 1e-4

DEMO_MATRIX = np.array(
    [
        [0.267868 + 0.026891j, 0.752935 - 0.510663j, -0.314404 - 0.0313982j],
        [-0.83413 - 0.0693252j, 0.245915 - 0.275811j, 0.34174 - 0.214685j],
        [0.472125 + 0.0635826j, 0.0211772 - 0.18793j, 0.795835 - 0.322391j],
    ]
)

# squared moduli of the eigenvector entries, rows in ccw eigenvalue order
REFERENCE_SPEED_PROFILE = np.array(
    [
        [0.426542, 0.543517, 0.0299407],
        [0.0480551, 0.105588, 0.846357],
        [0.525403, 0.350895, 0.123702],
    ]
)
REFERENCE_PROFILE_TOL = 1e-4

# two profile entries the reference data singles out
REFERENCE_FAST_ENTRY = 0.543517
REFERENCE_SLOW_ENTRY = 0.350895

REFERENCE_P = np.array([0.0, 1.0, 0.0])
REFERENCE_DIRECTION = "cw"

# window for the minimal steering time and a time with 0 strictly inside
REFERENCE_T_WINDOW = (1.40, 1.50)
REFERENCE_PUSH_T = 1.5
