"""Numerical ranges of complex matrices and diagonal-phase steering of
unitary spectra."""

import os as _os

# NUMRANGE_THREADS caps internal (BLAS) parallelism; it must land in the
# environment before numpy loads its BLAS, hence before any submodule import.
_cap = _os.environ.get("NUMRANGE_THREADS")
if _cap:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _cap)
del _os, _cap

from .linalg import (  # noqa: E402
    BranchCutWarning,
    EigendecompositionError,
    EigenSystem,
    EigenspaceIsometry,
    GeneratorReduction,
    ZeroPerturbationError,
    check_hermitian,
    check_unitary,
    geodesic_point,
    herm_eig,
    principal_log_unitary,
    reduce_to_generator,
    schatten_inf,
    schatten_norm,
    unitary_eig,
    unitary_exp_herm,
)
from .numrange import (  # noqa: E402
    RangePolygon,
    SupportProfile,
    contains_zero_general,
    contains_zero_unitary,
    distance_to_zero,
    support_function,
    support_profile,
    support_values,
    unitary_range_polygon,
)
from .perturb import (  # noqa: E402
    CompressedPerturbation,
    PerturbationGenerator,
    StationarityCertificate,
    TrackingCollisionError,
    TrajectoryRecord,
    compress_generator,
    exact_velocity,
    first_order_eigenvalue,
    perturbation_matrix,
    perturbed_unitary,
    simple_velocity,
    stationarity_certificate,
    track_trajectory,
)
from .steering import (  # noqa: E402
    NothingToSteerError,
    SteeringPlan,
    min_time_search,
    perturbation_cost,
    plan,
    select_generator,
    speed_profile,
)
from .testkit import (  # noqa: E402
    Fixture,
    brute_membership,
    degenerate_fixture,
    fd_velocity,
    haar_unitary,
)

__version__ = "0.1.0"
