"""Diagonal-phase perturbation of a unitary matrix and its spectral motion.

The perturbation family is V(t) = exp(i·t·diag(p)) for a probability vector p
(conjugated for clockwise rotation), applied as U·V(t).  First-order angular
speeds of the eigenvalues are the diagonal weights of the eigenvectors
(simple case) or the eigenvalues of the eigenspace-compressed weight matrix
(degenerate case).  Exact trajectories are produced by re-diagonalizing
U·V(t) on an adaptive grid and matching eigenvalues between steps by a
minimum-cost assignment on unit-circle arc distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .linalg import (
    CLUSTER_TOL,
    UNITARITY_TOL,
    EigenSystem,
    EigenspaceIsometry,
    check_unitary,
    unitary_eig,
)

CCW = "ccw"
CW = "cw"

PROB_SUM_TOL = 1e-12
STATIONARY_TOL = 1e-12
MIN_TRACK_STEP = 1e-12
MAX_ARC_PER_STEP = np.pi / 8
AMBIGUITY_RATIO = 2.0
AMBIGUITY_FLOOR = 1e-12

__all__ = [
    "CCW",
    "CW",
    "STATIONARY_TOL",
    "PerturbationGenerator",
    "CompressedPerturbation",
    "StationarityCertificate",
    "TrajectoryRecord",
    "TrackingCollisionError",
    "perturbation_matrix",
    "perturbed_unitary",
    "simple_velocity",
    "first_order_eigenvalue",
    "compress_generator",
    "stationarity_certificate",
    "exact_velocity",
    "track_trajectory",
]


def _direction_sign(direction: str) -> float:
    if direction in (CCW, "counterclockwise"):
        return 1.0
    if direction in (CW, "clockwise"):
        return -1.0
    raise ValueError(f"unknown direction {direction!r}; expected 'ccw' or 'cw'")


@dataclass(frozen=True)
class PerturbationGenerator:
    """Probability vector p (defining diag(p)) plus a rotation direction."""

    p: np.ndarray
    direction: str = CCW

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("p must be a nonempty 1-d vector")
        if np.any(p < 0):
            raise ValueError("p must be nonnegative")
        if abs(p.sum() - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"p must sum to 1 within {PROB_SUM_TOL}, got {p.sum()!r}")
        object.__setattr__(self, "p", p)
        _direction_sign(self.direction)

    @property
    def sign(self) -> float:
        return _direction_sign(self.direction)


def perturbation_matrix(gen: PerturbationGenerator, t: float) -> np.ndarray:
    """The exactly-diagonal unitary V(t) = exp(±i·t·diag(p))."""
    return np.diag(np.exp(1j * gen.sign * gen.p * t))


def perturbed_unitary(u: np.ndarray, gen: PerturbationGenerator, t: float) -> np.ndarray:
    """U·V(t).  Multiplying by a diagonal phase scales the columns of U."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape[1] != gen.p.shape[0]:
        raise ValueError(f"dimension mismatch: U is {u.shape}, p has {gen.p.shape[0]} entries")
    return u * np.exp(1j * gen.sign * gen.p * t)[None, :]


def simple_velocity(x: np.ndarray, p: np.ndarray) -> float:
    """Angular speed Σ_i p_i |x_i|² of a nondegenerate eigenvalue."""
    x = np.asarray(x, dtype=np.complex128)
    p = np.asarray(p, dtype=np.float64)
    nrm = np.linalg.norm(x)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"x must be a unit vector, got norm {nrm!r}")
    return float(np.real(x.conj() @ (p * x)))


def first_order_eigenvalue(lam: complex, speed: float, t: float, direction: str = CCW) -> complex:
    """First-order position λ·exp(±i·speed·t) of a rotating eigenvalue."""
    return lam * np.exp(1j * _direction_sign(direction) * speed * t)


@dataclass(frozen=True)
class CompressedPerturbation:
    """diag(p) compressed into one eigenspace.

    ``speeds`` (ascending eigenvalues of the compression, all in [0, 1]) are
    the first-order angular speeds of the split; ``split_vectors`` maps the
    compression eigenvectors back into the full space.
    """

    matrix: np.ndarray
    speeds: np.ndarray
    modes: np.ndarray
    split_vectors: np.ndarray


def compress_generator(iso: EigenspaceIsometry, p: np.ndarray) -> CompressedPerturbation:
    """Compression I†·diag(p)·I of the weight matrix into an eigenspace."""
    p = np.asarray(p, dtype=np.float64)
    cols = iso.columns
    if cols.shape[1] == 1:
        # 1x1 case delegates to simple_velocity so both speed paths agree exactly
        s = simple_velocity(cols[:, 0], p)
        return CompressedPerturbation(
            matrix=np.array([[s + 0j]]),
            speeds=np.array([s]),
            modes=np.eye(1, dtype=np.complex128),
            split_vectors=cols.copy(),
        )
    q = cols.conj().T @ (p[:, None] * cols)
    q = (q + q.conj().T) / 2
    speeds, modes = np.linalg.eigh(q)
    return CompressedPerturbation(
        matrix=q, speeds=speeds, modes=modes, split_vectors=cols @ modes
    )


@dataclass(frozen=True)
class StationarityCertificate:
    """Outcome of the zero-speed test on one eigenspace."""

    stationary: bool
    min_speed: float
    witness: np.ndarray | None
    probe_residual: float | None


def stationarity_certificate(
    u: np.ndarray,
    iso: EigenspaceIsometry,
    p: np.ndarray,
    probe_t: float = 1.0,
    tol: float = STATIONARY_TOL,
) -> StationarityCertificate:
    """Decide whether the eigenvalue of ``iso`` stays fixed under U·V(t).

    Stationary iff the compressed weight matrix has a (numerically) zero
    eigenvalue; the witness I|v_min⟩ is then verified to be an eigenvector of
    U·V(probe_t) with the original eigenvalue.
    """
    comp = compress_generator(iso, p)
    min_speed = float(comp.speeds[0])
    if min_speed > tol:
        return StationarityCertificate(
            stationary=False, min_speed=min_speed, witness=None, probe_residual=None
        )
    witness = comp.split_vectors[:, 0]
    moved = perturbed_unitary(u, PerturbationGenerator(p=p), probe_t) @ witness
    residual = float(np.linalg.norm(moved - iso.eigenvalue * witness))
    return StationarityCertificate(
        stationary=True, min_speed=min_speed, witness=witness, probe_residual=residual
    )


def exact_velocity(lam: complex, x: np.ndarray, p: np.ndarray, direction: str = CCW) -> complex:
    """Instantaneous velocity ±i·λ·Σ_i p_i |x_i|² of an eigenvalue of U·V(t)."""
    x = np.asarray(x, dtype=np.complex128)
    p = np.asarray(p, dtype=np.float64)
    return _direction_sign(direction) * 1j * lam * float(np.real(x.conj() @ (p * x)))


class TrackingCollisionError(RuntimeError):
    """An eigenvalue crossing is too tight for the step control to resolve."""


@dataclass(frozen=True)
class TrajectoryRecord:
    """Index-matched eigenvalue paths of t ↦ U·V(t) over an adaptive grid.

    ``paths[j, k]`` is the j-th eigenvalue (initial ccw label) at ``t_grid[k]``;
    ``velocities`` the exact instantaneous velocities; ``unwrapped_args`` the
    continuously-unwrapped arguments, so monotonicity is visible directly.
    """

    t_grid: np.ndarray
    paths: np.ndarray
    velocities: np.ndarray
    unwrapped_args: np.ndarray

    @property
    def n_steps(self) -> int:
        return self.t_grid.shape[0]

    def speeds(self) -> np.ndarray:
        """|velocity| per path and step (equals the angular speed profile)."""
        return np.abs(self.velocities)


def _arc_distance_matrix(old: np.ndarray, new: np.ndarray) -> np.ndarray:
    """Pairwise |arg(new/old)| arc distances, shape (d, d)."""
    ratio = new[None, :] / old[:, None]
    return np.abs(np.angle(ratio))


DUPLICATE_TOL = 1e-11  # eigenvalues this close are interchangeable labels


def _has_duplicate(values: np.ndarray) -> np.ndarray:
    """Per entry: does another entry lie within DUPLICATE_TOL of it."""
    dist = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(dist, np.inf)
    return dist.min(axis=1) <= DUPLICATE_TOL


def _assignment_is_ambiguous(cost: np.ndarray, old: np.ndarray, new: np.ndarray) -> bool:
    """Two near-tied matching candidates (ratio < 2) for some eigenvalue.

    Ties among (numerically) coincident eigenvalues do not count: members of
    a degenerate cluster are interchangeable labels, so a split or a
    pass-through within DUPLICATE_TOL is matched arbitrarily and harmlessly.
    """
    d = cost.shape[0]
    if d < 2:
        return False
    for transpose, anchors, candidates in ((False, old, new), (True, new, old)):
        c = cost.T if transpose else cost
        skip = _has_duplicate(anchors)
        order = np.argsort(c, axis=1)
        i1, i2 = order[:, 0], order[:, 1]
        rows = np.arange(d)
        d1, d2 = c[rows, i1], c[rows, i2]
        distinct = np.abs(candidates[i1] - candidates[i2]) > DUPLICATE_TOL
        if np.any(~skip & distinct & (d1 > AMBIGUITY_FLOOR) & (d2 < AMBIGUITY_RATIO * d1)):
            return True
    return False


def _velocities(values: np.ndarray, vectors: np.ndarray, gen: PerturbationGenerator) -> np.ndarray:
    weights = gen.p[:, None] * np.abs(vectors) ** 2
    return gen.sign * 1j * values * weights.sum(axis=0)


def _adapt_cluster_bases(system: EigenSystem, p: np.ndarray) -> np.ndarray:
    """Rotate each degenerate cluster's basis to diagonalize the compression.

    Inside a cluster the eigenbasis is arbitrary; the compression eigenbasis
    is the one whose members carry the actual split speeds (ascending), so
    recorded velocities are the physical limits rather than basis artifacts.
    """
    vectors = system.vectors
    if all(len(g) == 1 for g in system.groups):
        return vectors
    adapted = vectors.copy()
    for g in system.groups:
        if len(g) > 1:
            block = vectors[:, list(g)]
            comp = block.conj().T @ (p[:, None] * block)
            comp = (comp + comp.conj().T) / 2
            _, modes = np.linalg.eigh(comp)
            adapted[:, list(g)] = block @ modes
    return adapted


def track_trajectory(
    u: np.ndarray,
    gen: PerturbationGenerator,
    t_end: float,
    max_step: float = 0.05,
    checkpoints: tuple[float, ...] = (),
    unitarity_tol: float = UNITARITY_TOL,
    cluster_tol: float = CLUSTER_TOL,
) -> TrajectoryRecord:
    """Track the eigenvalues of U·V(t) from t = 0 to ``t_end``.

    Each accepted step re-diagonalizes U·V(t) and matches the new eigenvalues
    to the previous ones by minimum-cost assignment on arc distance.  The step
    is halved whenever the cheapest matching is ambiguous or any eigenvalue
    moved more than π/8; underflow below 1e-12 raises
    :class:`TrackingCollisionError`.  ``checkpoints`` are forced onto the grid.
    """
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if max_step <= 0:
        raise ValueError(f"max_step must be positive, got {max_step}")
    u = check_unitary(u, tol=unitarity_tol)
    d = u.shape[0]
    if gen.p.shape[0] != d:
        raise ValueError("generator dimension does not match the matrix")

    marks = sorted({float(c) for c in checkpoints if 0.0 < float(c) <= t_end})
    system = unitary_eig(u, unitarity_tol=unitarity_tol, cluster_tol=cluster_tol)

    ts = [0.0]
    paths = [system.values]
    vels = [_velocities(system.values, _adapt_cluster_bases(system, gen.p), gen)]
    args0 = np.angle(system.values)
    args0 = np.where(args0 <= -np.pi, args0 + 2 * np.pi, args0)
    unwrapped = [args0]

    t = 0.0
    prev_vals = system.values
    step = max_step
    # re-diagonalization tolerance: V(t) phases keep unitarity at machine level
    eig_tol = max(unitarity_tol, 1e-9)

    while t < t_end - 1e-15:
        upcoming = next((m for m in marks if m > t + 1e-15), None)
        limit = min(t_end, upcoming) if upcoming is not None else t_end
        t_try = min(t + step, limit)

        moved = unitary_eig(
            perturbed_unitary(u, gen, t_try),
            unitarity_tol=eig_tol,
            cluster_tol=cluster_tol,
        )
        cost = _arc_distance_matrix(prev_vals, moved.values)
        rows, cols = linear_sum_assignment(cost)
        perm = np.empty(d, dtype=int)
        perm[rows] = cols
        movement = np.angle(moved.values[perm] / prev_vals)

        if (
            _assignment_is_ambiguous(cost, prev_vals, moved.values)
            or np.abs(movement).max() > MAX_ARC_PER_STEP
        ):
            step /= 2
            if step < MIN_TRACK_STEP:
                raise TrackingCollisionError(
                    f"tracking collision near t = {t_try:.6g}: eigenvalue crossing "
                    "too tight to resolve"
                )
            continue

        new_vals = moved.values[perm]
        new_vecs = _adapt_cluster_bases(moved, gen.p)[:, perm]
        ts.append(t_try)
        paths.append(new_vals)
        vels.append(_velocities(new_vals, new_vecs, gen))
        unwrapped.append(unwrapped[-1] + movement)
        prev_vals = new_vals
        t = t_try
        step = min(step * 2, max_step)

    return TrajectoryRecord(
        t_grid=np.array(ts),
        paths=np.array(paths).T,
        velocities=np.array(vels).T,
        unwrapped_args=np.array(unwrapped).T,
    )
