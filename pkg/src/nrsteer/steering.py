"""End-to-end steering: drive the numerical range of U over the origin.

Given a unitary U whose numerical range misses 0, the planner

1. reads the angular speeds each basis weight would impart from the squared
   moduli of the eigenvector entries (the speed profile),
2. targets the arc gap wider than π (the certificate that 0 is outside) and
   picks the one-hot weight vector and rotation direction that close that gap
   fastest at first order,
3. scans and bisects t for the first time 0 enters W(U·V(t)^±), using the
   support-function membership test, and
4. reports the minimal time together with the perturbation cost
   ‖1 − V(t*)‖∞ = 2·max_i |sin(p_i t*/2)|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import RELAXED_UNITARITY_TOL, EigenSystem, check_unitary, unitary_eig
from .numrange import (
    ANGLES_DECISION,
    BOUNDARY_WITHIN_TOL,
    INSIDE,
    OUTSIDE,
    contains_zero_general,
    contains_zero_unitary,
)
from .perturb import CCW, CW, PerturbationGenerator, perturbed_unitary

SCAN_POINTS = 256  # coarse grid resolution ahead of the bisection

REACHED_INTERIOR = "reached_interior"
REACHED_BOUNDARY = "reached_boundary"
NOT_REACHED = "not_reached_within_horizon"

__all__ = [
    "REACHED_INTERIOR",
    "REACHED_BOUNDARY",
    "NOT_REACHED",
    "NothingToSteerError",
    "SteeringPlan",
    "speed_profile",
    "select_generator",
    "min_time_search",
    "perturbation_cost",
    "plan",
]


class NothingToSteerError(ValueError):
    """The origin already lies in the numerical range."""


@dataclass(frozen=True)
class SteeringPlan:
    """Chosen generator, minimal time and cost for steering 0 into the range."""

    p: np.ndarray
    direction: str
    t_star: float | None
    perturbation_norm: float | None
    verdict: str
    target_gap: tuple[int, int]


def speed_profile(system: EigenSystem) -> np.ndarray:
    """Row-stochastic matrix S[j, i] = |⟨i|x_j⟩|² of first-order speeds.

    Row j follows the ccw eigenvalue order; column i is the computational
    basis index; S[j, i] is the angular speed of eigenvalue j under the
    one-hot weight vector e_i.  S is doubly stochastic because the
    eigenvectors form a unitary matrix.
    """
    return np.abs(system.vectors.T) ** 2


def _wide_gap_pair(system: EigenSystem) -> tuple[int, int]:
    """Indices (gap start, gap end ccw) of the arc gap wider than π."""
    reps = system.representatives()
    args = np.angle(reps)
    order = np.argsort(args, kind="stable")
    sorted_args = args[order]
    gaps = np.diff(np.concatenate([sorted_args, [sorted_args[0] + 2 * np.pi]]))
    k = int(np.argmax(gaps))
    start_group = order[k]
    end_group = order[(k + 1) % len(order)]
    return system.groups[start_group][0], system.groups[end_group][0]


def select_generator(
    system: EigenSystem, profile: np.ndarray
) -> tuple[PerturbationGenerator, tuple[int, int]]:
    """One-hot weight vector and direction closing the certifying gap fastest.

    The gap from eigenvalue a ccw to eigenvalue b shrinks at first order at
    rate S[a,i] − S[b,i] under ccw rotation with weight e_i (the sign flips
    for cw), so the basis index with the largest absolute row difference is
    chosen and the sign dictates the direction.  Ties resolve to the lowest
    basis index.
    """
    if contains_zero_unitary(system) != OUTSIDE:
        raise NothingToSteerError("nothing to steer: 0 already lies in the numerical range")
    a, b = _wide_gap_pair(system)
    diff = profile[a] - profile[b]
    best = int(np.argmax(np.abs(diff)))
    direction = CCW if diff[best] > 0 else CW
    p = np.zeros(system.dim)
    p[best] = 1.0
    return PerturbationGenerator(p=p, direction=direction), (a, b)


def min_time_search(
    u: np.ndarray,
    gen: PerturbationGenerator,
    t_horizon: float,
    tol_t: float,
    n_angles: int = ANGLES_DECISION,
) -> tuple[float | None, str]:
    """First time within the horizon at which 0 enters W(U·V(t)^±).

    Coarse scan on a grid of step ``t_horizon/256``, then bisection of the
    first sign change down to width ``tol_t``.  Returns ``(t_star, verdict)``
    with ``t_star = None`` when the origin is never reached.
    """
    if t_horizon <= 0:
        raise ValueError(f"t_horizon must be positive, got {t_horizon}")
    if tol_t <= 0:
        raise ValueError(f"tol_t must be positive, got {tol_t}")

    def verdict_at(t: float) -> str:
        return contains_zero_general(perturbed_unitary(u, gen, t), n_angles)

    grid = np.linspace(0.0, t_horizon, SCAN_POINTS + 1)
    hit = None
    for k, t in enumerate(grid):
        v = verdict_at(float(t))
        if v != OUTSIDE:
            hit = (k, v)
            break
    if hit is None:
        return None, NOT_REACHED
    k, v = hit
    if k == 0:
        return 0.0, REACHED_INTERIOR if v == INSIDE else REACHED_BOUNDARY

    lo, hi = float(grid[k - 1]), float(grid[k])
    hi_verdict = v
    while hi - lo > tol_t:
        mid = (lo + hi) / 2
        v_mid = verdict_at(mid)
        if v_mid == OUTSIDE:
            lo = mid
        else:
            hi, hi_verdict = mid, v_mid
    return hi, REACHED_INTERIOR if hi_verdict == INSIDE else REACHED_BOUNDARY


def perturbation_cost(p: np.ndarray, t: float) -> float:
    """Closed form of ‖1 − V(t)‖∞ for the diagonal family: 2·max_i|sin(p_i t/2)|."""
    return float(2.0 * np.abs(np.sin(np.asarray(p) * t / 2)).max())


def plan(
    u: np.ndarray,
    t_horizon: float = 2 * np.pi,
    tol_t: float = 1e-3,
    unitarity_tol: float = RELAXED_UNITARITY_TOL,
    n_angles: int = ANGLES_DECISION,
) -> SteeringPlan:
    """Full pipeline: eigensystem → speed profile → generator → minimal time."""
    u = check_unitary(u, tol=unitarity_tol)
    system = unitary_eig(u, unitarity_tol=unitarity_tol)
    gen, gap = select_generator(system, speed_profile(system))
    t_star, verdict = min_time_search(u, gen, t_horizon, tol_t, n_angles=n_angles)
    norm = perturbation_cost(gen.p, t_star) if t_star is not None else None
    return SteeringPlan(
        p=gen.p,
        direction=gen.direction,
        t_star=t_star,
        perturbation_norm=norm,
        verdict=verdict,
        target_gap=gap,
    )
