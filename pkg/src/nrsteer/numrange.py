"""Numerical range (field of values) computation.

Two complementary routes:

* unitary matrices: the range is the convex hull of the unit-circle spectrum,
  so membership of the origin reduces to an angular gap test on the
  eigenvalues;
* arbitrary complex matrices: a support-function sweep
  h(θ) = λ_max((e^{−iθ}A + e^{iθ}A†)/2) sampled on a uniform angle grid.

The two routes deliberately do not share eigendecomposition results, so one
can serve as an oracle for the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import EigenSystem, as_complex_matrix, herm_eig, schatten_inf

ANGLES_DISPLAY = 720    # default sweep resolution for figures
ANGLES_DECISION = 2048  # default sweep resolution for membership decisions
MEMBERSHIP_REL_TOL = 1e-9
BOUNDARY_GAP_TOL = 1e-10

INSIDE = "inside"
OUTSIDE = "outside"
ON_BOUNDARY = "on_boundary"
BOUNDARY_WITHIN_TOL = "boundary_within_tol"

__all__ = [
    "ANGLES_DISPLAY",
    "ANGLES_DECISION",
    "INSIDE",
    "OUTSIDE",
    "ON_BOUNDARY",
    "BOUNDARY_WITHIN_TOL",
    "SupportProfile",
    "RangePolygon",
    "support_function",
    "support_values",
    "support_profile",
    "unitary_range_polygon",
    "contains_zero_unitary",
    "contains_zero_general",
    "distance_to_zero",
]


@dataclass(frozen=True)
class SupportProfile:
    """Support function of W(A) sampled on a uniform angle grid.

    ``support_values[k]`` is h(angles[k]); ``boundary_points[k]`` is the
    Rayleigh quotient of the maximizing eigenvector, a point of ∂W(A) with
    outward normal e^{i·angles[k]}.
    """

    angles: np.ndarray
    support_values: np.ndarray
    boundary_points: np.ndarray


@dataclass(frozen=True)
class RangePolygon:
    """Convex polygon vertices in counterclockwise order."""

    vertices: np.ndarray


def _rotated_hermitian_parts(a: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Stack of (e^{−iθ}A + e^{iθ}A†)/2 for every θ, shape (n, d, d)."""
    phases = np.exp(-1j * angles)
    stack = phases[:, None, None] * a[None, :, :]
    return (stack + np.conj(np.swapaxes(stack, -1, -2))) / 2


def support_function(a: np.ndarray, theta: float) -> tuple[float, np.ndarray]:
    """Support value h(θ) of W(A) and the witness unit vector attaining it."""
    a = as_complex_matrix(a)
    herm = (np.exp(-1j * theta) * a + np.exp(1j * theta) * a.conj().T) / 2
    w, x = herm_eig(herm, tol=1e-9)
    return float(w[-1]), x[:, -1]


def support_values(a: np.ndarray, n_angles: int) -> tuple[np.ndarray, np.ndarray]:
    """Angles and h(θ) over a uniform grid of [0, 2π), batched eigensolve."""
    if n_angles < 16:
        raise ValueError(f"need at least 16 angles, got {n_angles}")
    a = as_complex_matrix(a)
    angles = np.arange(n_angles) * (2 * np.pi / n_angles)
    h = np.linalg.eigvalsh(_rotated_hermitian_parts(a, angles))[:, -1]
    return angles, h


def support_profile(a: np.ndarray, n_angles: int = ANGLES_DISPLAY) -> SupportProfile:
    """Full boundary sweep with witnesses (slower than :func:`support_values`)."""
    if n_angles < 16:
        raise ValueError(f"need at least 16 angles, got {n_angles}")
    a = as_complex_matrix(a)
    angles = np.arange(n_angles) * (2 * np.pi / n_angles)
    w, x = np.linalg.eigh(_rotated_hermitian_parts(a, angles))
    h = w[:, -1]
    top = x[:, :, -1]
    points = np.einsum("ni,ij,nj->n", top.conj(), a, top)
    return SupportProfile(angles=angles, support_values=h, boundary_points=points)


def unitary_range_polygon(system: EigenSystem) -> RangePolygon:
    """Vertices of W(U): the distinct eigenvalues in counterclockwise order."""
    reps = system.representatives()
    args = np.angle(reps)
    args = np.where(args <= -np.pi, args + 2 * np.pi, args)
    return RangePolygon(vertices=reps[np.argsort(args, kind="stable")])


def _circular_gaps(args: np.ndarray) -> np.ndarray:
    """Arc gaps between consecutive sorted arguments, wrap gap included."""
    s = np.sort(args)
    return np.diff(np.concatenate([s, [s[0] + 2 * np.pi]]))


def contains_zero_unitary(system: EigenSystem, gap_tol: float = BOUNDARY_GAP_TOL) -> str:
    """Gap test: 0 lies in the spectral hull iff no arc gap exceeds π."""
    reps = system.representatives()
    if reps.shape[0] == 1:
        return OUTSIDE
    args = np.angle(reps)
    gap = float(_circular_gaps(args).max())
    if abs(gap - np.pi) <= gap_tol:
        return ON_BOUNDARY
    return OUTSIDE if gap > np.pi else INSIDE


def contains_zero_general(a: np.ndarray, n_angles: int = ANGLES_DECISION) -> str:
    """Membership of 0 in W(A) by the sampled support-function sign test."""
    a = as_complex_matrix(a)
    _, h = support_values(a, n_angles)
    h_min = float(h.min())
    tol = MEMBERSHIP_REL_TOL * max(schatten_inf(a), 1e-300)
    if h_min < -tol:
        return OUTSIDE
    if h_min > tol:
        return INSIDE
    return BOUNDARY_WITHIN_TOL


def distance_to_zero(a: np.ndarray, n_angles: int = ANGLES_DECISION) -> float:
    """Euclidean distance from the origin to W(A); 0 when the origin is inside."""
    _, h = support_values(a, n_angles)
    return max(0.0, float((-h).max()))
