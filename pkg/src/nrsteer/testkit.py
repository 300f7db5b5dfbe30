"""Generators and independent oracles for the property suites.

The membership oracle here intentionally re-implements the support sweep from
the raw matrix instead of calling into :mod:`nrsteer.numrange`, so a bug in
the production path cannot confirm itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import CLUSTER_TOL, check_unitary, unitary_eig
from .perturb import PerturbationGenerator, TrajectoryRecord, track_trajectory

__all__ = [
    "Fixture",
    "haar_unitary",
    "degenerate_fixture",
    "fd_velocity",
    "brute_membership",
]


def _as_rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def haar_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-distributed d×d unitary: complex Ginibre draw, QR, phase fixing."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    rng = _as_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))[None, :]


@dataclass(frozen=True)
class Fixture:
    """A unitary with a known repeated eigenvalue and a matching weight vector.

    ``p`` is supported on ``support_size`` coordinates; when
    ``support_size < multiplicity`` the eigenvalue must stay put under
    U·V(t) with residual multiplicity at least the difference.
    """

    label: str
    matrix: np.ndarray
    eigenvalue: complex
    multiplicity: int
    p: np.ndarray
    support_size: int

    def __post_init__(self):
        check_unitary(self.matrix, tol=1e-10)
        system = unitary_eig(self.matrix)
        sizes = [
            len(g)
            for g in system.groups
            if abs(system.values[g[0]] - self.eigenvalue) <= CLUSTER_TOL
        ]
        if sizes != [self.multiplicity]:
            raise ValueError(
                f"fixture {self.label!r}: recomputed multiplicity {sizes} does not "
                f"match the declared {self.multiplicity}"
            )
        if int(np.sum(self.p > 0)) != self.support_size:
            raise ValueError(f"fixture {self.label!r}: weight support size mismatch")


def _separated_angles(rng: np.random.Generator, count: int, min_gap: float) -> np.ndarray:
    """Angles in (−π, π] with pairwise circular separation at least ``min_gap``."""
    while True:
        angles = rng.uniform(-np.pi, np.pi, size=count)
        diffs = np.abs(angles[:, None] - angles[None, :])
        circ = np.minimum(diffs, 2 * np.pi - diffs)
        np.fill_diagonal(circ, np.inf)
        if circ.min() >= min_gap:
            return angles


def degenerate_fixture(d: int, k: int, l: int, seed=None) -> Fixture:
    """Unitary with an exactly k-fold eigenvalue plus an l-coordinate weight.

    Built as X·diag(λ,…,λ,μ₁,…)·X† with a Haar-random eigenbasis X and well
    separated distinct eigenvalues; requires 1 ≤ l < k ≤ d.
    """
    if not (1 <= l < k <= d):
        raise ValueError(f"need 1 <= l < k <= d, got d={d}, k={k}, l={l}")
    rng = _as_rng(seed)
    basis = haar_unitary(d, rng)
    angles = _separated_angles(rng, d - k + 1, min_gap=0.3)
    values = np.concatenate([np.full(k, np.exp(1j * angles[0])), np.exp(1j * angles[1:])])
    matrix = (basis * values[None, :]) @ basis.conj().T

    support = rng.choice(d, size=l, replace=False)
    weights = rng.uniform(0.5, 1.5, size=l)
    p = np.zeros(d)
    p[support] = weights / weights.sum()

    return Fixture(
        label=f"degenerate(d={d},k={k},l={l})",
        matrix=matrix,
        eigenvalue=complex(np.exp(1j * angles[0])),
        multiplicity=k,
        p=p,
        support_size=l,
    )


def fd_velocity(
    u: np.ndarray,
    gen: PerturbationGenerator,
    t: float,
    h: float,
    max_step: float = 0.05,
) -> np.ndarray:
    """Centered finite-difference eigenvalue velocities at time ``t``.

    Tracks the trajectory with ``t − h``, ``t``, ``t + h`` forced onto the
    grid and differences the matched paths; inherits the tracker's matching.
    """
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    if t - h < 0:
        raise ValueError(f"need t - h >= 0, got t={t}, h={h}")
    record = track_trajectory(
        u,
        gen,
        t_end=t + h,
        max_step=max_step,
        checkpoints=(t - h, t, t + h),
    )
    i_minus = _grid_index(record, t - h)
    i_plus = _grid_index(record, t + h)
    return (record.paths[:, i_plus] - record.paths[:, i_minus]) / (2 * h)


def _grid_index(record: TrajectoryRecord, t: float) -> int:
    idx = int(np.argmin(np.abs(record.t_grid - t)))
    if abs(record.t_grid[idx] - t) > 1e-12:
        raise RuntimeError(f"checkpoint {t} missing from the tracked grid")
    return idx


def brute_membership(a: np.ndarray, n_dense: int = 16384) -> str:
    """Dense-angle membership oracle for 0 ∈ W(A), from the raw matrix only.

    Deliberately independent duplicate of the production support sweep (same
    mathematics, separate code path) at a 8x denser default grid.
    """
    a = np.asarray(a, dtype=np.complex128)
    angles = np.arange(n_dense) * (2 * np.pi / n_dense)
    phases = np.exp(-1j * angles)
    stack = phases[:, None, None] * a[None, :, :]
    stack = (stack + np.conj(np.swapaxes(stack, -1, -2))) / 2
    h_min = float(np.linalg.eigvalsh(stack)[:, -1].min())
    scale = float(np.linalg.svd(a, compute_uv=False)[0]) if a.size else 0.0
    tol = 1e-9 * max(scale, 1e-300)
    if h_min < -tol:
        return "outside"
    if h_min > tol:
        return "inside"
    return "boundary_within_tol"
