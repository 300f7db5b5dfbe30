"""Seeded property suites for the spectral-motion rules.

Each runner draws deterministic random instances and checks one empirical
property of the perturbation machinery:

* ``velocity-budget``: the absolute eigenvalue velocities sum to 1 at every
  tracked step;
* ``monotone-rotation``: unwrapped eigenvalue arguments never move against
  the rotation direction;
* ``stationary-witness``: a zero-speed eigenspace member stays an eigenvector
  of U·V(t) at probe times spanning three decades;
* ``residual-multiplicity``: when the weight support is smaller than the
  eigenvalue multiplicity, enough multiplicity survives at every probe time;
* ``first-order-simple`` / ``first-order-split``: the first-order eigenvalue
  positions have a quadratic-in-t remainder, verified by t-halving.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .linalg import CLUSTER_TOL, unitary_eig
from .perturb import (
    CCW,
    PerturbationGenerator,
    compress_generator,
    first_order_eigenvalue,
    perturbed_unitary,
    simple_velocity,
    stationarity_certificate,
    track_trajectory,
)
from .testkit import degenerate_fixture, haar_unitary

BUDGET_TOL = 1e-8
MONOTONE_TOL = 1e-9
WITNESS_TOL = 1e-9
PROBE_TIMES = (0.1, 1.0, 10.0)
RATIO_WINDOW = (3.5, 4.5)
ERROR_FLOOR = 1e-10
LADDER_T0 = 0.1
LADDER_RUNGS = 24

__all__ = [
    "PropertyOutcome",
    "run_budget_and_monotonicity",
    "run_stationarity_and_multiplicity",
    "run_first_order_simple",
    "run_first_order_split",
    "run_all",
    "quadratic_remainder_ratio",
]


@dataclass
class PropertyOutcome:
    """Aggregated result of one property over a batch of random instances."""

    name: str
    trials: int
    failures: int = 0
    max_residual: float = 0.0
    details: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, residual: float, ok: bool, detail: str = "") -> None:
        self.max_residual = max(self.max_residual, residual)
        if not ok:
            self.failures += 1
            if detail:
                self.details.append(detail)


def _trial_dims(dims: tuple[int, ...], n: int) -> list[int]:
    return [dims[i % len(dims)] for i in range(n)]


def run_budget_and_monotonicity(
    seed: int,
    n_trials: int,
    dims: tuple[int, ...] = (2, 3, 4, 5, 6),
    t_end: float = 2.0,
    direction: str = CCW,
) -> tuple[PropertyOutcome, PropertyOutcome]:
    """Track Haar-random instances; check the speed budget and monotonicity."""
    rng = np.random.default_rng(seed)
    budget = PropertyOutcome(name="velocity-budget", trials=n_trials)
    mono = PropertyOutcome(name="monotone-rotation", trials=n_trials)
    sign = 1.0 if direction == CCW else -1.0
    for i, d in enumerate(_trial_dims(dims, n_trials)):
        u = haar_unitary(d, rng)
        gen = PerturbationGenerator(p=rng.dirichlet(np.ones(d)), direction=direction)
        record = track_trajectory(u, gen, t_end=t_end)

        budget_err = float(np.abs(np.abs(record.velocities).sum(axis=0) - 1.0).max())
        budget.record(budget_err, budget_err <= BUDGET_TOL, f"trial {i}: budget residual {budget_err:.3e}")

        drift = sign * np.diff(record.unwrapped_args, axis=1)
        worst = float(-drift.min()) if drift.size else 0.0
        mono.record(max(worst, 0.0), worst <= MONOTONE_TOL, f"trial {i}: backward step {worst:.3e}")
    return budget, mono


def run_stationarity_and_multiplicity(
    seed: int,
    n_fixtures: int,
    dims: tuple[int, ...] = (3, 4, 5, 6),
    probe_times: tuple[float, ...] = PROBE_TIMES,
) -> tuple[PropertyOutcome, PropertyOutcome]:
    """Degenerate fixtures with small weight support: witnesses plus counts."""
    rng = np.random.default_rng(seed)
    stationary = PropertyOutcome(name="stationary-witness", trials=n_fixtures)
    multiplicity = PropertyOutcome(name="residual-multiplicity", trials=n_fixtures)
    usable = [d for d in dims if d >= 2]
    for i in range(n_fixtures):
        d = usable[i % len(usable)]
        k = int(rng.integers(2, d + 1))
        l = int(rng.integers(1, k))
        fixture = degenerate_fixture(d, k, l, rng)
        system = unitary_eig(fixture.matrix)
        group = next(
            gi
            for gi, g in enumerate(system.groups)
            if abs(system.values[g[0]] - fixture.eigenvalue) <= CLUSTER_TOL
        )
        iso = system.isometry(group)

        worst_residual = 0.0
        min_count = fixture.multiplicity
        gen = PerturbationGenerator(p=fixture.p)
        for t in probe_times:
            cert = stationarity_certificate(fixture.matrix, iso, fixture.p, probe_t=t)
            if not cert.stationary:
                worst_residual = np.inf
                break
            worst_residual = max(worst_residual, cert.probe_residual)
            moved = unitary_eig(perturbed_unitary(fixture.matrix, gen, t), unitarity_tol=1e-9)
            count = int(np.sum(np.abs(moved.values - fixture.eigenvalue) <= CLUSTER_TOL))
            min_count = min(min_count, count)

        stationary.record(
            worst_residual,
            worst_residual <= WITNESS_TOL,
            f"fixture {i} ({fixture.label}): witness residual {worst_residual:.3e}",
        )
        want = fixture.multiplicity - fixture.support_size
        multiplicity.record(
            float(want - min_count),
            min_count >= want,
            f"fixture {i} ({fixture.label}): count {min_count} < {want}",
        )
    return stationary, multiplicity


def _nearest_eigenvalues(u: np.ndarray, gen: PerturbationGenerator, t: float) -> np.ndarray:
    return unitary_eig(perturbed_unitary(u, gen, t), unitarity_tol=1e-9).values


def quadratic_remainder_ratio(
    errors: list[tuple[float, float]],
    window: tuple[float, float] = RATIO_WINDOW,
    floor: float = ERROR_FLOOR,
) -> tuple[float, float] | None:
    """First (largest-t) halving rung whose error ratio sits in the window.

    ``errors`` holds (t, error) pairs down a t-halving ladder.  Returns
    ``(t, ratio)`` for the largest t where both error(t) and error(t/2) are
    above the noise floor and error(t)/error(t/2) lies in the window, or
    ``None`` when no rung qualifies.
    """
    for (t, err), (_, err_half) in zip(errors, errors[1:]):
        if err < floor or err_half < floor:
            continue
        ratio = err / err_half
        if window[0] <= ratio <= window[1]:
            return t, ratio
    return None


def run_first_order_simple(
    seed: int,
    n_instances: int,
    dims: tuple[int, ...] = (2, 3, 4, 5, 6),
) -> PropertyOutcome:
    """Quadratic remainder of the simple-eigenvalue first-order position."""
    rng = np.random.default_rng(seed)
    outcome = PropertyOutcome(name="first-order-simple", trials=n_instances)
    for i, d in enumerate(_trial_dims(dims, n_instances)):
        u = haar_unitary(d, rng)
        p = rng.dirichlet(np.ones(d))
        gen = PerturbationGenerator(p=p)
        system = unitary_eig(u)
        j = int(rng.integers(d))
        lam0 = system.values[j]
        speed = simple_velocity(system.vectors[:, j], p)

        ladder = []
        t = LADDER_T0
        for _ in range(LADDER_RUNGS):
            predicted = first_order_eigenvalue(lam0, speed, t, gen.direction)
            actual = _nearest_eigenvalues(u, gen, t)
            err = float(np.min(np.abs(actual - predicted)))
            ladder.append((t, err))
            t /= 2
        hit = quadratic_remainder_ratio(ladder)
        if hit is None:
            outcome.record(np.inf, False, f"instance {i}: no rung with quadratic ratio")
        else:
            outcome.record(abs(hit[1] - 4.0), True)
    return outcome


def run_first_order_split(
    seed: int,
    n_instances: int,
    dims: tuple[int, ...] = (3, 4, 5, 6),
) -> PropertyOutcome:
    """Quadratic remainder of the degenerate split positions.

    Split members are assigned to tracked eigenvalues by minimum-cost
    matching of predicted against actual positions.
    """
    rng = np.random.default_rng(seed)
    outcome = PropertyOutcome(name="first-order-split", trials=n_instances)
    usable = [d for d in dims if d >= 3]
    for i in range(n_instances):
        d = usable[i % len(usable)]
        k = int(rng.integers(2, d))
        fixture = degenerate_fixture(d, k, k - 1, rng)  # fixture geometry; p below is full
        u = fixture.matrix
        p = rng.dirichlet(np.ones(d))
        gen = PerturbationGenerator(p=p)
        system = unitary_eig(u)
        group = next(
            gi
            for gi, g in enumerate(system.groups)
            if abs(system.values[g[0]] - fixture.eigenvalue) <= CLUSTER_TOL
        )
        iso = system.isometry(group)
        comp = compress_generator(iso, p)
        lam0 = iso.eigenvalue

        ladder = []
        t = LADDER_T0
        for _ in range(LADDER_RUNGS):
            predicted = np.array(
                [first_order_eigenvalue(lam0, s, t, gen.direction) for s in comp.speeds]
            )
            actual = _nearest_eigenvalues(u, gen, t)
            cost = np.abs(actual[None, :] - predicted[:, None])
            rows, cols = linear_sum_assignment(cost)
            err = float(cost[rows, cols].max())
            ladder.append((t, err))
            t /= 2
        hit = quadratic_remainder_ratio(ladder)
        if hit is None:
            outcome.record(np.inf, False, f"instance {i}: no rung with quadratic ratio")
        else:
            outcome.record(abs(hit[1] - 4.0), True)
    return outcome


def run_all(
    seed: int = 0,
    n_trials: int = 100,
    dims: tuple[int, ...] = (2, 3, 4, 5, 6),
) -> list[PropertyOutcome]:
    """Full suite with trial counts scaled from ``n_trials``."""
    if n_trials == 0:
        return [
            PropertyOutcome(name=name, trials=0)
            for name in (
                "velocity-budget",
                "monotone-rotation",
                "stationary-witness",
                "residual-multiplicity",
                "first-order-simple",
                "first-order-split",
            )
        ]
    budget, mono = run_budget_and_monotonicity(seed, n_trials, dims)
    fix_dims = tuple(d for d in dims if d >= 2) or (3,)
    stationary, multiplicity = run_stationarity_and_multiplicity(
        seed + 1, max(n_trials // 2, 1), fix_dims
    )
    simple = run_first_order_simple(seed + 2, max(n_trials // 2, 1), dims)
    split_dims = tuple(d for d in dims if d >= 3) or (3,)
    split = run_first_order_split(seed + 3, max(n_trials // 5, 1), split_dims)
    return [budget, mono, stationary, multiplicity, simple, split]
