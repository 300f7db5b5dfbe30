"""Dense complex linear algebra on and around the unitary group.

Everything here works on plain complex ``numpy`` arrays.  Matrices are
validated at API boundaries (:func:`check_unitary`, :func:`check_hermitian`)
instead of being wrapped in dedicated classes; structured results
(:class:`EigenSystem`, :class:`EigenspaceIsometry`, :class:`GeneratorReduction`)
are frozen dataclasses.

The unitary eigendecomposition deliberately avoids the nonsymmetric QR
algorithm: a unitary U is normal, so its Hermitian part A = (U + U†)/2 and
anti-Hermitian part B = (U − U†)/(2i) commute and can be diagonalized jointly
by two symmetric eigenproblems (diagonalize A, then the compression of B
inside each degenerate eigenspace of A).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

UNITARITY_TOL = 1e-10        # construction-time unitarity check
RELAXED_UNITARITY_TOL = 1e-4  # for matrices ingested from low-precision text
HERM_TOL = 1e-12             # relative Hermiticity check
CLUSTER_TOL = 1e-8           # unit-circle distance that merges eigenvalues
BRANCH_TOL = 1e-8            # distance to -1 that flags the log branch cut

__all__ = [
    "UNITARITY_TOL",
    "RELAXED_UNITARITY_TOL",
    "HERM_TOL",
    "CLUSTER_TOL",
    "BRANCH_TOL",
    "BranchCutWarning",
    "EigendecompositionError",
    "ZeroPerturbationError",
    "EigenSystem",
    "EigenspaceIsometry",
    "GeneratorReduction",
    "as_complex_matrix",
    "check_unitary",
    "check_hermitian",
    "herm_eig",
    "unitary_eig",
    "schatten_norm",
    "schatten_inf",
    "principal_log_unitary",
    "unitary_exp_herm",
    "geodesic_point",
    "reduce_to_generator",
]


class BranchCutWarning(UserWarning):
    """An eigenvalue sits (numerically) on the logarithm branch cut at -1."""


class EigendecompositionError(Exception):
    """The underlying symmetric eigensolver failed to converge."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class ZeroPerturbationError(ValueError):
    """The Hermitian generator carries no usable perturbation content."""


def as_complex_matrix(entries) -> np.ndarray:
    """Coerce to a square, finite, complex 2-d array."""
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValueError("empty matrix")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix contains non-finite entries")
    return m


def check_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> np.ndarray:
    """Validate ``‖U†U − 1‖∞ ≤ tol`` and return U as a complex array."""
    u = as_complex_matrix(u)
    defect = u.conj().T @ u - np.eye(u.shape[0])
    norm = schatten_inf(defect)
    if norm > tol:
        raise ValueError(f"matrix is not unitary: defect {norm:.3e} > tol {tol:.1e}")
    return u


def check_hermitian(h: np.ndarray, tol: float = HERM_TOL) -> np.ndarray:
    """Validate ``‖H − H†‖∞ ≤ tol·max(1, ‖H‖∞)`` and return H."""
    h = as_complex_matrix(h)
    scale = max(1.0, float(np.abs(h).max()))
    defect = schatten_inf(h - h.conj().T)
    if defect > tol * scale:
        raise ValueError(f"matrix is not Hermitian: defect {defect:.3e}")
    return h


def herm_eig(h: np.ndarray, tol: float = HERM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, x)`` with real eigenvalues ``w`` ascending and unitary ``x``
    whose columns are the eigenvectors, so that ``h = x @ diag(w) @ x†``.
    """
    h = check_hermitian(h, tol=tol)
    try:
        w, x = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        residual = float(np.abs(h - h.conj().T).max())
        raise EigendecompositionError(
            f"symmetric eigensolver did not converge: {exc}", residual=residual
        ) from exc
    return w, x


def schatten_norm(a: np.ndarray, p: float) -> float:
    """Schatten p-norm ``(Σ σ_i^p)^(1/p)`` over the singular values of ``a``."""
    if not np.isfinite(p) or p < 1:
        raise ValueError(f"schatten_norm requires finite p >= 1, got {p}")
    sigma = _singular_values(a)
    if p == 1:
        return float(sigma.sum())
    if p == 2:
        return float(np.sqrt((sigma**2).sum()))
    return float((sigma**p).sum() ** (1.0 / p))


def schatten_inf(a: np.ndarray) -> float:
    """Operator norm: the largest singular value of ``a``."""
    return float(_singular_values(a)[-1]) if a.size else 0.0


def _singular_values(a: np.ndarray) -> np.ndarray:
    """Singular values, ascending, via the Hermitian eigenproblem of A†A."""
    a = np.asarray(a, dtype=np.complex128)
    gram = a.conj().T @ a
    gram = (gram + gram.conj().T) / 2
    w = np.linalg.eigvalsh(gram)
    return np.sqrt(np.clip(w, 0.0, None))


def _fix_column_phases(x: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real positive."""
    x = x.copy()
    idx = np.argmax(np.abs(x), axis=0)
    for j, i in enumerate(idx):
        pivot = x[i, j]
        if abs(pivot) > 0:
            x[:, j] *= np.conj(pivot) / abs(pivot)
    return x


@dataclass(frozen=True)
class EigenSystem:
    """Counterclockwise-ordered eigendecomposition of a normal (unitary) matrix.

    ``values[j]`` pairs with column ``vectors[:, j]``.  The starting label is
    the eigenvalue with smallest principal argument in (−π, π]; subsequent
    arguments are non-decreasing.  ``groups`` partitions the indices into
    clusters of numerically coincident eigenvalues.
    """

    values: np.ndarray
    vectors: np.ndarray
    groups: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def representatives(self) -> np.ndarray:
        """One eigenvalue per cluster (normalized cluster mean), ccw order."""
        reps = []
        for g in self.groups:
            if len(g) == 1:
                reps.append(self.values[g[0]])
            else:
                m = self.values[list(g)].mean()
                reps.append(m / abs(m) if abs(m) > 0 else self.values[g[0]])
        return np.array(reps)

    def multiplicity(self, group_index: int) -> int:
        return len(self.groups[group_index])

    def isometry(self, group_index: int) -> "EigenspaceIsometry":
        """Orthonormal-column isometry spanning the cluster's eigenspace."""
        g = list(self.groups[group_index])
        rep = self.representatives()[group_index]
        return EigenspaceIsometry(columns=self.vectors[:, g], eigenvalue=rep)


@dataclass(frozen=True)
class EigenspaceIsometry:
    """d×k matrix with orthonormal columns spanning one eigenspace."""

    columns: np.ndarray
    eigenvalue: complex

    @property
    def multiplicity(self) -> int:
        return self.columns.shape[1]


@dataclass(frozen=True)
class GeneratorReduction:
    """Diagonalized, shifted and trace-normalized form of a Hermitian generator.

    Reconstruction: ``H = basis @ diag(scale * p + shift) @ basis†``.
    """

    p: np.ndarray
    basis: np.ndarray
    shift: float
    scale: float


def _cluster_on_circle(values: np.ndarray, tol: float) -> list[list[int]]:
    """Group indices of ccw-sorted eigenvalues lying within ``tol`` (chordal)."""
    d = values.shape[0]
    groups: list[list[int]] = [[0]]
    for j in range(1, d):
        if abs(values[j] - values[groups[-1][-1]]) <= tol:
            groups[-1].append(j)
        else:
            groups.append([j])
    # the circle wraps: merge first and last groups if they touch across ±π
    if len(groups) > 1 and abs(values[groups[0][0]] - values[groups[-1][-1]]) <= tol:
        groups[0] = groups.pop() + groups[0]
    return groups


def unitary_eig(
    u: np.ndarray,
    unitarity_tol: float = UNITARITY_TOL,
    cluster_tol: float = CLUSTER_TOL,
) -> EigenSystem:
    """Spectral decomposition of a unitary matrix, ccw-ordered.

    Diagonalizes A = (U + U†)/2 by a symmetric eigensolve, then resolves each
    degenerate A-eigenspace by diagonalizing the compression of
    B = (U − U†)/(2i) inside it; eigenvalues recombine as λ = ⟨x|A|x⟩ + i⟨x|B|x⟩.
    """
    u = check_unitary(u, tol=unitarity_tol)
    d = u.shape[0]
    a_part = (u + u.conj().T) / 2
    b_part = (u - u.conj().T) / 2j
    a_vals, x = herm_eig(a_part)

    # resolve A-degenerate subspaces with the compression of B
    cols: list[np.ndarray] = []
    i = 0
    while i < d:
        j = i
        while j + 1 < d and a_vals[j + 1] - a_vals[j] <= 1e-8:
            j += 1
        block = x[:, i : j + 1]
        if j > i:
            comp = block.conj().T @ b_part @ block
            comp = (comp + comp.conj().T) / 2
            _, w = np.linalg.eigh(comp)
            block = block @ w
        cols.append(block)
        i = j + 1
    vecs = _fix_column_phases(np.hstack(cols))
    vals = np.einsum("ij,ik,kj->j", vecs.conj(), a_part, vecs) + 1j * np.einsum(
        "ij,ik,kj->j", vecs.conj(), b_part, vecs
    )

    # ccw order: ascending principal argument, eigenvector entries break ties
    args = np.angle(vals)
    args = np.where(args <= -np.pi, args + 2 * np.pi, args)
    keys = [
        (args[j],) + tuple(x for z in vecs[:, j] for x in (z.real, z.imag))
        for j in range(d)
    ]
    order = sorted(range(d), key=lambda j: keys[j])
    vals = vals[order]
    vecs = vecs[:, order]

    groups = tuple(tuple(g) for g in _cluster_on_circle(vals, cluster_tol))
    return EigenSystem(values=vals, vectors=vecs, groups=groups)


def _principal_args(values: np.ndarray, branch_tol: float = BRANCH_TOL) -> np.ndarray:
    """Principal arguments in (−π, π], warning near the branch cut at −1."""
    if np.any(np.abs(values + 1.0) < branch_tol):
        warnings.warn(
            "eigenvalue at or near -1: the principal logarithm is discontinuous "
            "there; proceeding with argument +pi",
            BranchCutWarning,
            stacklevel=3,
        )
    args = np.angle(values)
    return np.where(args <= -np.pi, args + 2 * np.pi, args)


def principal_log_unitary(
    u: np.ndarray,
    unitarity_tol: float = UNITARITY_TOL,
    branch_tol: float = BRANCH_TOL,
) -> np.ndarray:
    """Hermitian H with eigenvalues in (−π, π] such that exp(iH) = U.

    Eigenvalues at −1 get argument +π and raise :class:`BranchCutWarning`.
    """
    system = unitary_eig(u, unitarity_tol=unitarity_tol)
    theta = _principal_args(system.values, branch_tol=branch_tol)
    h = (system.vectors * theta) @ system.vectors.conj().T
    return (h + h.conj().T) / 2


def unitary_exp_herm(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(i·t·H) for Hermitian H, via the symmetric eigendecomposition."""
    w, x = herm_eig(h)
    return (x * np.exp(1j * t * w)) @ x.conj().T


def geodesic_point(
    u: np.ndarray,
    v: np.ndarray,
    t: float,
    unitarity_tol: float = UNITARITY_TOL,
) -> np.ndarray:
    """Point U·exp(t·Log(U†V)) on the shortest unitary-group curve from U to V."""
    u = check_unitary(u, tol=unitarity_tol)
    v = check_unitary(v, tol=unitarity_tol)
    system = unitary_eig(u.conj().T @ v, unitarity_tol=max(unitarity_tol, 1e-9))
    theta = _principal_args(system.values)
    x = system.vectors
    return u @ ((x * np.exp(1j * t * theta)) @ x.conj().T)


def reduce_to_generator(h: np.ndarray, herm_tol: float = HERM_TOL) -> GeneratorReduction:
    """Reduce a Hermitian generator to a nonnegative, trace-one diagonal.

    Diagonalizes H, shifts all eigenvalues down by the minimum when any is
    negative (the shift only changes a global phase of exp(itH)), and rescales
    to unit trace.  Diagonal inputs keep their own entry order and the
    identity basis.
    """
    h = check_hermitian(h, tol=herm_tol)
    d = h.shape[0]
    scale_h = max(1.0, float(np.abs(h).max()))
    off = h - np.diag(np.diag(h))
    if np.abs(off).max() <= 1e-13 * scale_h:
        diag_vals = np.real(np.diag(h)).astype(np.float64)
        basis = np.eye(d, dtype=np.complex128)
    else:
        diag_vals, basis = herm_eig(h, tol=herm_tol)

    shift = float(min(diag_vals.min(), 0.0))
    nonneg = diag_vals - shift
    scale = float(nonneg.sum())
    if scale <= 1e-12 * scale_h:
        raise ZeroPerturbationError(
            "zero perturbation: the generator has no content beyond a global phase"
        )
    return GeneratorReduction(p=nonneg / scale, basis=basis, shift=shift, scale=scale)
