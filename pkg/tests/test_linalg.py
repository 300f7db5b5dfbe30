import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nrsteer import demo
from nrsteer.linalg import (
    BranchCutWarning,
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
from nrsteer.numrange import support_values
from nrsteer.testkit import haar_unitary


def complex_mat(rows):
    return np.array(rows, dtype=np.complex128)


class TestValidation:
    def test_check_unitary_accepts_identity(self):
        check_unitary(np.eye(4, dtype=complex))

    def test_check_unitary_rejects_scaled(self):
        with pytest.raises(ValueError, match="not unitary"):
            check_unitary(2 * np.eye(2, dtype=complex))

    def test_check_unitary_relaxed_tolerance(self):
        with pytest.raises(ValueError):
            check_unitary(demo.DEMO_MATRIX)  # 6-decimal data fails the strict check
        check_unitary(demo.DEMO_MATRIX, tol=1e-4)

    def test_check_hermitian(self):
        check_hermitian(complex_mat([[1, 2j], [-2j, 0.5]]))
        with pytest.raises(ValueError, match="not Hermitian"):
            check_hermitian(complex_mat([[0, 1], [0, 0]]))

    def test_rejects_nonsquare_and_nonfinite(self):
        with pytest.raises(ValueError):
            check_unitary(np.ones((2, 3), dtype=complex))
        with pytest.raises(ValueError):
            check_hermitian(complex_mat([[np.nan, 0], [0, 0]]))


class TestHermEig:
    def test_identity(self):
        w, x = herm_eig(np.eye(3, dtype=complex))
        assert np.allclose(w, [1, 1, 1])
        assert np.allclose(x.conj().T @ x, np.eye(3), atol=1e-12)

    def test_diagonal_sorting(self):
        w, x = herm_eig(np.diag([3.0, 1.0, 2.0]).astype(complex))
        assert np.allclose(w, [1, 2, 3])
        h = (x * w) @ x.conj().T
        assert np.abs(h - np.diag([3, 1, 2])).max() < 1e-12

    def test_exchange_matrix(self):
        w, x = herm_eig(complex_mat([[0, 1], [1, 0]]))
        assert np.allclose(w, [-1, 1])
        for col, val in zip(x.T, w):
            assert np.allclose(np.abs(col), [1 / np.sqrt(2)] * 2, atol=1e-12)
            assert np.linalg.norm(complex_mat([[0, 1], [1, 0]]) @ col - val * col) < 1e-12

    def test_reconstruction_residual(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        h = (a + a.conj().T) / 2
        w, x = herm_eig(h)
        assert schatten_inf((x * w) @ x.conj().T - h) < 1e-9


class TestUnitaryEig:
    def test_identity_single_cluster(self):
        system = unitary_eig(np.eye(2, dtype=complex))
        assert system.groups == ((0, 1),)
        assert np.allclose(system.values, 1.0, atol=1e-12)

    def test_diagonal_ccw_order(self):
        system = unitary_eig(np.diag([1.0, 1j, -1.0]))
        assert np.allclose(system.values, [1.0, 1j, -1.0], atol=1e-12)

    def test_demo_matrix_reconstruction(self):
        system = unitary_eig(demo.DEMO_MATRIX, unitarity_tol=1e-4)
        assert all(len(g) == 1 for g in system.groups)
        assert np.abs(np.abs(system.values) - 1).max() < 1e-4
        rebuilt = (system.vectors * system.values) @ system.vectors.conj().T
        assert schatten_inf(rebuilt - demo.DEMO_MATRIX) < 1e-4

    @pytest.mark.parametrize("seed,d", [(0, 2), (1, 3), (2, 5), (3, 8)])
    def test_haar_invariants(self, seed, d):
        u = haar_unitary(d, seed)
        system = unitary_eig(u)
        assert np.abs(np.abs(system.values) - 1).max() < 1e-10
        assert schatten_inf(system.vectors.conj().T @ system.vectors - np.eye(d)) < 1e-10
        rebuilt = (system.vectors * system.values) @ system.vectors.conj().T
        assert schatten_inf(rebuilt - u) < 1e-9
        args = np.angle(system.values)
        assert np.all(np.diff(args) >= -1e-15)  # ccw from smallest principal argument

    def test_conjugate_pair_same_real_part(self):
        # equal Hermitian parts force the anti-Hermitian compression to split them
        theta = 0.8
        u = np.diag([np.exp(1j * theta), np.exp(-1j * theta)])
        system = unitary_eig(u)
        assert np.allclose(sorted(system.values, key=lambda z: z.imag),
                           [np.exp(-1j * theta), np.exp(1j * theta)], atol=1e-12)

    def test_degenerate_block_grouped(self):
        basis = haar_unitary(4, 11)
        vals = np.array([np.exp(0.4j)] * 3 + [np.exp(-2.0j)])
        u = (basis * vals) @ basis.conj().T
        system = unitary_eig(u)
        sizes = sorted(len(g) for g in system.groups)
        assert sizes == [1, 3]

    def test_eigenspace_isometry_invariants(self):
        basis = haar_unitary(5, 12)
        vals = np.concatenate([np.full(3, np.exp(0.9j)), np.exp([-1.2j, 2.1j])])
        u = (basis * vals) @ basis.conj().T
        system = unitary_eig(u)
        group = max(range(len(system.groups)), key=lambda g: len(system.groups[g]))
        iso = system.isometry(group)
        assert iso.multiplicity == 3
        cols = iso.columns
        assert schatten_inf(cols.conj().T @ cols - np.eye(3)) < 1e-10
        assert schatten_inf(u @ cols - iso.eigenvalue * cols) < 1e-9


class TestSchatten:
    def test_unitary_frobenius(self):
        u = haar_unitary(5, 4)
        assert abs(schatten_norm(u, 2) - np.sqrt(5)) < 1e-10

    def test_diagonal_values(self):
        assert abs(schatten_norm(np.diag([3.0, 4.0]).astype(complex), 2) - 5) < 1e-12
        assert abs(schatten_inf(np.diag([0.5, 2.0]).astype(complex)) - 2) < 1e-12
        assert schatten_inf(haar_unitary(4, 5)) == pytest.approx(1.0, abs=1e-12)

    def test_demo_frobenius(self):
        assert abs(schatten_norm(demo.DEMO_MATRIX, 2) - np.sqrt(3)) < 1e-4

    def test_phase_difference_closed_form(self):
        m = np.eye(2) - np.diag([1.0, np.exp(1j * np.pi / 2)])
        assert abs(schatten_inf(m) - np.sqrt(2)) < 1e-12

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            schatten_norm(np.eye(2, dtype=complex), 0.5)
        with pytest.raises(ValueError):
            schatten_norm(np.eye(2, dtype=complex), np.inf)

    @given(p=st.floats(min_value=1.0, max_value=32.0), seed=st.integers(0, 50))
    @settings(max_examples=25, deadline=None)
    def test_norm_dominates_operator_norm(self, p, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert schatten_norm(a, p) >= schatten_inf(a) - 1e-9

    def test_large_p_approaches_operator_norm(self):
        # sanity: 5% relative gap at p = 64
        rng = np.random.default_rng(8)
        for _ in range(10):
            a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            gap = schatten_norm(a, 64) / schatten_inf(a) - 1
            assert 0 <= gap <= 0.05


class TestPrincipalLog:
    def test_identity_gives_zero(self):
        assert np.abs(principal_log_unitary(np.eye(3, dtype=complex))).max() < 1e-12

    def test_diagonal_phases(self):
        h = principal_log_unitary(np.diag([np.exp(0.3j), np.exp(-0.7j)]))
        assert np.allclose(np.diag(h).real, [0.3, -0.7], atol=1e-12)
        assert np.abs(h - np.diag(np.diag(h))).max() < 1e-12

    @pytest.mark.parametrize("seed", range(6))
    def test_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        u = haar_unitary(int(rng.integers(2, 9)), rng)
        h = principal_log_unitary(u)
        assert schatten_inf(unitary_exp_herm(h) - u) < 1e-9

    def test_branch_cut_warns_and_uses_pi(self):
        with pytest.warns(BranchCutWarning):
            h = principal_log_unitary(np.diag([-1.0 + 0j, 1.0 + 0j]))
        assert np.allclose(np.diag(h).real, [np.pi, 0.0], atol=1e-12)


class TestGeodesic:
    def test_endpoints(self):
        u = haar_unitary(4, 21)
        v = haar_unitary(4, 22)
        assert schatten_inf(geodesic_point(u, v, 0.0) - u) < 1e-9
        assert schatten_inf(geodesic_point(u, v, 1.0) - v) < 1e-9

    def test_scalar_phase_curve(self):
        alpha = 1.1
        v = np.diag([np.exp(1j * alpha)])
        for t in (0.25, 0.5, 0.9):
            point = geodesic_point(np.eye(1, dtype=complex), v, t)
            assert abs(point[0, 0] - np.exp(1j * t * alpha)) < 1e-12

    def test_midpoint_is_unitary(self):
        u = haar_unitary(3, 23)
        v = haar_unitary(3, 24)
        check_unitary(geodesic_point(u, v, 0.5), tol=1e-9)


class TestReduceToGenerator:
    def test_already_normalized_diagonal(self):
        red = reduce_to_generator(np.diag([0.2, 0.5, 0.3]).astype(complex))
        assert np.allclose(red.p, [0.2, 0.5, 0.3], atol=1e-15)
        assert red.shift == 0.0
        assert red.scale == pytest.approx(1.0)
        assert np.array_equal(red.basis, np.eye(3))

    def test_negative_diagonal_shifted(self):
        red = reduce_to_generator(np.diag([-1.0, 1.0]).astype(complex))
        assert np.allclose(red.p, [0.0, 1.0])
        assert red.shift == pytest.approx(-1.0)
        assert red.scale == pytest.approx(2.0)

    def test_zero_generator_rejected(self):
        with pytest.raises(ZeroPerturbationError):
            reduce_to_generator(np.zeros((3, 3), dtype=complex))

    @pytest.mark.parametrize("seed", range(4))
    def test_reconstruction(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = (a + a.conj().T) / 2
        red = reduce_to_generator(h)
        rebuilt = (red.basis * (red.scale * red.p + red.shift)) @ red.basis.conj().T
        assert schatten_inf(rebuilt - h) < 1e-9
        assert np.all(red.p >= 0) and red.p.sum() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(3))
    def test_range_preserved_up_to_phase(self, seed):
        # the reduction only conjugates by a basis and splits off a global phase,
        # so the numerical range of U·exp(itH) survives the rewrite
        rng = np.random.default_rng(100 + seed)
        u = haar_unitary(3, rng)
        v = haar_unitary(3, rng)
        h = principal_log_unitary(u.conj().T @ v)
        red = reduce_to_generator(h)
        t = 0.7
        direct = u @ unitary_exp_herm(h, t)
        conjugated = red.basis.conj().T @ u @ red.basis
        rewritten = np.exp(1j * t * red.shift) * (
            conjugated * np.exp(1j * t * red.scale * red.p)[None, :]
        )
        _, h_direct = support_values(direct, 256)
        _, h_rewritten = support_values(rewritten, 256)
        assert np.abs(h_direct - h_rewritten).max() < 1e-9
