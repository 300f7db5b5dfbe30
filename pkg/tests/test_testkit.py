import numpy as np
import pytest
from scipy import stats

from nrsteer.linalg import schatten_inf, unitary_eig
from nrsteer.numrange import contains_zero_general, contains_zero_unitary
from nrsteer.perturb import PerturbationGenerator
from nrsteer.testkit import brute_membership, degenerate_fixture, fd_velocity, haar_unitary


class TestHaarUnitary:
    def test_unitary_within_tolerance(self):
        for d, seed in [(1, 0), (2, 1), (5, 2), (8, 3)]:
            u = haar_unitary(d, seed)
            assert schatten_inf(u.conj().T @ u - np.eye(d)) < 1e-12

    def test_scalar_case(self):
        u = haar_unitary(1, 7)
        assert u.shape == (1, 1)
        assert abs(abs(u[0, 0]) - 1) < 1e-12

    def test_seed_reproducibility(self):
        assert np.array_equal(haar_unitary(4, 123), haar_unitary(4, 123))
        assert not np.array_equal(haar_unitary(4, 123), haar_unitary(4, 124))

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            haar_unitary(0)

    def test_eigenvalue_arguments_uniform(self):
        # one randomly chosen eigenvalue argument per draw is exactly uniform;
        # chi-squared sanity check at a deliberately loose threshold
        rng = np.random.default_rng(2024)
        draws = 10_000
        z = (rng.standard_normal((draws, 2, 2)) + 1j * rng.standard_normal((draws, 2, 2))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        diag = np.einsum("nii->ni", r)
        us = q * (diag / np.abs(diag))[:, None, :]
        eigs = np.linalg.eigvals(us)  # independent solver as oracle
        picks = eigs[np.arange(draws), rng.integers(0, 2, draws)]
        counts, _ = np.histogram(np.angle(picks), bins=16, range=(-np.pi, np.pi))
        assert stats.chisquare(counts).pvalue > 0.001


class TestDegenerateFixture:
    @pytest.mark.parametrize("d,k,l", [(3, 2, 1), (4, 3, 1), (5, 3, 2), (6, 4, 3)])
    def test_construction_self_validates(self, d, k, l):
        fixture = degenerate_fixture(d, k, l, seed=d * 100 + k * 10 + l)
        assert fixture.multiplicity == k
        assert int(np.sum(fixture.p > 0)) == l
        assert fixture.p.sum() == pytest.approx(1.0, abs=1e-12)

    def test_multiplicity_recomputed(self):
        fixture = degenerate_fixture(5, 3, 1, seed=9)
        system = unitary_eig(fixture.matrix)
        sizes = sorted(len(g) for g in system.groups)
        assert sizes == [1, 1, 3]

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            degenerate_fixture(3, 3, 3, seed=0)  # needs l < k
        with pytest.raises(ValueError):
            degenerate_fixture(3, 4, 1, seed=0)  # needs k <= d


class TestFdVelocity:
    def test_identity_phases(self):
        p = np.array([0.2, 0.3, 0.5])
        gen = PerturbationGenerator(p=p)
        t, h = 0.5, 1e-4
        fd = fd_velocity(np.eye(3, dtype=complex), gen, t, h)
        expected = 1j * p * np.exp(1j * p * t)
        assert np.abs(np.sort_complex(fd) - np.sort_complex(expected)).max() < 10 * h**2

    def test_halving_h_quarters_error(self):
        rng = np.random.default_rng(55)
        u = haar_unitary(3, rng)
        gen = PerturbationGenerator(p=rng.dirichlet(np.ones(3)))
        t = 0.4

        def fd_error(h):
            fd = fd_velocity(u, gen, t, h)
            tiny = fd_velocity(u, gen, t, 1e-6)  # near-exact reference
            return np.abs(np.sort_complex(fd) - np.sort_complex(tiny)).max()

        e1, e2 = fd_error(2e-3), fd_error(1e-3)
        assert e1 / e2 == pytest.approx(4.0, rel=0.3)

    def test_validates_window(self):
        gen = PerturbationGenerator(p=np.array([1.0]))
        with pytest.raises(ValueError):
            fd_velocity(np.eye(1, dtype=complex), gen, 0.1, 0.2)


class TestBruteMembership:
    def test_reference_cases(self):
        assert brute_membership(np.eye(2, dtype=complex)) == "outside"
        assert brute_membership(np.diag([1.0, -1.0]).astype(complex)) == "boundary_within_tol"
        third_roots = np.diag(np.exp(2j * np.pi * np.arange(3) / 3))
        assert brute_membership(third_roots) == "inside"

    @pytest.mark.parametrize("seed", range(10))
    def test_agrees_with_production_paths(self, seed):
        rng = np.random.default_rng(seed)
        u = haar_unitary(int(rng.integers(2, 9)), rng)
        brute = brute_membership(u, n_dense=4096)
        gap = contains_zero_unitary(unitary_eig(u))
        sweep = contains_zero_general(u)
        if "boundary" in (brute, sweep) or gap == "on_boundary":
            return
        assert brute == gap == sweep
