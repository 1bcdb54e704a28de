import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from sldirichlet.potential import PotentialSpec, cosine_coefficients, sample
from sldirichlet.solver import (
    BracketError,
    DegenerateSpectrumError,
    GalerkinOperator,
    build_galerkin_matrix,
    eigenfunction_sine_coeffs,
    galerkin_operator,
    solve_eigenvalue_shooting,
    solve_spectrum_galerkin,
    solve_spectrum_shooting,
)
from sldirichlet.harness import fit_decay_exponent

from conftest import ADMISSIBLE_COSINES, pi2

cosine_polys = st.dictionaries(
    st.integers(1, 8), st.floats(-1.5, 1.5, allow_subnormal=False), min_size=1, max_size=3
).map(PotentialSpec.cosines)


class TestGalerkinMatrix:
    def test_zero(self):
        op = build_galerkin_matrix(cosine_coefficients(PotentialSpec.zero(), 6), 3)
        assert np.array_equal(op.entries, np.diag([pi2(1), pi2(2), pi2(3)]))

    def test_cos2_entries(self):
        op = build_galerkin_matrix(cosine_coefficients(PotentialSpec.cosines({2: 1.0}), 6), 3)
        H = op.entries
        assert H[0, 0] == pytest.approx(pi2(1) - 0.5, abs=1e-14)
        assert H[0, 2] == 0.5 and H[0, 1] == 0.0
        assert np.array_equal(H, H.T)

    def test_entries_match_direct_quadrature(self):
        spec = PotentialSpec.trig([("cos", 2, 1.0), ("sin", 3, 0.4)], 0.2)
        n = 5
        H = build_galerkin_matrix(cosine_coefficients(spec, 2 * n), n).entries
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                f = lambda x: 2 * sample(spec, x) * math.sin(j * math.pi * x) * math.sin(k * math.pi * x)
                expected = quad(f, 0, 1, limit=200)[0] + (pi2(j) if j == k else 0.0)
                assert H[j - 1, k - 1] == pytest.approx(expected, abs=1e-12)

    def test_constant_shift(self):
        H = build_galerkin_matrix(cosine_coefficients(PotentialSpec.constant(5.0), 6), 3).entries
        assert np.array_equal(H, np.diag([pi2(1) + 5, pi2(2) + 5, pi2(3) + 5]))

    def test_insufficient_range(self):
        spec = PotentialSpec.from_function(lambda x: x, 65)
        with pytest.raises(ValueError, match="cover"):
            build_galerkin_matrix(cosine_coefficients(spec, 10, 65), 8)

    def test_band_structure(self):
        H = galerkin_operator(PotentialSpec.cosines({2: 1.0, 4: 0.5}), 32).entries
        j = np.arange(1, 33)
        far = (np.abs(j[:, None] - j[None, :]) > 4) & (j[:, None] + j[None, :] > 4)
        assert not np.any(H[far])

    def test_deterministic(self, cos24):
        a = galerkin_operator(cos24, 64).entries
        b = galerkin_operator(cos24, 64).entries
        assert a.tobytes() == b.tobytes()

    def test_entries_read_only(self, cos2):
        op = galerkin_operator(cos2, 8)
        with pytest.raises(ValueError):
            op.entries[0, 0] = 1.0


class TestGalerkinSpectrum:
    def test_zero_exact(self, zero):
        s = solve_spectrum_galerkin(zero, 3)
        assert np.array_equal(s.eigenvalues, [pi2(1), pi2(2), pi2(3)])
        assert s.method == "galerkin" and s.n_basis == 256

    def test_constant(self):
        s = solve_spectrum_galerkin(PotentialSpec.constant(5.0), 2)
        np.testing.assert_allclose(s.eigenvalues, [pi2(1) + 5, pi2(2) + 5], rtol=0, atol=1e-10)
        assert s.mean_shift == 5.0

    def test_cos2_ground_state(self, cos2):
        lam = solve_spectrum_galerkin(cos2, 1, 64)[1]
        assert abs(lam - (pi2(1) - 0.5)) < 0.02
        assert lam == pytest.approx(solve_eigenvalue_shooting(cos2, 1), abs=1e-8)

    def test_basis_must_be_large_enough(self, cos2):
        with pytest.raises(ValueError):
            solve_spectrum_galerkin(cos2, 10, 32)

    def test_error_estimate(self, cos24):
        s = solve_spectrum_galerkin(cos24, 4, 16, estimate_error=True)
        fine = solve_spectrum_galerkin(cos24, 4, 32)
        np.testing.assert_allclose(s.est_error, np.abs(s.eigenvalues - fine.eigenvalues), atol=1e-12)

    def test_strictly_ascending(self, bump_grid):
        s = solve_spectrum_galerkin(bump_grid, 40)
        assert np.all(np.diff(s.eigenvalues) > 0)

    def test_one_based_indexing(self, zero):
        s = solve_spectrum_galerkin(zero, 2)
        with pytest.raises(IndexError):
            s[0]

    @pytest.mark.parametrize("amps", ADMISSIBLE_COSINES)
    def test_rayleigh_ritz_monotone(self, amps):
        spec = PotentialSpec.cosines(amps)
        sizes = [8, 12, 16, 24, 32, 64]
        lam = np.array([solve_spectrum_galerkin(spec, 2, n).eigenvalues for n in sizes])
        assert np.all(np.diff(lam, axis=0) <= 1e-9)
        shoot = np.array([solve_eigenvalue_shooting(spec, m) for m in (1, 2)])
        assert np.all(lam >= shoot - 1e-9)


class TestShooting:
    def test_zero(self, zero):
        assert solve_eigenvalue_shooting(zero, 4) == pytest.approx(16 * math.pi**2, abs=1e-9)

    def test_constant(self):
        assert solve_eigenvalue_shooting(PotentialSpec.constant(5.0), 1) == pytest.approx(
            pi2(1) + 5, abs=1e-8
        )

    def test_bracket_widens(self):
        # lambda_1 = pi^2 + 40 lies far outside the initial +-1 window
        assert solve_eigenvalue_shooting(PotentialSpec.constant(40.0), 1, 1.0) == pytest.approx(
            pi2(1) + 40, abs=1e-8
        )

    def test_bracket_failure(self):
        with pytest.raises(BracketError):
            solve_eigenvalue_shooting(PotentialSpec.constant(1e9), 1, 1.0)

    def test_negative_eigenvalue(self):
        assert solve_eigenvalue_shooting(PotentialSpec.constant(-30.0), 1) == pytest.approx(
            pi2(1) - 30, abs=1e-8
        )

    def test_cross_method(self, cos2):
        assert solve_eigenvalue_shooting(cos2, 1) == pytest.approx(
            solve_spectrum_galerkin(cos2, 1, 64)[1], abs=1e-8
        )

    def test_grid_potential(self, bump_grid):
        g = solve_spectrum_galerkin(bump_grid, 6).eigenvalues
        s = solve_spectrum_shooting(bump_grid, 6).eigenvalues
        np.testing.assert_allclose(g, s, rtol=0, atol=1e-8)

    def test_invalid_index(self, zero):
        with pytest.raises(ValueError):
            solve_eigenvalue_shooting(zero, 0)


class TestInvariants:
    @settings(max_examples=15, deadline=None)
    @given(cosine_polys, st.floats(-10, 10, allow_subnormal=False))
    def test_shift_equivariance(self, spec, s):
        base = solve_spectrum_galerkin(spec, 6).eigenvalues
        shifted = solve_spectrum_galerkin(spec.shifted(s), 6).eigenvalues
        np.testing.assert_allclose(shifted - base, s, rtol=0, atol=1e-9)

    @settings(max_examples=15, deadline=None)
    @given(
        st.lists(
            st.tuples(st.sampled_from(["cos", "sin"]), st.integers(1, 6), st.floats(-1, 1, allow_subnormal=False)),
            min_size=1,
            max_size=3,
            unique_by=lambda t: (t[0], t[1]),
        )
    )
    def test_reflection_invariance(self, terms):
        spec = PotentialSpec.trig(terms)
        a = solve_spectrum_galerkin(spec, 5, 256).eigenvalues
        b = solve_spectrum_galerkin(spec.reflected(), 5, 256).eigenvalues
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)

    def test_reflection_invariance_grid(self):
        spec = PotentialSpec.from_function(lambda x: np.exp(x) * np.sin(3 * x), 1025)
        a = solve_spectrum_shooting(spec, 4).eigenvalues
        b = solve_spectrum_shooting(spec.reflected(), 4).eigenvalues
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)

    @pytest.mark.parametrize("amps", ADMISSIBLE_COSINES[:3])
    def test_cross_method_agreement(self, amps):
        spec = PotentialSpec.cosines(amps)
        for m in range(1, 11):
            g = solve_spectrum_galerkin(spec, m, max(64, 8 * m))[m]
            assert g == pytest.approx(solve_eigenvalue_shooting(spec, m), abs=1e-7)

    @pytest.mark.parametrize("amps", ADMISSIBLE_COSINES)
    def test_gap_bound(self, amps):
        s = solve_spectrum_galerkin(PotentialSpec.cosines(amps), 40)
        ratios = []
        for m in range(10, 41):
            k = np.delete(np.arange(0, 200), m)
            ratios.append(np.min(np.abs(s[m] - (k * np.pi) ** 2)) / m)
        # nearest unperturbed level is (m-1) pi^2 away: ratio ~ (2m-1) pi^2 / m
        assert min(ratios) > math.pi**2


class TestEigenfunctions:
    def test_zero_gives_unit_vectors(self, zero):
        op = galerkin_operator(zero, 16)
        for m in (1, 5, 16):
            e = eigenfunction_sine_coeffs(op, m)
            expected = np.zeros(16)
            expected[m - 1] = 1.0
            assert np.array_equal(e.sine_coeffs, expected)

    def test_cos2_principal_component(self, cos2):
        e = eigenfunction_sine_coeffs(galerkin_operator(cos2, 64), 10)
        assert e.sine_coeffs[9] >= 0.99
        assert abs(np.sum(e.sine_coeffs**2) - 1) < 1e-10
        assert e.eigenvalue == pytest.approx(solve_spectrum_galerkin(cos2, 10, 64)[10], abs=1e-10)

    @pytest.mark.parametrize("amps", ADMISSIBLE_COSINES)
    def test_principal_component_approaches_one(self, amps):
        op = galerkin_operator(PotentialSpec.cosines(amps), 320)
        ms = np.arange(5, 41)
        dev = np.array([abs(eigenfunction_sine_coeffs(op, m).sine_coeffs[m - 1] - 1) for m in ms])
        # |v_m - 1| <= C/m with C fitted from the data, and decreasing at least like 1/m
        C = np.max(dev * ms)
        assert C < 1e-2
        assert fit_decay_exponent(zip(ms, dev)).exponent <= -1.0

    def test_degenerate_cluster_rejected(self):
        op = GalerkinOperator(3, np.diag([1.0, 1.0, 5.0]))
        with pytest.raises(DegenerateSpectrumError):
            eigenfunction_sine_coeffs(op, 1)

    def test_inner_products(self, cos2):
        e = eigenfunction_sine_coeffs(galerkin_operator(cos2, 32), 3)
        assert e.inner_sin(3) == pytest.approx(e.sine_coeffs[2] / math.sqrt(2))
        assert e.inner_sin(-3) == -e.inner_sin(3)
        assert e.inner_sin(0) == 0.0 and e.inner_sin(33) == 0.0
