import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dslocal import specfun
from dslocal.geometry import DeSitterParams

# High-precision reference values (40-digit arbitrary-precision arithmetic,
# hypergeometric route cross-checked against ODE continuation).
GAMMA_M2 = 0.042794343718376861129 - 0.0046156525286039499611j   # gamma(-2+1.5i)
T0_M25_L0 = 14.577217433562456428j
T0_M05_L0 = 0.78028137347939209634
T_M25_L1_T07 = -29.536212882479517686 + 8.8593727815428321409j
T_M25_L8_T2 = -812907.0031617459775 + 1634791.0646988117044j
T_M05_L2_T15 = -0.18233330108324239375 - 0.096218636144406931387j
T_M05_L0_T03 = 0.78907487482623656148 - 0.042832188472804321708j
T_M25_L0_TM11 = -6.5777238058490449495 - 9.1770603820766365353j
# contract-domain corners
T_M25_L32_T5 = -2.461634249274311698282e36 - 3.064535407039517914062e36j
T_M05_L32_TM5 = 7.482600326505924156447e33 + 1.813296199290799060587e32j
T_M100_L2_T1 = -2.58910726935050582687e71 + 4.595015874102837898301e71j
WRONSKIAN_RHS_M25_L0 = -975.23323917098892513
GAMMA_L_M25_L0 = 0.0020507914616406315621
THREEJ_123 = -0.30860669992418382052  # (1,2,3; 1,1,-2)


def params(M, branch=1):
    return DeSitterParams(M=M, branch=branch)


def od(M, l, branch=1):
    return specfun.order_degree(params(M, branch).nu, l)


def arg(t, alpha=1.0):
    return specfun.FerrersArg.from_time(t, alpha)


class TestComplexGamma:
    def test_factorial_identity(self):
        assert specfun.complex_gamma(1.0) == pytest.approx(1.0, rel=1e-14)

    def test_half_integer(self):
        assert specfun.complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_reflection_region_reference(self):
        got = specfun.complex_gamma(-2.0 + 1.5j)
        assert abs(got - GAMMA_M2) <= 1e-13 * abs(GAMMA_M2)

    def test_poles_rejected(self):
        for z in (0.0, -1.0, -5.0):
            with pytest.raises(specfun.PoleError):
                specfun.complex_gamma(z)

    def test_recurrence_on_disc(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            z = complex(rng.uniform(-20, 20), rng.uniform(-20, 20))
            if abs(z - round(z.real)) < 0.1 and abs(z.imag) < 0.1:
                continue
            lhs = specfun.complex_gamma(z + 1.0)
            rhs = z * specfun.complex_gamma(z)
            assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


class TestFerrersZero:
    @pytest.mark.parametrize("M", [0.5, 2.5])
    def test_matches_general_evaluator(self, M):
        for l in range(17):
            o = od(M, l)
            closed = specfun.ferrers_T_zero(o)
            general = specfun.ferrers_T(o, arg(0.0))
            assert abs(general - closed) <= 1e-12 * abs(closed)

    def test_alternating_sign_structure(self):
        for M in (0.5, 2.5):
            p = params(M)
            for l in range(21):
                v = specfun.phase_N(p.nu) * specfun.ferrers_T_zero(od(M, l))
                assert abs(v.imag) <= 1e-12 * abs(v)
                assert math.copysign(1.0, v.real) == (-1.0) ** l

    def test_reference_value(self):
        got = specfun.ferrers_T_zero(od(2.5, 0))
        assert abs(got - T0_M25_L0) <= 1e-13 * abs(T0_M25_L0)
        got = specfun.ferrers_T_zero(od(0.5, 0))
        assert abs(got - T0_M05_L0) <= 1e-13 * abs(T0_M05_L0)


class TestFerrersT:
    @pytest.mark.parametrize("value,M,l,t", [
        (T_M25_L1_T07, 2.5, 1, 0.7),
        (T_M25_L8_T2, 2.5, 8, 2.0),
        (T_M05_L2_T15, 0.5, 2, 1.5),
        (T_M05_L0_T03, 0.5, 0, 0.3),
        (T_M25_L0_TM11, 2.5, 0, -1.1),
        (T_M25_L32_T5, 2.5, 32, 5.0),
        (T_M05_L32_TM5, 0.5, 32, -5.0),
        (T_M100_L2_T1, 100.0, 2, 1.0),
    ])
    def test_reference_values(self, value, M, l, t):
        got = specfun.ferrers_T(od(M, l), arg(t))
        assert abs(got - value) <= 1e-10 * abs(value)

    def test_conjugation_lattice(self):
        # conj(T(z)) = T(-z) for M < 1 and -T(-z) for M > 1
        for M, sign in ((0.5, 1.0), (2.5, -1.0)):
            for l in range(0, 9, 2):
                for t in (-2.0, -0.9, 0.4, 1.3, 2.0):
                    o = od(M, l)
                    lhs = np.conj(specfun.ferrers_T(o, arg(t)))
                    rhs = sign * specfun.ferrers_T(o, arg(-t))
                    assert abs(lhs - rhs) <= 1e-10 * abs(lhs)

    def test_wronskian_identity(self):
        for M, branch in ((0.5, 1), (0.5, -1), (2.5, 1), (2.5, -1)):
            for l in (0, 1, 2, 5):
                for t in (0.3, 1.0, 2.2):
                    o = od(M, l, branch)
                    rhs = specfun.wronskian_rhs(o)
                    z = arg(t).z
                    T_p = specfun.ferrers_T(o, arg(t))
                    T_m = specfun.ferrers_T(o, arg(-t))
                    dT_p = specfun.ferrers_T_dz(o, arg(t))
                    dT_m = specfun.ferrers_T_dz(o, arg(-t))
                    # d/dz of z -> T(-z) is -T'(-z)
                    lhs = (1.0 - z * z) * (T_p * (-dT_m) - T_m * dT_p)
                    assert abs(lhs - rhs) <= 1e-8 * abs(rhs)

    def test_wronskian_rhs_reference(self):
        got = specfun.wronskian_rhs(od(2.5, 0))
        assert abs(got - WRONSKIAN_RHS_M25_L0) <= 1e-12 * abs(WRONSKIAN_RHS_M25_L0)

    def test_ode_residual_series_region(self):
        # analytic first and second derivatives satisfy the defining equation
        for M in (0.5, 2.5):
            for l in (0, 3, 8):
                for t in (0.1, 0.5, 0.8):
                    o = od(M, l)
                    a = arg(t)
                    z = a.z
                    T = specfun.ferrers_T(o, a)
                    dT = specfun.ferrers_T_dz(o, a)
                    d2T = _fd_second_derivative(o, t)
                    nu = o.nu
                    res = ((1.0 - z * z) * d2T - 2.0 * z * dT
                           + (nu * (nu + 1.0) - o.sigma ** 2 / (1.0 - z * z)) * T)
                    scale = max(abs(T), abs(dT)) * (abs(nu) + l + 1.0) ** 2
                    assert abs(res) <= 1e-7 * scale

    def test_ode_residual_continuation_region(self):
        for M in (0.5, 2.5):
            for l in (0, 4):
                for t in (1.4, 2.5):
                    o = od(M, l)
                    z = arg(t).z
                    T = specfun.ferrers_T(o, arg(t))
                    dT = specfun.ferrers_T_dz(o, arg(t))
                    d2T = _fd_second_derivative(o, t)
                    nu = o.nu
                    res = ((1.0 - z * z) * d2T - 2.0 * z * dT
                           + (nu * (nu + 1.0) - o.sigma ** 2 / (1.0 - z * z)) * T)
                    scale = max(abs(T), abs(dT)) * (abs(nu) + l + 1.0) ** 2
                    assert abs(res) <= 1e-7 * scale

    def test_cut_rejected(self):
        with pytest.raises(specfun.DomainError):
            specfun.FerrersArg(t=0.0, z=1.5 + 0j)


def _fd_second_derivative(o, t, h=2e-3):
    # independent check of the evaluator: FD in y of the returned values
    y = math.sinh(t)
    vals = [specfun.ferrers_T(o, specfun.FerrersArg(t=0.0, z=1j * (y + k * h)))
            for k in (-2, -1, 0, 1, 2)]
    d2_dy2 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * h * h)
    return -d2_dy2  # d2/dz2 = -d2/dy2 on z = iy


class TestGammaL:
    def test_signs(self):
        p_pos = params(2.5)
        p_neg = params(0.5)
        for l in range(17):
            assert specfun.gamma_l(p_pos, l) > 0.0
            assert specfun.gamma_l(p_neg, l) < 0.0

    def test_l0_closed_form(self):
        L = math.sqrt(2.5 ** 2 - 1.0)
        expect = math.pi / (L * math.sinh(L * math.pi))
        assert specfun.gamma_l(params(2.5), 0) == pytest.approx(expect, rel=1e-12)

    def test_reference(self):
        assert specfun.gamma_l(params(2.5), 0) == pytest.approx(GAMMA_L_M25_L0, rel=1e-12)

    @pytest.mark.parametrize("M", [0.5, 2.5])
    def test_product_recursion(self, M):
        # 1/gamma_l = (1/gamma_0) * prod_{p=1..l} (M^2 - 1 + p^2); the factor
        # follows from (nu+1/2)^2 = 1 - M^2 and stays positive for p >= 1.
        p = params(M)
        inv_g0 = 1.0 / specfun.gamma_l(p, 0)
        prod = 1.0
        for l in range(1, 17):
            prod *= M * M - 1.0 + l * l
            assert 1.0 / specfun.gamma_l(p, l) == pytest.approx(inv_g0 * prod, rel=1e-10)

    def test_m_one_rejected(self):
        class Fake:
            M = 1.0
            nu = -0.5 + 0j

        with pytest.raises(ValueError):
            specfun.gamma_l(Fake(), 0)


class TestPhaseN:
    def test_cases(self):
        assert specfun.phase_N(-0.3) == 1.0
        assert specfun.phase_N(-0.5 + 2.0j) == -1j
        assert specfun.phase_N(-0.5 - 2.0j) == 1j

    @given(st.floats(-5, 5), st.floats(-5, 5))
    def test_unit_modulus(self, re, im):
        assert abs(abs(specfun.phase_N(complex(re, im))) - 1.0) < 1e-15


class TestSphericalHarmonics:
    def test_constant_mode(self):
        v = specfun.spherical_harmonic(0, 0, 0.7, 1.3)
        assert v == pytest.approx(0.5 / math.sqrt(math.pi), rel=1e-14)

    def test_textbook_l1(self):
        th = 0.9
        v = specfun.spherical_harmonic(1, 0, th, 0.1)
        assert v == pytest.approx(math.sqrt(3.0 / (4.0 * math.pi)) * math.cos(th), rel=1e-14)

    def test_quadrature_normalization(self):
        from dslocal.modes import SphereGrid
        grid = SphereGrid(64, 128)
        Y = specfun.sph_harm_table(3, grid.theta_mesh, grid.phi_mesh)[3 * 3 + 3 + 2]
        val = grid.integrate(np.abs(Y) ** 2)
        assert abs(val - 1.0) <= 1e-12

    def test_conjugation_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            l = int(rng.integers(0, 9))
            m = int(rng.integers(-l, l + 1)) if l else 0
            th, ph = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
            lhs = np.conj(specfun.spherical_harmonic(l, m, th, ph))
            rhs = (-1.0) ** m * specfun.spherical_harmonic(l, -m, th, ph)
            assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))

    def test_index_error(self):
        with pytest.raises(IndexError):
            specfun.spherical_harmonic(1, 2, 0.3, 0.4)


class TestWigner3j:
    def test_known_value(self):
        assert specfun.wigner_3j(1, 0, 1, 0, 0, 0) == pytest.approx(-1.0 / math.sqrt(3.0), rel=1e-14)

    def test_odd_sum_zero(self):
        assert specfun.wigner_3j(1, 1, 1, 0, 0, 0) == 0.0

    def test_reference(self):
        assert specfun.wigner_3j(1, 2, 3, 1, 1, -2) == pytest.approx(THREEJ_123, rel=1e-13)

    def test_selection_rules(self):
        assert specfun.wigner_3j(1, 1, 3, 0, 0, 0) == 0.0     # triangle violated
        assert specfun.wigner_3j(2, 2, 2, 1, 0, 0) == 0.0     # m-sum nonzero

    @pytest.mark.parametrize("j1,j2,j3", [(1, 1, 2), (2, 3, 4), (3, 3, 3), (5, 4, 2)])
    def test_orthogonality(self, j1, j2, j3):
        # sum over m1, m2 at fixed m3 of (2 j3 + 1) (3j)^2 equals 1
        for m3 in range(-j3, j3 + 1):
            total = 0.0
            for m1 in range(-j1, j1 + 1):
                m2 = -m3 - m1
                if abs(m2) > j2:
                    continue
                w = specfun.wigner_3j(j1, j2, j3, m1, m2, m3)
                total += (2 * j3 + 1) * w * w
            assert total == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 12))
    def test_symmetry_under_column_swap(self, j1, j2, j3):
        # cyclic column permutation leaves the symbol invariant
        for m1 in range(-j1, j1 + 1):
            m2 = min(j2, max(-j2, 1 - m1))
            m3 = -(m1 + m2)
            if abs(m3) > j3:
                continue
            a = specfun.wigner_3j(j1, j2, j3, m1, m2, m3)
            b = specfun.wigner_3j(j2, j3, j1, m2, m3, m1)
            assert a == pytest.approx(b, abs=1e-13)


class TestWignerD:
    def test_identity(self):
        for l in range(4):
            D = specfun.wigner_D(l, 0.0, 0.0, 0.0)
            assert np.max(np.abs(D - np.eye(2 * l + 1))) < 1e-14

    def test_unitarity(self):
        rng = np.random.default_rng(5)
        for l in range(9):
            xi, eps, tau = rng.uniform(-math.pi, math.pi, 3)
            D = specfun.wigner_D(l, xi, eps, tau)
            assert np.max(np.abs(D.conj().T @ D - np.eye(2 * l + 1))) <= 1e-12

    def test_composition(self):
        rng = np.random.default_rng(9)
        a1 = rng.uniform(0.1, 1.0, 3)
        a2 = rng.uniform(-1.0, -0.1, 3)
        R1 = specfun.euler_rotation_matrix(*a1)
        R2 = specfun.euler_rotation_matrix(*a2)
        xi, eps, tau = _euler_from_matrix(R1 @ R2)
        D12 = specfun.wigner_D(2, xi, eps, tau)
        D1 = specfun.wigner_D(2, *a1)
        D2 = specfun.wigner_D(2, *a2)
        assert np.max(np.abs(D1 @ D2 - D12)) <= 1e-10

    def test_rotation_property_on_harmonics(self):
        rng = np.random.default_rng(13)
        xi, eps, tau = 0.7, 1.1, -0.4
        R = specfun.euler_rotation_matrix(xi, eps, tau)
        for l in (1, 2, 3):
            D = specfun.wigner_D(l, xi, eps, tau)
            th, ph = rng.uniform(0.3, 2.8), rng.uniform(0.0, 2 * math.pi)
            v = np.array([math.sin(th) * math.cos(ph),
                          math.sin(th) * math.sin(ph), math.cos(th)])
            vp = R.T @ v
            thp = math.acos(max(-1.0, min(1.0, vp[2])))
            php = math.atan2(vp[1], vp[0]) % (2 * math.pi)
            for m in range(-l, l + 1):
                lhs = specfun.spherical_harmonic(l, m, thp, php)
                rhs = sum(D[mp + l, m + l] * specfun.spherical_harmonic(l, mp, th, ph)
                          for mp in range(-l, l + 1))
                assert abs(lhs - rhs) <= 1e-12


def _euler_from_matrix(R):
    eps = math.acos(max(-1.0, min(1.0, R[2, 2])))
    if abs(math.sin(eps)) < 1e-12:
        return math.atan2(R[1, 0], R[0, 0]), eps, 0.0
    xi = math.atan2(R[1, 2], R[0, 2])
    tau = math.atan2(R[2, 1], -R[2, 0])
    return xi, eps, tau
