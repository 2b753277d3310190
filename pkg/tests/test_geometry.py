import math

import numpy as np
import pytest

from dslocal import geometry
from dslocal.geometry import DeSitterParams, Series, SpacetimePoint
from dslocal.modes import ModeField, radial_factor_and_dt


class TestParams:
    def test_series_classification(self):
        assert DeSitterParams(M=0.5).series is Series.COMPLEMENTARY
        assert DeSitterParams(M=2.5).series is Series.PRINCIPAL

    def test_nu_identity(self):
        for M in (0.3, 0.9, 1.5, 7.0):
            p = DeSitterParams(M=M)
            assert abs(p.nu * (p.nu + 1.0) - (0.75 - M * M)) < 1e-13

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            DeSitterParams(M=1.0)
        with pytest.raises(ValueError):
            DeSitterParams(M=-2.0)
        with pytest.raises(ValueError):
            DeSitterParams(M=2.0, alpha=0.0)

    def test_both_branches(self):
        plus = DeSitterParams(M=2.5, branch=1)
        minus = DeSitterParams(M=2.5, branch=-1)
        assert plus.nu.imag > 0 > minus.nu.imag
        assert abs(plus.nu - (-1.0 - minus.nu)) < 1e-15

    def test_physical_constructor(self):
        p = geometry.params_from_physical(m_p=2.0, xi=0.5, alpha=2.0)
        mu2 = 4.0 + 0.5 * 6.0 / 4.0
        assert p.M == pytest.approx(2.0 * math.sqrt(mu2), rel=1e-14)


class TestEmbedding:
    def test_chart_origin(self):
        p = DeSitterParams(M=2.5, alpha=1.5)
        X = geometry.embed(p, SpacetimePoint(0.0, 0.0, 0.0))
        assert np.allclose(X, [0.0, 0.0, 0.0, 1.5], atol=1e-15)

    def test_hyperboloid_constraint(self):
        rng = np.random.default_rng(2)
        p = DeSitterParams(M=0.5, alpha=2.0)
        for _ in range(25):
            pt = SpacetimePoint(rng.uniform(-3, 3), rng.uniform(0, math.pi),
                                rng.uniform(0, 2 * math.pi))
            X = geometry.embed(p, pt)
            assert geometry.minkowski_square(X) == pytest.approx(-p.alpha ** 2, rel=1e-14)

    def test_direct_substitution(self):
        p = DeSitterParams(M=2.5, alpha=1.0)
        X = geometry.embed(p, SpacetimePoint(1.0, math.pi / 2.0, 0.0))
        assert np.allclose(X, [math.sinh(1.0), math.cosh(1.0), 0.0, 0.0], atol=1e-15)

    def test_metric_reconstruction(self):
        p = DeSitterParams(M=2.5, alpha=1.3)
        pt = SpacetimePoint(0.4, 1.1, 2.0)
        g = geometry.metric_fd(p, pt)
        ch2 = math.cosh(pt.t / p.alpha) ** 2
        assert g[0, 0] == pytest.approx(1.0, abs=1e-8)
        assert g[1, 1] == pytest.approx(-p.alpha ** 2 * ch2, rel=1e-8)
        assert g[2, 2] == pytest.approx(-p.alpha ** 2 * ch2 * math.sin(pt.theta) ** 2, rel=1e-8)
        off = [abs(g[i, j]) for i in range(3) for j in range(3) if i != j]
        assert max(off) < 1e-8


class TestScaleFactor:
    def test_values_and_symmetry(self):
        p = DeSitterParams(M=2.5, alpha=1.7)
        assert geometry.scale_factor(p, 0.0) == pytest.approx(1.7, rel=1e-15)
        assert geometry.scale_factor(p, 1.7) == pytest.approx(1.7 * math.cosh(1.0), rel=1e-15)
        assert geometry.scale_factor(p, 0.9) == geometry.scale_factor(p, -0.9)


class TestKGOperator:
    def test_mode_is_solution_principal(self):
        p = DeSitterParams(M=2.5)
        u = ModeField(p, 0, 0, "u")
        pt = SpacetimePoint(0.3, 1.0, 0.5)
        res = geometry.kg_operator_fd(p, u, pt)
        scale = abs(radial_factor_and_dt(p, 0, pt.t)[0]) / (2.0 * math.sqrt(math.pi))
        assert abs(res) <= 1e-5 * scale

    def test_mode_is_solution_complementary(self):
        p = DeSitterParams(M=0.5)
        u = ModeField(p, 2, 1, "u")
        pt = SpacetimePoint(0.4, 1.2, 0.8)
        res = geometry.kg_operator_fd(p, u, pt)
        scale = abs(radial_factor_and_dt(p, 2, pt.t)[0]) * math.sqrt(5.0 / (4.0 * math.pi))
        assert abs(res) <= 1e-5 * scale

    def test_constant_is_harmonic(self):
        p = DeSitterParams(M=2.5)
        pt = SpacetimePoint(0.2, 1.3, 0.4)
        res = geometry.kg_operator_fd(p, lambda q: 1.0 + 0j, pt, include_mass=False)
        assert abs(res) < 1e-9

    def test_pole_guard(self):
        p = DeSitterParams(M=2.5)
        with pytest.raises(geometry.PoleProximityError):
            geometry.kg_operator_fd(p, lambda q: 0.0j, SpacetimePoint(0.0, 1e-4, 0.0))
