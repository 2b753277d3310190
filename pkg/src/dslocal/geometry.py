"""de Sitter geometry: embedding chart, scale factor, wave-operator stencil.

The spacetime is the hyperboloid X.X = -alpha^2 in 3+1 Minkowski space,
charted by (t, theta, phi) with X^0 = alpha*sinh(t/alpha) and the spatial
part on a sphere of radius a(t) = alpha*cosh(t/alpha).  Units use hbar = 1;
the single mass input is M = alpha*mu, with a helper mapping a physical mass
and curvature coupling to M via mu^2 = m_p^2 + xi*R, R = 6/alpha^2.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np


class Series(enum.Enum):
    PRINCIPAL = "principal"
    COMPLEMENTARY = "complementary"


class PoleProximityError(Exception):
    """Stencil too close to a coordinate pole of the chart."""


@dataclass(frozen=True)
class DeSitterParams:
    """Physical configuration: radius alpha, mass parameter M, derived degree.

    ``branch`` selects the sign in nu = -1/2 + branch*sqrt(1 - M^2); both
    branches describe the same physics (tested elsewhere), the default is +1.
    """

    M: float
    alpha: float = 1.0
    branch: int = 1
    nu: complex = field(init=False)
    series: Series = field(init=False)

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise ValueError("alpha must be positive")
        if self.M <= 0.0:
            raise ValueError("M must be positive")
        if abs(self.M - 1.0) < 1e-12:
            raise ValueError("mass parameter M = 1 is excluded")
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        root = cmath.sqrt(1.0 - self.M * self.M)
        nu = -0.5 + self.branch * root
        series = Series.COMPLEMENTARY if self.M < 1.0 else Series.PRINCIPAL
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "series", series)
        check = self.nu * (self.nu + 1.0) - (0.75 - self.M * self.M)
        if abs(check) > 1e-13 * (1.0 + self.M * self.M):
            raise AssertionError("nu(nu+1) = 3/4 - M^2 violated")


def params_from_physical(m_p, xi, alpha=1.0, branch=1) -> DeSitterParams:
    """Build parameters from particle mass and curvature coupling (hbar = 1)."""
    R = 6.0 / (alpha * alpha)
    mu2 = m_p * m_p + xi * R
    if mu2 <= 0.0:
        raise ValueError("mu^2 = m_p^2 + xi*R must be positive")
    return DeSitterParams(M=alpha * math.sqrt(mu2), alpha=alpha, branch=branch)


@dataclass(frozen=True)
class SpacetimePoint:
    t: float
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi <= 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi], got {self.phi}")


def embed(params: DeSitterParams, p: SpacetimePoint) -> np.ndarray:
    """Minkowski embedding (X^0, X^1, X^2, X^3) of the chart point."""
    a = params.alpha
    tau = p.t / a
    r = a * math.cosh(tau)
    st, ct = math.sin(p.theta), math.cos(p.theta)
    return np.array([
        a * math.sinh(tau),
        r * st * math.cos(p.phi),
        r * st * math.sin(p.phi),
        r * ct,
    ])


def minkowski_square(X) -> float:
    X = np.asarray(X, dtype=float)
    return X[0] * X[0] - X[1] * X[1] - X[2] * X[2] - X[3] * X[3]


def scale_factor(params: DeSitterParams, t) -> float:
    """Radius a(t) = alpha*cosh(t/alpha) of the constant-t sphere."""
    return params.alpha * np.cosh(np.asarray(t, dtype=float) / params.alpha)


def embedding_jacobian(params: DeSitterParams, p: SpacetimePoint) -> np.ndarray:
    """4x3 Jacobian dX^a/d(t, theta, phi), analytic."""
    a = params.alpha
    tau = p.t / a
    ch, sh = math.cosh(tau), math.sinh(tau)
    st, ct = math.sin(p.theta), math.cos(p.theta)
    sp, cp = math.sin(p.phi), math.cos(p.phi)
    return np.array([
        [ch, 0.0, 0.0],
        [sh * st * cp, a * ch * ct * cp, -a * ch * st * sp],
        [sh * st * sp, a * ch * ct * sp, a * ch * st * cp],
        [sh * ct, -a * ch * st, 0.0],
    ])


# 5-point central stencils, O(h^4)
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_OFFS = np.array([-2, -1, 0, 1, 2])

DEFAULT_STEPS = (1e-3, 1e-3, 1e-3)  # (h_t in units of alpha, h_theta, h_phi)


def _stencil_eval(f, p: SpacetimePoint, coord: int, h: float):
    """Values of f at the five stencil points along one chart coordinate."""
    vals = []
    for k in _OFFS:
        q = [p.t, p.theta, p.phi]
        q[coord] += k * h
        if coord == 2:
            q[2] = q[2] % (2.0 * math.pi)
        vals.append(f(SpacetimePoint(q[0], q[1], q[2])))
    return np.asarray(vals, dtype=complex)


def kg_operator_fd(params: DeSitterParams, f, p: SpacetimePoint,
                   h=DEFAULT_STEPS, include_mass=True):
    """Central-difference estimate of (box + M^2/alpha^2) f at p.

    ``f`` maps SpacetimePoint -> complex.  theta must stay at least 4*h_theta
    away from the poles; O(h^4) truncation for all stencils.
    """
    h_t, h_th, h_ph = h
    h_t = h_t * params.alpha
    if p.theta < 4.0 * h_th or p.theta > math.pi - 4.0 * h_th:
        raise PoleProximityError(f"theta = {p.theta} too close to a chart pole")
    a = params.alpha
    tau = p.t / a

    vt = _stencil_eval(f, p, 0, h_t)
    vth = _stencil_eval(f, p, 1, h_th)
    vph = _stencil_eval(f, p, 2, h_ph)

    f0 = vt[2]
    f_t = _D1 @ vt / h_t
    f_tt = _D2 @ vt / (h_t * h_t)
    f_th = _D1 @ vth / h_th
    f_thth = _D2 @ vth / (h_th * h_th)
    f_phph = _D2 @ vph / (h_ph * h_ph)

    ch = math.cosh(tau)
    st, ct = math.sin(p.theta), math.cos(p.theta)
    angular = f_thth + (ct / st) * f_th + f_phph / (st * st)
    box = f_tt + (2.0 / a) * math.tanh(tau) * f_t - angular / (a * a * ch * ch)
    if include_mass:
        return box + (params.M / a) ** 2 * f0
    return box


def metric_fd(params: DeSitterParams, p: SpacetimePoint, h=1e-5) -> np.ndarray:
    """Chart metric g_ab reconstructed from finite-difference Jacobians."""
    eta = np.diag([1.0, -1.0, -1.0, -1.0])
    J = np.empty((4, 3))
    for c in range(3):
        cols = []
        for k in _OFFS:
            q = [p.t, p.theta, p.phi]
            q[c] += k * h
            cols.append(embed(params, SpacetimePoint(*q)))
        cols = np.asarray(cols)
        J[:, c] = _D1 @ cols / h
    return J.T @ eta @ J
