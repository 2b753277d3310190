"""Energy modes, state containers, and the conserved sesquilinear form.

Positive modes u_{l,m} combine the radial factor
sqrt(gamma_l/2alpha) * N(nu) * T(i sinh(t/alpha)) / sqrt(cosh(t/alpha))
with orthonormal spherical harmonics; negative modes use the reflected
argument -i sinh(t/alpha).  For gamma_l < 0 (complementary series) the
square root takes the principal complex branch +i*sqrt(|gamma_l|/2alpha),
applied identically to both mode families; the resulting overall per-shell
phase is fixed once here.

The inner product is i a(t)^2 * integral(f* dt(g) - dt(f*) g) over the
constant-t sphere, evaluated by Gauss-Legendre x trapezoid quadrature.
Time derivatives of modes are analytic (chain rule through the Legendre
derivative), so orthonormality tolerances reflect quadrature only.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .geometry import DeSitterParams, SpacetimePoint, scale_factor


def state_index(l: int, m: int) -> int:
    """Flat index of (l, m) in the packed coefficient table."""
    if abs(m) > l:
        raise IndexError(f"|m| = {abs(m)} exceeds l = {l}")
    return l * l + l + m


def index_pairs(l_max: int):
    """(l, m) pairs in packed order."""
    return [(l, m) for l in range(l_max + 1) for m in range(-l, l + 1)]


@dataclass
class StateCoefficients:
    """Truncated complex coefficient table phi_{l,m}, 0 <= l <= l_max, |m| <= l."""

    l_max: int
    coeffs: np.ndarray
    normalized: bool = False

    @classmethod
    def zeros(cls, l_max: int):
        return cls(l_max=l_max, coeffs=np.zeros((l_max + 1) ** 2, dtype=complex))

    @classmethod
    def from_dict(cls, l_max: int, entries: dict, normalize: bool = False):
        s = cls.zeros(l_max)
        for (l, m), v in entries.items():
            s.coeffs[state_index(l, m)] = v
        if normalize:
            s.normalize()
        return s

    def get(self, l: int, m: int) -> complex:
        return complex(self.coeffs[state_index(l, m)])

    def set(self, l: int, m: int, value):
        self.coeffs[state_index(l, m)] = value
        self.normalized = False

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def normalize(self):
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        self.coeffs = self.coeffs / n
        self.normalized = True
        return self

    def copy(self):
        return StateCoefficients(self.l_max, self.coeffs.copy(), self.normalized)

    def padded(self, l_max: int):
        """Same state embedded in a larger truncation."""
        if l_max < self.l_max:
            raise ValueError("target truncation smaller than current")
        out = StateCoefficients.zeros(l_max)
        out.coeffs[: len(self.coeffs)] = self.coeffs
        out.normalized = self.normalized
        return out

    def to_json(self) -> str:
        entries = [
            {"l": l, "m": m,
             "re": float(self.coeffs[state_index(l, m)].real),
             "im": float(self.coeffs[state_index(l, m)].imag)}
            for l, m in index_pairs(self.l_max)
        ]
        return json.dumps({"l_max": self.l_max, "coeffs": entries})

    @classmethod
    def from_json(cls, text: str):
        doc = json.loads(text)
        s = cls.zeros(int(doc["l_max"]))
        for e in doc["coeffs"]:
            s.coeffs[state_index(int(e["l"]), int(e["m"]))] = float(e["re"]) + 1j * float(e["im"])
        if abs(s.norm() - 1.0) < 1e-9:
            s.normalized = True
        return s


def random_state(l_max: int, rng) -> StateCoefficients:
    """Normalized state with Gaussian random coefficients."""
    n = (l_max + 1) ** 2
    s = StateCoefficients(l_max, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return s.normalize()


class SphereGrid:
    """Gauss-Legendre x uniform-trapezoid quadrature on the unit sphere.

    Exact for products of harmonics up to combined degree 2*n_theta - 1 in
    cos(theta); the optional t-step drives 5-point time stencils for samplers
    without analytic time derivatives.
    """

    def __init__(self, n_theta=64, n_phi=128, t_step=1e-3):
        self.n_theta = int(n_theta)
        self.n_phi = int(n_phi)
        self.t_step = float(t_step)
        x, w = np.polynomial.legendre.leggauss(self.n_theta)
        self.x = x
        self.theta = np.arccos(x)
        self.w_theta = w
        self.phi = 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi
        self.w_phi = 2.0 * math.pi / self.n_phi
        self.theta_mesh = np.broadcast_to(self.theta[:, None], (self.n_theta, self.n_phi))
        self.phi_mesh = np.broadcast_to(self.phi[None, :], (self.n_theta, self.n_phi))
        self._harmonics: dict[int, np.ndarray] = {}

    def weights(self) -> np.ndarray:
        return self.w_theta[:, None] * self.w_phi * np.ones((1, self.n_phi))

    def integrate(self, values) -> complex:
        """Integral over the sphere of values sampled on the (theta, phi) mesh."""
        v = np.asarray(values)
        return complex(np.sum(v * self.w_theta.reshape((-1, 1)) * self.w_phi))

    def harmonics(self, l_max: int) -> np.ndarray:
        """Cached Y table, shape ((l_max+1)^2, n_theta, n_phi)."""
        have = self._harmonics.get(l_max)
        if have is None:
            have = specfun.sph_harm_table(l_max, self.theta_mesh, self.phi_mesh)
            self._harmonics[l_max] = have
        return have

    def project(self, values, l_max: int) -> np.ndarray:
        """Coefficients <Y_l^m, values> for all l <= l_max."""
        Y = self.harmonics(l_max)
        w = self.w_theta.reshape((1, -1, 1)) * self.w_phi
        return np.sum(np.conj(Y) * np.asarray(values)[None, :, :] * w, axis=(1, 2))


# ----------------------------------------------------------------------
# radial factors and mode fields


def sqrt_gamma_factor(params: DeSitterParams, l: int) -> complex:
    """Principal branch of sqrt(gamma_l / (2 alpha))."""
    g = specfun.gamma_l(params, l)
    return cmath.sqrt(complex(g) / (2.0 * params.alpha))


def radial_factor(params: DeSitterParams, l: int, t: float) -> complex:
    """Radial factor of u_{l,m} at time t (independent of m)."""
    od = specfun.order_degree(params.nu, l)
    arg = specfun.FerrersArg.from_time(t, params.alpha)
    T = specfun.ferrers_T(od, arg)
    ch = math.cosh(t / params.alpha)
    return sqrt_gamma_factor(params, l) * specfun.phase_N(params.nu) * T / math.sqrt(ch)


def radial_factor_and_dt(params: DeSitterParams, l: int, t: float):
    """(r_l(t), dr_l/dt) with the time derivative taken analytically."""
    od = specfun.order_degree(params.nu, l)
    arg = specfun.FerrersArg.from_time(t, params.alpha)
    T, dT = specfun.ferrers_T_and_dz(od, arg)
    a = params.alpha
    tau = t / a
    ch, sh = math.cosh(tau), math.sinh(tau)
    pref = sqrt_gamma_factor(params, l) * specfun.phase_N(params.nu)
    r = pref * T / math.sqrt(ch)
    # z = i sinh(tau): dz/dt = i cosh(tau)/alpha
    dr = pref * (dT * (1j * ch / a) / math.sqrt(ch) - T * sh / (2.0 * a * ch ** 1.5))
    return r, dr


def radial_factor_negative(params: DeSitterParams, l: int, t: float):
    """(s_l(t), ds_l/dt) for the reflected-argument (negative-energy) family."""
    od = specfun.order_degree(params.nu, l)
    arg = specfun.FerrersArg.from_time(-t, params.alpha)
    T, dT = specfun.ferrers_T_and_dz(od, arg)  # T(-z), T'(-z)
    a = params.alpha
    tau = t / a
    ch, sh = math.cosh(tau), math.sinh(tau)
    pref = sqrt_gamma_factor(params, l) * specfun.phase_N(params.nu)
    r = pref * T / math.sqrt(ch)
    # d/dt T(-z(t)) = -T'(-z) * i cosh(tau)/alpha
    dr = pref * (-dT * (1j * ch / a) / math.sqrt(ch) - T * sh / (2.0 * a * ch ** 1.5))
    return r, dr


class ModeField:
    """Sampler for a single mode, with analytic time derivative and grid paths."""

    def __init__(self, params: DeSitterParams, l: int, m: int, kind: str = "u"):
        if kind not in ("u", "v"):
            raise ValueError("kind must be 'u' or 'v'")
        if abs(m) > l:
            raise IndexError(f"|m| = {abs(m)} exceeds l = {l}")
        self.params = params
        self.l = l
        self.m = m
        self.kind = kind

    def _radial(self, t):
        if self.kind == "u":
            return radial_factor_and_dt(self.params, self.l, t)
        return radial_factor_negative(self.params, self.l, t)

    def value(self, p: SpacetimePoint) -> complex:
        r, _ = self._radial(p.t)
        return r * specfun.spherical_harmonic(self.l, self.m, p.theta, p.phi)

    def dt(self, p: SpacetimePoint) -> complex:
        _, dr = self._radial(p.t)
        return dr * specfun.spherical_harmonic(self.l, self.m, p.theta, p.phi)

    def __call__(self, p: SpacetimePoint) -> complex:
        return self.value(p)

    def on_grid(self, t: float, grid: SphereGrid):
        r, dr = self._radial(t)
        Y = grid.harmonics(self.l)[state_index(self.l, self.m)]
        return r * Y, dr * Y


def mode_u(params: DeSitterParams, l: int, m: int, p: SpacetimePoint) -> complex:
    """Positive-energy mode u_{l,m} at a spacetime point."""
    return ModeField(params, l, m, "u").value(p)


def mode_v(params: DeSitterParams, l: int, m: int, p: SpacetimePoint) -> complex:
    """Negative-energy mode v_{l,m} at a spacetime point."""
    return ModeField(params, l, m, "v").value(p)


def superpose(params: DeSitterParams, state: StateCoefficients, p: SpacetimePoint) -> complex:
    """Truncated positive-energy superposition sum phi_{l,m} u_{l,m} at p."""
    total = 0.0 + 0j
    for l in range(state.l_max + 1):
        r, _ = radial_factor_and_dt(params, l, p.t)
        for m in range(-l, l + 1):
            c = state.coeffs[state_index(l, m)]
            if c != 0.0:
                total += c * r * specfun.spherical_harmonic(l, m, p.theta, p.phi)
    return total


class SuperpositionField:
    """Sampler for a coefficient superposition of positive modes."""

    def __init__(self, params: DeSitterParams, state: StateCoefficients):
        self.params = params
        self.state = state

    def _radials(self, t):
        rs, drs = [], []
        for l in range(self.state.l_max + 1):
            r, dr = radial_factor_and_dt(self.params, l, t)
            rs.append(r)
            drs.append(dr)
        return rs, drs

    def value(self, p: SpacetimePoint) -> complex:
        return superpose(self.params, self.state, p)

    def dt(self, p: SpacetimePoint) -> complex:
        total = 0.0 + 0j
        for l in range(self.state.l_max + 1):
            _, dr = radial_factor_and_dt(self.params, l, p.t)
            for m in range(-l, l + 1):
                c = self.state.coeffs[state_index(l, m)]
                if c != 0.0:
                    total += c * dr * specfun.spherical_harmonic(l, m, p.theta, p.phi)
        return total

    def __call__(self, p):
        return self.value(p)

    def on_grid(self, t: float, grid: SphereGrid):
        Y = grid.harmonics(self.state.l_max)
        rs, drs = self._radials(t)
        vals = np.zeros((grid.n_theta, grid.n_phi), dtype=complex)
        dvals = np.zeros_like(vals)
        for l in range(self.state.l_max + 1):
            for m in range(-l, l + 1):
                c = self.state.coeffs[state_index(l, m)]
                if c != 0.0:
                    vals += c * rs[l] * Y[state_index(l, m)]
                    dvals += c * drs[l] * Y[state_index(l, m)]
        return vals, dvals


def _sampler_on_grid(sampler, t: float, grid: SphereGrid):
    """(values, time-derivative values) on the grid mesh for any sampler.

    Uses the sampler's own grid path when available, otherwise samples per
    node; a missing analytic dt falls back to the grid's 5-point t-stencil.
    """
    if hasattr(sampler, "on_grid"):
        return sampler.on_grid(t, grid)
    value = sampler.value if hasattr(sampler, "value") else sampler
    vals = np.empty((grid.n_theta, grid.n_phi), dtype=complex)
    for i in range(grid.n_theta):
        for j in range(grid.n_phi):
            vals[i, j] = value(SpacetimePoint(t, grid.theta[i], grid.phi[j]))
    if hasattr(sampler, "dt"):
        dvals = np.empty_like(vals)
        for i in range(grid.n_theta):
            for j in range(grid.n_phi):
                dvals[i, j] = sampler.dt(SpacetimePoint(t, grid.theta[i], grid.phi[j]))
        return vals, dvals
    h = grid.t_step
    stack = []
    for k in (-2, -1, 1, 2):
        vk = np.empty_like(vals)
        for i in range(grid.n_theta):
            for j in range(grid.n_phi):
                vk[i, j] = value(SpacetimePoint(t + k * h, grid.theta[i], grid.phi[j]))
        stack.append(vk)
    dvals = (stack[0] - 8.0 * stack[1] + 8.0 * stack[2] - stack[3]) / (12.0 * h)
    return vals, dvals


def _sampler_bandwidth(sampler):
    if hasattr(sampler, "l"):
        return sampler.l
    state = getattr(sampler, "state", None)
    if state is not None:
        return state.l_max
    return None


def inner_product(params: DeSitterParams, f, g, t: float, grid: SphereGrid) -> complex:
    """Conserved Hermitian form i a(t)^2 * int (f* dt g - dt f* g) sin dtheta dphi.

    Warns when the harmonic bandwidth of the samplers (if known) exceeds the
    grid's exact-integration degree.
    """
    bf, bg = _sampler_bandwidth(f), _sampler_bandwidth(g)
    if bf is not None and bg is not None and bf + bg > 2 * grid.n_theta - 1:
        warnings.warn(
            f"sampler bandwidth {bf}+{bg} exceeds grid exactness degree "
            f"{2 * grid.n_theta - 1}", stacklevel=2)
    fv, fd = _sampler_on_grid(f, t, grid)
    gv, gd = _sampler_on_grid(g, t, grid)
    a = scale_factor(params, t)
    integrand = np.conj(fv) * gd - np.conj(fd) * gv
    return 1j * a * a * grid.integrate(integrand)


def mode_bandwidth_guard(grid: SphereGrid, l_max: int):
    if grid.n_theta < l_max + 1:
        raise ValueError(
            f"grid exactness (n_theta = {grid.n_theta}) below bandwidth l_max = {l_max}")


def orthonormality_matrix(params: DeSitterParams, l_max: int, t: float,
                          grid: SphereGrid, sector: str = "u") -> np.ndarray:
    """Gram matrix of the mode family on the slice at time t.

    sector 'u' pairs positive modes (expected identity), 'v' negative modes
    (expected -identity), 'cross' is <u, v> (expected zero).
    """
    if sector not in ("u", "v", "cross"):
        raise ValueError("sector must be 'u', 'v' or 'cross'")
    mode_bandwidth_guard(grid, l_max)
    Y = grid.harmonics(l_max)[: (l_max + 1) ** 2]
    n = (l_max + 1) ** 2
    vals = np.empty((n, grid.n_theta, grid.n_phi), dtype=complex)
    dvals = np.empty_like(vals)
    vals2 = np.empty_like(vals)
    dvals2 = np.empty_like(vals)
    for l in range(l_max + 1):
        ru, dru = radial_factor_and_dt(params, l, t)
        rv, drv = radial_factor_negative(params, l, t)
        r1, dr1 = (ru, dru) if sector in ("u", "cross") else (rv, drv)
        r2, dr2 = (rv, drv) if sector in ("v", "cross") else (ru, dru)
        for m in range(-l, l + 1):
            k = state_index(l, m)
            vals[k] = r1 * Y[k]
            dvals[k] = dr1 * Y[k]
            vals2[k] = r2 * Y[k]
            dvals2[k] = dr2 * Y[k]
    w = grid.w_theta.reshape((1, -1, 1)) * grid.w_phi
    a = scale_factor(params, t)
    F = (vals.conj() * w).reshape(n, -1)
    Fd = (dvals.conj() * w).reshape(n, -1)
    G = vals2.reshape(n, -1)
    Gd = dvals2.reshape(n, -1)
    return 1j * a * a * (F @ Gd.T - Fd @ G.T)


def two_point_G(params: DeSitterParams, p1: SpacetimePoint, p2: SpacetimePoint,
                l_max: int):
    """Partial sum of the vacuum two-point function with the second point at
    the pole: sum_{l<=l_max} u_{l,0}(p1) conj(u_{l,0}(p2)).

    Returns (value, last_shell_increment) so callers can judge convergence.
    """
    if abs(p2.theta) > 1e-12:
        raise ValueError("second point must sit at the coordinate pole theta = 0")
    total = 0.0 + 0j
    last = 0.0 + 0j
    for l in range(l_max + 1):
        r1, _ = radial_factor_and_dt(params, l, p1.t)
        r2, _ = radial_factor_and_dt(params, l, p2.t)
        y1 = specfun.spherical_harmonic(l, 0, p1.theta, p1.phi)
        y2 = specfun.spherical_harmonic(l, 0, p2.theta, p2.phi)
        last = r1 * y1 * np.conj(r2 * y2)
        total += last
    return total, last


def large_mass_product_check(params: DeSitterParams, f, g, t: float, grid: SphereGrid):
    """(exact, approximate) pair for the large-mass form comparison.

    exact is the conserved form; approximate is 2 mu a(t)^2 * int f* g dOmega
    with mu = M/alpha (hbar = 1).  The caller judges closeness.
    """
    exact = inner_product(params, f, g, t, grid)
    fv, _ = _sampler_on_grid(f, t, grid)
    gv, _ = _sampler_on_grid(g, t, grid)
    a = scale_factor(params, t)
    mu = params.M / params.alpha
    approx = 2.0 * mu * a * a * grid.integrate(np.conj(fv) * gv)
    return exact, approx
