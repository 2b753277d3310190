"""Discrete symmetries and the so(3,1) generator actions on states and fields.

Discrete maps act on coefficient tables in the orthonormal-harmonic
convention.  Continuous generators act on field samplers as first-order
differential operators built from the embedding: the generator's Minkowski
components are projected onto the chart basis through the embedding Jacobian
and the chart derivatives are taken with 5-point central differences.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .geometry import DeSitterParams, SpacetimePoint, Series, embedding_jacobian, embed
from .modes import (ModeField, SphereGrid, StateCoefficients, radial_factor_and_dt,
                    scale_factor, state_index)


class GeneratorId(enum.Enum):
    N12 = "N12"
    N23 = "N23"
    N31 = "N31"
    N01 = "N01"
    N02 = "N02"
    N03 = "N03"


_ROTATIONS = {GeneratorId.N12: (1, 2), GeneratorId.N23: (2, 3), GeneratorId.N31: (3, 1)}
_BOOSTS = {GeneratorId.N01: 1, GeneratorId.N02: 2, GeneratorId.N03: 3}

DISCRETE_SYMMETRIES = ("P1", "P2", "P3", "P", "T")


class SingularJacobianError(Exception):
    """Chart direction degenerate (too close to a pole)."""


def time_reversal_sign(params: DeSitterParams) -> int:
    """Series-dependent phase of the antiunitary time reversal.

    Chosen so that the transformed state's field equals the complex conjugate
    of the time-reflected field pointwise; the complementary series picks up
    an extra -1 relative to the principal series because the per-shell factor
    sqrt(gamma_l/2alpha) is imaginary there.
    """
    return 1 if params.series is Series.PRINCIPAL else -1


def apply_discrete(sym: str, params: DeSitterParams, state: StateCoefficients) -> StateCoefficients:
    """Coefficient map of a discrete symmetry in the orthonormal convention.

    P1: phi_{l,m} -> phi_{l,-m}          (azimuth phi -> pi - phi)
    P2: phi_{l,m} -> (-1)^m phi_{l,-m}   (azimuth phi -> -phi)
    P3: phi_{l,m} -> (-1)^(l+m) phi_{l,m} (polar theta -> pi - theta)
    P:  phi_{l,m} -> (-1)^l phi_{l,m}
    T:  phi_{l,m} -> s (-1)^m conj(phi_{l,-m}), s = time_reversal_sign(params)
    """
    if sym not in DISCRETE_SYMMETRIES:
        raise ValueError(f"unknown symmetry {sym!r}")
    out = StateCoefficients.zeros(state.l_max)
    out.normalized = state.normalized
    s_t = time_reversal_sign(params)
    for l in range(state.l_max + 1):
        for m in range(-l, l + 1):
            c = state.coeffs[state_index(l, m)]
            if sym == "P1":
                out.coeffs[state_index(l, -m)] += c
            elif sym == "P2":
                out.coeffs[state_index(l, -m)] += (-1.0) ** m * c
            elif sym == "P3":
                out.coeffs[state_index(l, m)] += (-1.0) ** (l + m) * c
            elif sym == "P":
                out.coeffs[state_index(l, m)] += (-1.0) ** l * c
            else:  # T
                out.coeffs[state_index(l, -m)] += s_t * (-1.0) ** m * np.conj(c)
    return out


# ----------------------------------------------------------------------
# generator vector fields


def _embedding_components(gen: GeneratorId, X: np.ndarray) -> np.ndarray:
    """Minkowski components V^a of the generator at embedding point X."""
    V = np.zeros(4)
    if gen in _ROTATIONS:
        i, j = _ROTATIONS[gen]
        V[i] = X[j]
        V[j] = -X[i]
    else:
        k = _BOOSTS[gen]
        V[0] = X[k]
        V[k] = X[0]
    return V


def chart_components(gen: GeneratorId, params: DeSitterParams, p: SpacetimePoint) -> np.ndarray:
    """Components (w_t, w_theta, w_phi) of the generator in the chart basis.

    Solves J w = V in the least-squares sense; exact because the generator is
    tangent to the hyperboloid.
    """
    if math.sin(p.theta) < 1e-8:
        raise SingularJacobianError(f"theta = {p.theta} too close to a pole")
    J = embedding_jacobian(params, p)
    V = _embedding_components(gen, embed(params, p))
    w, *_ = np.linalg.lstsq(J, V, rcond=None)
    return w


_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_OFFS = (-2, -1, 1, 2)
_D1_SIDE = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


def apply_generator_fd(gen: GeneratorId, params: DeSitterParams, f, p: SpacetimePoint,
                       h: float = 1e-4):
    """Generator applied to a field sampler at p by chart finite differences."""
    w = chart_components(gen, params, p)
    value = f.value if hasattr(f, "value") else f
    total = 0.0 + 0j
    for c in range(3):
        if w[c] == 0.0:
            continue
        vals = []
        for k in _OFFS:
            q = [p.t, p.theta, p.phi]
            q[c] += k * h
            if c == 2:
                q[2] = q[2] % (2.0 * math.pi)
            vals.append(value(SpacetimePoint(*q)))
        total += w[c] * (_D1_SIDE @ np.asarray(vals, dtype=complex)) / h
    return total


def _chart_components_mesh(gen: GeneratorId, params: DeSitterParams, t: float,
                           theta, phi):
    """Vectorized chart components over (theta, phi) meshes at fixed t.

    Uses the orthogonality of the embedding Jacobian columns: w_c =
    <J_c, V> / |J_c|^2 in the Euclidean sense.
    """
    a = params.alpha
    tau = t / a
    ch, sh = math.cosh(tau), math.sinh(tau)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    X0 = a * sh
    X1 = a * ch * st * cp
    X2 = a * ch * st * sp
    X3 = a * ch * ct
    Jt = (ch, sh * st * cp, sh * st * sp, sh * ct)
    Jth = (0.0, a * ch * ct * cp, a * ch * ct * sp, -a * ch * st)
    Jph = (0.0, -a * ch * st * sp, a * ch * st * cp, 0.0)
    if gen in _ROTATIONS:
        i, j = _ROTATIONS[gen]
        Xs = (X0, X1, X2, X3)
        V = [np.zeros_like(X1) for _ in range(4)]
        V[i] = Xs[j]
        V[j] = -Xs[i]
    else:
        k = _BOOSTS[gen]
        Xs = (X0, X1, X2, X3)
        V = [np.zeros_like(X1) for _ in range(4)]
        V[0] = Xs[k]
        V[k] = Xs[0]
    nt = ch * ch + sh * sh
    nth = (a * ch) ** 2
    nph = (a * ch * st) ** 2
    wt = sum(Jt[a_] * V[a_] for a_ in range(4)) / nt
    wth = sum(Jth[a_] * V[a_] for a_ in range(4)) / nth
    wph = sum(Jph[a_] * V[a_] for a_ in range(4)) / nph
    return wt, wth, wph


class GeneratorField:
    """Sampler for gen . u_{l,m}: vectorized on grids, FD in the chart angles,
    analytic in t for the mode's radial factor."""

    def __init__(self, gen: GeneratorId, params: DeSitterParams, l: int, m: int,
                 h: float = 1e-5):
        self.gen = gen
        self.params = params
        self.l = l
        self.m = m
        self.h = h

    def _mesh_value(self, t, theta, phi):
        r, _ = radial_factor_and_dt(self.params, self.l, t)
        Y = specfun.sph_harm_table(self.l, theta, phi)[state_index(self.l, self.m)]
        return r * Y

    def _apply_at(self, t, theta, phi):
        wt, wth, wph = _chart_components_mesh(self.gen, self.params, t, theta, phi)
        r, dr = radial_factor_and_dt(self.params, self.l, t)
        Yt = specfun.sph_harm_table(self.l, theta, phi)[state_index(self.l, self.m)]
        du_dt = dr * Yt
        h = self.h
        du_dth = np.zeros_like(Yt)
        du_dph = np.zeros_like(Yt)
        for w_k, k in zip(_D1_SIDE, _OFFS):
            du_dth = du_dth + w_k * self._mesh_value(t, theta + k * h, phi)
            du_dph = du_dph + w_k * self._mesh_value(t, theta, phi + k * h)
        du_dth = du_dth / h
        du_dph = du_dph / h
        return wt * du_dt + wth * du_dth + wph * du_dph

    def on_grid(self, t: float, grid: SphereGrid):
        vals = self._apply_at(t, grid.theta_mesh, grid.phi_mesh)
        h = grid.t_step
        dvals = np.zeros_like(vals)
        for w_k, k in zip(_D1_SIDE, _OFFS):
            dvals = dvals + w_k * self._apply_at(t + k * h, grid.theta_mesh, grid.phi_mesh)
        dvals = dvals / h
        return vals, dvals

    def value(self, p: SpacetimePoint):
        return complex(self._apply_at(p.t, np.asarray(p.theta), np.asarray(p.phi)))


def ladder_coefficients(gen: GeneratorId, params: DeSitterParams, l: int, m: int,
                        t: float, grid: SphereGrid, selection_tol: float = 1e-6):
    """Measured projections <u_{l',m'}, gen . u_{l,m}> for l' <= l + 2.

    Returns (entries, max_outside): ``entries`` maps (l', m') inside the
    ladder window l' in {l-1, l, l+1}, m' in {m-1, m, m+1} to coefficients;
    projections outside the window must stay below ``selection_tol`` and the
    largest is returned for inspection.
    """
    if grid.n_theta < l + 3:
        raise ValueError("grid bandwidth too small for the requested shell")
    gfield = GeneratorField(gen, params, l, m)
    gv, gd = gfield.on_grid(t, grid)
    a = scale_factor(params, t)
    l_hi = min(l + 2, grid.n_theta - 1)
    entries = {}
    max_outside = 0.0
    w = grid.w_theta.reshape((-1, 1)) * grid.w_phi
    Y = grid.harmonics(l_hi)
    for lp in range(l_hi + 1):
        ru, dru = radial_factor_and_dt(params, lp, t)
        for mp_ in range(-lp, lp + 1):
            k = state_index(lp, mp_)
            f = ru * Y[k]
            fd = dru * Y[k]
            val = 1j * a * a * np.sum((np.conj(f) * gd - np.conj(fd) * gv) * w)
            if abs(lp - l) <= 1 and abs(mp_ - m) <= 1:
                entries[(lp, mp_)] = complex(val)
            else:
                max_outside = max(max_outside, abs(val))
    return entries, max_outside


def ladder_report(gen: GeneratorId, params: DeSitterParams, l: int, m: int,
                  t: float, grid: SphereGrid) -> dict:
    """Measured-coefficient report in the documented JSON shape:
    {generator, M, l, m, entries: [{l', m', re, im}]}."""
    entries, _ = ladder_coefficients(gen, params, l, m, t, grid)
    return {
        "generator": gen.value,
        "M": params.M,
        "l": l,
        "m": m,
        "entries": [
            {"l'": lp, "m'": mp_, "re": float(v.real), "im": float(v.imag)}
            for (lp, mp_), v in sorted(entries.items())
        ],
    }


def casimir_check(params: DeSitterParams, l: int, m: int, p: SpacetimePoint,
                  h: float = 1e-3):
    """(q_estimate, r_estimate) from nested finite-difference generator action.

    q_estimate = (Q u)(p) / u(p) is expected to equal M^2; r_estimate is the
    second invariant normalized by the mode's scale and is expected to vanish.
    """
    u = ModeField(params, l, m, "u")
    u0 = u.value(p)
    scale = abs(radial_factor_and_dt(params, l, p.t)[0]) * math.sqrt((2 * l + 1) / (4 * math.pi))
    if abs(u0) < 1e-3 * scale:
        raise ZeroDivisionError(
            f"|u_{l},{m}| too small at the probe point; choose a different p")

    def gen_apply(g, f):
        return lambda q: apply_generator_fd(g, params, f, q, h)

    rot = (GeneratorId.N12, GeneratorId.N23, GeneratorId.N31)
    boost = (GeneratorId.N01, GeneratorId.N02, GeneratorId.N03)
    q_val = 0.0 + 0j
    for g in rot:
        q_val += apply_generator_fd(g, params, gen_apply(g, u), p, h)
    for g in boost:
        q_val -= apply_generator_fd(g, params, gen_apply(g, u), p, h)
    r_val = 0.0 + 0j
    for gb, gr in ((GeneratorId.N01, GeneratorId.N23),
                   (GeneratorId.N02, GeneratorId.N31),
                   (GeneratorId.N03, GeneratorId.N12)):
        r_val -= apply_generator_fd(gb, params, gen_apply(gr, u), p, h)
    return q_val / u0, r_val / scale


def rotate_state(params: DeSitterParams, state: StateCoefficients,
                 xi: float, eps: float, tau: float) -> StateCoefficients:
    """Block-diagonal Wigner-matrix rotation of the coefficient table."""
    out = StateCoefficients.zeros(state.l_max)
    out.normalized = state.normalized
    for l in range(state.l_max + 1):
        D = specfun.wigner_D(l, xi, eps, tau)
        block = state.coeffs[l * l: l * l + 2 * l + 1]
        out.coeffs[l * l: l * l + 2 * l + 1] = D @ block
    return out
