"""Arbitrary-precision evaluation of the phase-adjusted Legendre family and
the derived mode quantities, with two independent evaluation routes.

Route 1 assembles T(i y) from Gauss hypergeometric functions; route 2 steps
the defining second-order ODE in y with locally recentered Taylor series.
Every emitted value must agree between the routes to at least 25 digits.

The family is pinned per (nu, sigma = l + 1/2) by its data at the origin:

    T(0)      = sqrt(pi) 2^-sigma G(nu+sigma+1)
                / [G(nu-sigma+1) G((sigma-nu+1)/2) G((nu+sigma)/2 + 1)]
    dT/dz(0)  = 1 / (G(-nu-sigma) G(nu-sigma+1) T(0))
"""

from __future__ import annotations

import mpmath as mp

TAYLOR_TERMS = 220
STEP_FRACTION = mp.mpf(1) / 2  # fraction of the local convergence radius


def nu_of(M, branch=1):
    """Degree nu = -1/2 + branch*sqrt(1 - M^2) at the working precision."""
    return mp.mpf(-1) / 2 + branch * mp.sqrt(1 - mp.mpf(M) ** 2)


def phase_N(nu):
    if mp.im(nu) > 0:
        return mp.mpc(0, -1)
    if mp.im(nu) < 0:
        return mp.mpc(0, 1)
    return mp.mpc(1)


def t_zero(nu, sigma):
    """Closed-form T(0)."""
    return (mp.sqrt(mp.pi) / 2 ** sigma * mp.gamma(nu + sigma + 1)
            / (mp.gamma(nu - sigma + 1) * mp.gamma((sigma - nu + 1) / 2)
               * mp.gamma((nu + sigma) / 2 + 1)))


def gamma_pair(nu, sigma):
    """G(-nu-sigma) G(nu-sigma+1), the per-shell normalization."""
    return mp.gamma(-nu - sigma) * mp.gamma(nu - sigma + 1)


def origin_state(nu, sigma):
    """(F(0), F'(0)) for F(y) = T(iy)."""
    t0 = t_zero(nu, sigma)
    return t0, mp.mpc(0, 1) / (gamma_pair(nu, sigma) * t0)


# ----------------------------------------------------------------------
# route 1: hypergeometric assembly


def _reference_solution(nu, sigma, z):
    """Hypergeometric reference solution with the (1 +/- z) branch structure
    off the real cuts."""
    w = (1 - z) / 2
    C = ((1 + z) / (1 - z)) ** (sigma / 2) / mp.gamma(1 - sigma)
    return C * mp.hyp2f1(-nu, nu + 1, 1 - sigma, w)


def _reference_at_zero(nu, sigma):
    return (2 ** sigma * mp.sqrt(mp.pi)
            / (mp.gamma((nu - sigma) / 2 + 1) * mp.gamma((1 - nu - sigma) / 2)))


def _combination(nu, sigma):
    t0, f0p = origin_state(nu, sigma)
    tp0 = -mp.mpc(0, 1) * f0p  # dT/dz at 0
    p0 = _reference_at_zero(nu, sigma)
    p0p = (sigma - nu - 1) * _reference_at_zero(nu + 1, sigma)
    r_even = t0 / p0
    r_odd = tp0 / p0p
    return (r_even + r_odd) / 2, (r_even - r_odd) / 2


def eval_hypergeometric(nu, sigma, y):
    """Route 1: T(iy) via the hypergeometric combination."""
    A, B = _combination(nu, sigma)
    z = mp.mpc(0, 1) * y
    return A * _reference_solution(nu, sigma, z) + B * _reference_solution(nu, sigma, -z)


# ----------------------------------------------------------------------
# route 2: recentered Taylor stepping of the ODE
#
# (1+y^2)^2 F'' + 2 y (1+y^2) F' - [nu(nu+1)(1+y^2) - sigma^2] F = 0


def _poly_mul(a, b):
    out = [mp.mpf(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _taylor_coeffs(nu, sigma, y0, f0, f1, n_terms):
    """Taylor coefficients of the solution around y0 from (F, F') there."""
    q = [1 + y0 * y0, 2 * y0, mp.mpf(1)]          # 1 + y^2 in u = y - y0
    p4 = _poly_mul(q, q)                            # (1+y^2)^2
    p3 = _poly_mul([2 * y0, mp.mpf(2)], q)          # 2 y (1+y^2)
    nn = nu * (nu + 1)
    p2 = [nn * q[0] - sigma * sigma, nn * q[1], nn * q[2]]
    c = [mp.mpc(f0), mp.mpc(f1)] + [mp.mpc(0)] * (n_terms - 2)
    # recurrence from sum_k of p4*c''(u) + p3*c'(u) - p2*c(u) = 0
    for k in range(n_terms - 2):
        acc = mp.mpc(0)
        # p4 c'': terms (k - j + 2)(k - j + 1) c_{k-j+2} p4_j for j >= 1
        for j in range(1, min(5, k + 3)):
            idx = k - j + 2
            if 0 <= idx < n_terms:
                acc += p4[j] * idx * (idx - 1) * c[idx]
        for j in range(0, min(4, k + 2)):
            idx = k - j + 1
            if 0 <= idx < n_terms:
                acc += p3[j] * idx * c[idx]
        for j in range(0, min(3, k + 1)):
            idx = k - j
            if 0 <= idx < n_terms:
                acc -= p2[j] * c[idx]
        c[k + 2] = -acc / (p4[0] * (k + 2) * (k + 1))
    return c


def _eval_poly(c, u):
    total = mp.mpc(0)
    for ck in reversed(c):
        total = total * u + ck
    return total


def _eval_poly_deriv(c, u):
    total = mp.mpc(0)
    for k in range(len(c) - 1, 0, -1):
        total = total * u + k * c[k]
    return total


def eval_ode(nu, sigma, y, phase_samples=0):
    """Route 2: T(iy) by Taylor stepping from the origin.

    With ``phase_samples`` > 0, also accumulates the continuous argument of
    N(nu) F(y) along the path (sampled densely within each step) and returns
    (value, unwrapped_arg).
    """
    f0, f1 = origin_state(nu, sigma)
    y_cur = mp.mpf(0)
    track = phase_samples > 0
    N = phase_N(nu)
    arg_acc = mp.arg(N * f0)
    prev = N * f0
    sign = 1 if y >= 0 else -1
    y = mp.mpf(y)
    # large |nu| inflates intermediate Taylor terms like e^{|nu| h}; cap the
    # step so the hump costs well under half the working precision
    h_cap = 3 / mp.sqrt(abs(nu * (nu + 1)) + 1)
    while True:
        remaining = y - y_cur
        if remaining == 0:
            break
        radius = mp.sqrt(1 + y_cur * y_cur)
        h = sign * min(abs(remaining), STEP_FRACTION * radius, h_cap)
        c = _taylor_coeffs(nu, sigma, y_cur, f0, f1, TAYLOR_TERMS)
        if track:
            for s in range(1, phase_samples + 1):
                u = h * mp.mpf(s) / phase_samples
                val = N * _eval_poly(c, u)
                arg_acc += mp.arg(val / prev)
                prev = val
        f0 = _eval_poly(c, h)
        f1 = _eval_poly_deriv(c, h)
        y_cur += h
        if abs(y - y_cur) < mp.mpf(10) ** (-mp.mp.dps):
            break
    if track:
        return f0, arg_acc
    return f0


_CHECKED_CACHE: dict = {}


def eval_checked(nu, sigma, y, min_digits=25):
    """Dual-route value; raises if the routes disagree below ``min_digits``."""
    key = (mp.mp.dps, str(nu), str(sigma), str(y))
    hit = _CHECKED_CACHE.get(key)
    if hit is not None:
        return hit
    v1 = eval_hypergeometric(nu, sigma, y)
    v2 = eval_ode(nu, sigma, y)
    if v1 != v2:
        err = abs(v1 - v2) / max(abs(v1), mp.mpf(10) ** (-mp.mp.dps))
        if err > mp.mpf(10) ** (-min_digits):
            raise ArithmeticError(
                f"route disagreement {mp.nstr(err, 5)} at nu={nu}, sigma={sigma}, y={y}")
    _CHECKED_CACHE[key] = v1
    return v1


# ----------------------------------------------------------------------
# derived mode quantities


def radial_factor(M, l, t, alpha=1):
    """sqrt(gamma_l/(2 alpha)) N(nu) T(i sinh(t/alpha)) / sqrt(cosh(t/alpha)),
    principal square-root branch."""
    nu = nu_of(M)
    sigma = l + mp.mpf(1) / 2
    g = gamma_pair(nu, sigma)
    T = eval_checked(nu, sigma, mp.sinh(mp.mpf(t) / alpha))
    return (mp.sqrt(mp.mpc(g) / (2 * alpha)) * phase_N(nu) * T
            / mp.sqrt(mp.cosh(mp.mpf(t) / alpha)))


def spherical_harmonic(l, m, theta, phi):
    """Orthonormal Y_l^m with Condon-Shortley phase (integer degree/order)."""
    mm = abs(m)
    P = mp.legenp(l, mm, mp.cos(theta), type=2)
    norm = mp.sqrt((2 * l + 1) / (4 * mp.pi) * mp.factorial(l - mm) / mp.factorial(l + mm))
    val = norm * P * mp.exp(mp.mpc(0, 1) * mm * phi)
    if m < 0:
        val = (-1) ** mm * mp.conj(val)
    return val


def mode_value(M, l, m, t, theta, phi, alpha=1):
    return radial_factor(M, l, t, alpha) * spherical_harmonic(l, m, theta, phi)


def two_point_partial_sum(M, t, theta, phi, t2, l_max, alpha=1):
    """sum over l <= l_max of u_{l,0}(p1) conj(u_{l,0}(t2, pole))."""
    total = mp.mpc(0)
    for l in range(l_max + 1):
        a = radial_factor(M, l, t, alpha) * spherical_harmonic(l, 0, theta, phi)
        b = radial_factor(M, l, t2, alpha) * spherical_harmonic(l, 0, mp.mpf(0), mp.mpf(0))
        total += a * mp.conj(b)
    return total


def omega_value(M, l, t, alpha=1):
    """1/(gamma_l |T|^2)."""
    nu = nu_of(M)
    sigma = l + mp.mpf(1) / 2
    T = eval_checked(nu, sigma, mp.sinh(mp.mpf(t) / alpha))
    g = gamma_pair(nu, sigma)
    if abs(mp.im(g)) > mp.mpf(10) ** (-mp.mp.dps + 10) * abs(g):
        raise ArithmeticError("gamma_l not real at working precision")
    return 1 / (mp.re(g) * abs(T) ** 2)


def zeta_value(M, l, t, alpha=1, phase_samples=48):
    """Continuously unwrapped phase zeta_l(t) = -arg(N T / sqrt(cosh)),
    anchored at zeta_l(0) in {0, pi}."""
    nu = nu_of(M)
    sigma = l + mp.mpf(1) / 2
    base = mp.mpf(0) if l % 2 == 0 else mp.pi
    if t == 0:
        return base
    _, arg_acc = eval_ode(nu, sigma, mp.sinh(mp.mpf(t) / alpha),
                          phase_samples=phase_samples)
    arg0 = mp.arg(phase_N(nu) * t_zero(nu, sigma))
    # sqrt(cosh) is positive and contributes nothing to the argument
    return base - (arg_acc - arg0)


def wigner_3j_exact(j1, j2, j3, m1, m2, m3):
    """Racah sum in exact rational arithmetic, returned at working precision."""
    from fractions import Fraction
    import math

    if m1 + m2 + m3 != 0 or not abs(j1 - j2) <= j3 <= j1 + j2:
        return mp.mpf(0)
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return mp.mpf(0)
    f = math.factorial
    pref2 = Fraction(
        f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3)
        * f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2) * f(j3 + m3) * f(j3 - m3),
        f(j1 + j2 + j3 + 1))
    S = Fraction(0)
    for k in range(0, j1 + j2 + j3 + 1):
        d = [k, j1 + j2 - j3 - k, j1 - m1 - k, j2 + m2 - k,
             j3 - j2 + m1 + k, j3 - j1 - m2 + k]
        if any(x < 0 for x in d):
            continue
        S += Fraction((-1) ** k, f(d[0]) * f(d[1]) * f(d[2]) * f(d[3]) * f(d[4]) * f(d[5]))
    if S == 0:
        return mp.mpf(0)
    sign = (-1) ** (j1 - j2 - m3) * (1 if S > 0 else -1)
    mag2 = pref2 * S * S
    return sign * mp.sqrt(mp.mpf(mag2.numerator) / mp.mpf(mag2.denominator))


def _norm_assoc_legendre(l, m, x):
    """Spherical-harmonic-normalized P_l^m(x) with Condon-Shortley phase,
    m >= 0, by the stable upward recurrence (no library Legendre involved)."""
    sint = mp.sqrt(1 - x * x)
    pmm = mp.mpf(1) / (2 * mp.sqrt(mp.pi))
    for k in range(1, m + 1):
        pmm = -mp.sqrt(mp.mpf(2 * k + 1) / (2 * k)) * sint * pmm
    if l == m:
        return pmm
    pm1 = mp.sqrt(mp.mpf(2 * m + 3)) * x * pmm
    if l == m + 1:
        return pm1
    for ll in range(m + 2, l + 1):
        a = mp.sqrt(mp.mpf(4 * ll * ll - 1) / (ll * ll - m * m))
        b = mp.sqrt(mp.mpf((ll - 1) ** 2 - m * m) / (4 * (ll - 1) ** 2 - 1))
        pmm, pm1 = pm1, a * (x * pm1 - b * pmm)
    return pm1


def _theta_profile(l, m, x):
    """Y_l^m at azimuth 0 as a function of x = cos(theta)."""
    mm = abs(m)
    val = _norm_assoc_legendre(l, mm, x)
    if m < 0:
        val = (-1) ** mm * val
    return val


def unit_vector_matrix_element(axis, p, s, l, m):
    """<Y_p^s, rhat_axis Y_l^m> by high-precision quadrature over x = cos
    (the azimuthal integral is exact), independent of any 3-j algebra.

    The integrand is a polynomial in x, so interior-node quadrature is exact.
    """
    if axis == 3:
        pairs = ((0, mp.mpf(1)),)
    elif axis == 1:
        pairs = ((1, mp.mpf(1) / 2), (-1, mp.mpf(1) / 2))
    elif axis == 2:
        pairs = ((1, mp.mpc(0, -1) / 2), (-1, mp.mpc(0, 1) / 2))
    else:
        raise ValueError("axis must be 1, 2 or 3")
    total = mp.mpc(0)
    for dm, coeff in pairs:
        if s != m + dm:
            continue

        def x_part(x):
            ya = _theta_profile(p, s, x)
            yb = _theta_profile(l, m, x)
            trig = x if axis == 3 else mp.sqrt(1 - x * x)
            return ya * trig * yb

        total += coeff * 2 * mp.pi * mp.quad(x_part, [-1, 0, 1],
                                             method="gauss-legendre")
    return total
