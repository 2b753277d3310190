"""Fixture-pack generation: golden values with tolerances as one JSON file.

The pack layout is {"header": {generator_version, digits, grid_spec},
"records": [...]} with every numeric golden value serialized as a decimal
string, so regeneration from the same generator version and grid is
byte-identical.  Each record carries the function identifier, labeled inputs,
the value, tolerances, and a provenance note.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import mpmath as mp

from . import highprec as hp

GENERATOR_VERSION = "1.0.0"
DEFAULT_DIGITS = 50
GRID_SPEC = "default-v1"

SELF_CHECK_TOL = mp.mpf(10) ** -30
MIN_ROUTE_DIGITS = 25


def _num(x, digits):
    return mp.nstr(mp.mpf(x), digits, strip_zeros=True)


def _record(function_id, inputs, value, abs_tol, rel_tol, provenance, digits):
    return {
        "function_id": function_id,
        "inputs": [{"name": k, "value": v} for k, v in inputs],
        "value": {"re": _num(mp.re(value), digits), "im": _num(mp.im(value), digits)},
        "abs_tol": abs_tol,
        "rel_tol": rel_tol,
        "provenance": provenance,
    }


def gen_gamma_fixtures(digits):
    """Complex gamma on a fixed lattice covering both reflection regions."""
    records = []
    zs = [(0.5, 0.0), (1.0, 0.0), (7.5, 0.0), (25.0, 0.0), (-2.0, 1.5), (-0.5, 0.0),
          (-4.5, 0.0), (3.0, 4.0), (-3.0, -4.0), (0.5, 10.0), (12.0, -7.0),
          (-8.5, 2.5), (0.1, 0.1), (-0.1, -40.0), (30.0, 30.0), (-20.5, 0.5),
          (2.0, -35.0), (45.0, 0.0), (-15.5, -15.0), (0.5, 49.0)]
    for re_, im_ in zs:
        z = mp.mpc(re_, im_)
        val = mp.gamma(z)
        records.append(_record(
            "complex_gamma", [("z", {"re": _num(re_, digits), "im": _num(im_, digits)})],
            val, "1e-300", "1e-13",
            "arbitrary-precision gamma", digits))
    return records


def gen_ferrers_fixtures(digits):
    """Phase-adjusted Legendre values on the documented (M, l, t) grid.

    Every value is dual-route checked (hypergeometric vs ODE Taylor stepping)
    to MIN_ROUTE_DIGITS, and the t = 0 entries are self-checked against the
    closed form to 1e-30 relative.
    """
    records = []
    grid = [("0.5", [0, 1, 2, 4, 8, 16], ["-1.5", "-0.4", "0", "0.3", "0.9", "1.8", "2.5"]),
            ("2.5", [0, 1, 2, 4, 8, 16], ["-1.5", "-0.4", "0", "0.3", "0.9", "1.8", "2.5"]),
            ("100", [0, 1, 2], ["0", "0.2", "0.5"])]
    for M_str, ls, ts in grid:
        M = mp.mpf(M_str)
        nu = hp.nu_of(M)
        for l in ls:
            sigma = l + mp.mpf(1) / 2
            for t_str in ts:
                t = mp.mpf(t_str)
                y = mp.sinh(t)
                val = hp.eval_checked(nu, sigma, y, min_digits=MIN_ROUTE_DIGITS)
                if t == 0:
                    closed = hp.t_zero(nu, sigma)
                    if abs(val - closed) > SELF_CHECK_TOL * abs(closed):
                        raise ArithmeticError(
                            f"t=0 self-check failed at M={M_str}, l={l}")
                records.append(_record(
                    "ferrers_T",
                    [("M", M_str), ("l", l), ("t", t_str)],
                    val, "1e-300", "1e-10",
                    "hypergeometric route, ODE-cross-validated", digits))
    return records


def gen_ferrers_zero_fixtures(digits):
    records = []
    for M_str, ls in (("0.5", range(17)), ("2.5", range(17)), ("100", range(3))):
        M = mp.mpf(M_str)
        nu = hp.nu_of(M)
        for l in ls:
            val = hp.t_zero(nu, l + mp.mpf(1) / 2)
            records.append(_record(
                "ferrers_T_zero", [("M", M_str), ("l", l)],
                val, "1e-300", "1e-12",
                "closed form at the origin", digits))
    return records


def gen_phase_fixtures(digits):
    """gamma_l, wronskian right sides, unwrapped phases, absorbed factors."""
    records = []
    for M_str in ("0.5", "2.5"):
        M = mp.mpf(M_str)
        nu = hp.nu_of(M)
        for l in range(17):
            g = hp.gamma_pair(nu, l + mp.mpf(1) / 2)
            records.append(_record(
                "gamma_l", [("M", M_str), ("l", l)],
                mp.re(g), "1e-300", "1e-11",
                "gamma-function product, sign per series", digits))
        for l in range(8):
            rhs = -2 / hp.gamma_pair(nu, l + mp.mpf(1) / 2)
            records.append(_record(
                "wronskian_rhs", [("M", M_str), ("l", l)],
                rhs, "1e-300", "1e-11",
                "half-integer reduction of the sine ratio", digits))
        for l in range(5):
            for t_str in ("0.7", "1.3"):
                z = hp.zeta_value(M, l, mp.mpf(t_str))
                records.append(_record(
                    "zeta_phase", [("M", M_str), ("l", l), ("t", t_str)],
                    z, "1e-9", "1e-9",
                    "continuously unwrapped argument along the ODE path", digits))
                om = hp.omega_value(M, l, mp.mpf(t_str))
                records.append(_record(
                    "omega_dS", [("M", M_str), ("l", l), ("t", t_str)],
                    om, "1e-300", "1e-9",
                    "absorbed normalization from the dual-route value", digits))
    return records


def gen_threej_fixtures(digits):
    """Exact rational Racah values, selection-rule zeros included."""
    records = []
    cases = [(1, 0, 1, 0, 0, 0), (1, 1, 1, 0, 0, 0), (1, 2, 3, 1, 1, -2),
             (2, 2, 2, 1, -1, 0), (1, 1, 2, 1, 1, -2), (3, 2, 1, 0, 0, 0),
             (4, 4, 4, 2, -1, -1), (5, 3, 2, 0, 0, 0), (6, 4, 2, 1, 1, -2),
             (2, 2, 4, 2, 2, -4), (1, 2, 2, 0, 1, -1), (3, 3, 2, 2, -1, -1),
             (1, 1, 3, 0, 0, 0), (2, 3, 4, -1, 2, -1), (5, 5, 0, 1, -1, 0),
             (7, 6, 3, 2, -2, 0), (8, 6, 4, 0, 0, 0), (10, 10, 10, 1, 2, -3),
             (1, 3, 2, 1, -2, 1), (2, 4, 6, 2, 4, -6), (3, 5, 7, 0, 0, 0),
             (4, 3, 2, -2, 1, 1), (9, 8, 1, -1, 0, 1), (12, 8, 4, 2, -1, -1),
             (2, 2, 3, 1, 1, -2), (6, 6, 6, 0, 0, 0), (1, 4, 4, 1, 0, -1),
             (3, 4, 5, 3, -4, 1), (2, 5, 5, 0, 3, -3), (7, 7, 2, 1, 1, -2)]
    for j1, j2, j3, m1, m2, m3 in cases:
        val = hp.wigner_3j_exact(j1, j2, j3, m1, m2, m3)
        records.append(_record(
            "wigner_3j",
            [("j1", j1), ("j2", j2), ("j3", j3), ("m1", m1), ("m2", m2), ("m3", m3)],
            val, "1e-300", "1e-12",
            "exact rational Racah sum", digits))
    return records


def gen_mode_fixtures(digits):
    records = []
    cases = [("0.5", 0, 0, "0.4", "0.9", "1.7"), ("0.5", 2, 1, "0.8", "1.2", "0.3"),
             ("0.5", 3, -2, "-0.6", "2.0", "4.5"), ("2.5", 0, 0, "0.4", "0.9", "1.7"),
             ("2.5", 1, 0, "0.5", "1.2", "0.3"), ("2.5", 2, 2, "1.1", "0.7", "2.2"),
             ("2.5", 4, -3, "-0.9", "1.9", "5.1"), ("2.5", 3, 1, "2.2", "1.4", "0.6")]
    for M_str, l, m, t_str, th_str, ph_str in cases:
        val = hp.mode_value(mp.mpf(M_str), l, m, mp.mpf(t_str),
                            mp.mpf(th_str), mp.mpf(ph_str))
        records.append(_record(
            "mode_u",
            [("M", M_str), ("l", l), ("m", m), ("t", t_str),
             ("theta", th_str), ("phi", ph_str)],
            val, "1e-300", "1e-9",
            "radial factor times orthonormal harmonic", digits))
    return records


def gen_two_point_fixtures(digits):
    records = []
    cases = [("2.5", "0.2", "0.4", "0", "0", 24), ("2.5", "0.5", "1.1", "0", "0.2", 16),
             ("0.5", "0.2", "0.4", "0", "0", 24), ("0.5", "-0.3", "2.2", "0", "0.4", 12)]
    for M_str, t_str, th_str, ph_str, t2_str, l_max in cases:
        val = hp.two_point_partial_sum(mp.mpf(M_str), mp.mpf(t_str), mp.mpf(th_str),
                                       mp.mpf(ph_str), mp.mpf(t2_str), l_max)
        records.append(_record(
            "two_point_G",
            [("M", M_str), ("t", t_str), ("theta", th_str), ("phi", ph_str),
             ("t2", t2_str), ("l_max", l_max)],
            val, "1e-300", "1e-8",
            "partial sum of pole-anchored mode products", digits))
    return records


def gen_projection_fixtures(digits):
    """Unit-vector matrix elements by polar quadrature (no 3-j algebra)."""
    records = []
    cases = [(3, 1, 0, 0, 0), (3, 3, 0, 2, 0), (3, 2, 1, 3, 1), (3, 4, -2, 3, -2),
             (1, 1, 1, 0, 0), (1, 2, 0, 1, 1), (1, 3, -1, 2, 0), (1, 2, -2, 1, -1),
             (2, 1, -1, 0, 0), (2, 2, 2, 1, 1), (2, 3, 1, 2, 0), (2, 4, 3, 3, 2)]
    for axis, p, s, l, m in cases:
        val = hp.unit_vector_matrix_element(axis, p, s, l, m)
        records.append(_record(
            "position_matrix_element",
            [("axis", axis), ("l_max", max(l, p - 1)), ("p", p), ("s", s),
             ("l", l), ("m", m)],
            val, "1e-14", "1e-12",
            "polar-angle quadrature of the harmonic triple product", digits))
    return records


def build_pack(digits=DEFAULT_DIGITS):
    with mp.workdps(digits + 10):
        records = []
        records += gen_gamma_fixtures(digits)
        records += gen_ferrers_fixtures(digits)
        records += gen_ferrers_zero_fixtures(digits)
        records += gen_phase_fixtures(digits)
        records += gen_threej_fixtures(digits)
        records += gen_mode_fixtures(digits)
        records += gen_two_point_fixtures(digits)
        records += gen_projection_fixtures(digits)
    records.sort(key=lambda r: (r["function_id"],
                                json.dumps(r["inputs"], sort_keys=True)))
    return {
        "header": {
            "generator_version": GENERATOR_VERSION,
            "digits": digits,
            "grid_spec": GRID_SPEC,
        },
        "records": records,
    }


def write_pack(path, digits=DEFAULT_DIGITS):
    pack = build_pack(digits)
    text = json.dumps(pack, indent=1, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")
    return pack


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dsoracle", description="Golden-value fixture generator")
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("generate", help="write the fixture pack")
    gen.add_argument("--out", default="fixtures.json")
    gen.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    args = parser.parse_args(argv)
    if args.command == "generate":
        pack = write_pack(args.out, args.digits)
        print(f"wrote {len(pack['records'])} records to {args.out}")
        return 0
    return 2


if __name__ == "__main__":
    sys.exit(main())
