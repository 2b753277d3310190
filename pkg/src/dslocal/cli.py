"""Command-line driver: classification, verification runs, and plot-ready data.

Commands: classify | ortho | casimir | evolve | position | signdemo |
fixtures-verify.  A flat key=value config file supplies defaults; command-line
flags win.  Exit codes: 0 pass, 1 numerical failure, 2 usage or config error.
JSON output is deterministic (sorted keys, floats at 17 significant digits);
CSV uses comma separators, '.' decimals, a header row, and LF line endings.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import newton_wigner as nw
from . import specfun
from .geometry import DeSitterParams, Series
from .modes import (ModeField, SphereGrid, StateCoefficients, mode_u,
                    orthonormality_matrix, random_state, two_point_G)
from .geometry import SpacetimePoint
from .symmetry import apply_discrete, casimir_check

EXIT_PASS = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    alpha: float = 1.0
    M: float = 2.5
    l_max: int = 4
    n_theta: int = 48
    n_phi: int = 96
    t0: float = 0.0
    t1: float = 2.0
    n_steps: int = 9
    output_dir: str = "."
    seed: int = 1234
    tol: float = 1e-8

    def validate(self):
        if self.M <= 0.0 or abs(self.M - 1.0) < 1e-12:
            raise ValueError("M must be positive and different from the excluded value 1")
        if self.l_max < 0:
            raise ValueError("l_max must be nonnegative")
        if self.n_theta < self.l_max + 2:
            raise ValueError("grid n_theta must be at least l_max + 2")
        if self.n_steps < 1:
            raise ValueError("t range needs at least one step")

    def params(self) -> DeSitterParams:
        return DeSitterParams(M=self.M, alpha=self.alpha)

    def grid(self) -> SphereGrid:
        return SphereGrid(self.n_theta, self.n_phi)

    def t_grid(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.n_steps)


# ----------------------------------------------------------------------
# deterministic serialization


def _format_value(x, indent, level):
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = []
        for k in sorted(x):
            items.append(f'{pad}"{k}": {_format_value(x[k], indent, level + 1)}')
        return "{\n" + ",\n".join(items) + "\n" + end_pad + "}"
    if isinstance(x, (list, tuple, np.ndarray)):
        seq = list(x)
        if not seq:
            return "[]"
        items = [f"{pad}{_format_value(v, indent, level + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end_pad + "]"
    if isinstance(x, bool) or isinstance(x, np.bool_):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    if isinstance(x, (complex, np.complexfloating)):
        return _format_value({"re": float(x.real), "im": float(x.imag)}, indent, level)
    if x is None:
        return "null"
    return json.dumps(str(x))


def write_json(path: Path, doc) -> None:
    path.write_text(_format_value(doc, 2, 0) + "\n", encoding="utf-8", newline="\n")


def write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{v:.17g}" if isinstance(v, (float, np.floating))
                              else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


# ----------------------------------------------------------------------
# config handling


def load_config_file(path: str) -> dict:
    out = {}
    text = Path(path).read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


_CONFIG_FIELDS = {
    "alpha": float, "M": float, "l_max": int, "n_theta": int, "n_phi": int,
    "t0": float, "t1": float, "n_steps": int, "output_dir": str,
    "seed": int, "tol": float,
}


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        for key, value in load_config_file(args.config).items():
            if key not in _CONFIG_FIELDS:
                raise ValueError(f"unknown config key {key!r}")
            setattr(cfg, key, _CONFIG_FIELDS[key](value))
    if args.alpha is not None:
        cfg.alpha = args.alpha
    if args.M is not None:
        cfg.M = args.M
    if args.lmax is not None:
        cfg.l_max = args.lmax
    if args.grid is not None:
        nt, _, nphi = args.grid.partition("x")
        cfg.n_theta, cfg.n_phi = int(nt), int(nphi)
    if args.t0 is not None:
        cfg.t0 = args.t0
    if args.t1 is not None:
        cfg.t1 = args.t1
    if args.steps is not None:
        cfg.n_steps = args.steps
    if args.out is not None:
        cfg.output_dir = args.out
    if args.tol is not None:
        cfg.tol = args.tol
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.validate()
    return cfg


def _params_doc(cfg: RunConfig) -> dict:
    p = cfg.params()
    return {
        "alpha": cfg.alpha,
        "M": cfg.M,
        "nu": complex(p.nu),
        "series": p.series.value,
        "l_max": cfg.l_max,
        "grid": [cfg.n_theta, cfg.n_phi],
        "seed": cfg.seed,
    }


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ----------------------------------------------------------------------
# commands


def cmd_classify(cfg: RunConfig) -> int:
    p = cfg.params()
    name = "Principal" if p.series is Series.PRINCIPAL else "Complementary"
    print(f"series: {name}")
    print(f"nu: {p.nu.real:.17g} {p.nu.imag:+.17g}i")
    print(f"q: {cfg.M ** 2:.17g}")
    return EXIT_PASS


def cmd_ortho(cfg: RunConfig) -> int:
    p = cfg.params()
    grid = cfg.grid()
    times = sorted({cfg.t0, cfg.t1})
    report = {"params": _params_doc(cfg), "tol": cfg.tol, "slices": []}
    worst = 0.0
    n = (cfg.l_max + 1) ** 2
    eye = np.eye(n)
    for t in times:
        dev_u = float(np.max(np.abs(orthonormality_matrix(p, cfg.l_max, t, grid, "u") - eye)))
        dev_v = float(np.max(np.abs(orthonormality_matrix(p, cfg.l_max, t, grid, "v") + eye)))
        dev_x = float(np.max(np.abs(orthonormality_matrix(p, cfg.l_max, t, grid, "cross"))))
        worst = max(worst, dev_u, dev_v, dev_x)
        report["slices"].append({"t": t, "dev_u": dev_u, "dev_v": dev_v, "dev_cross": dev_x})
    report["max_deviation"] = worst
    report["pass"] = worst <= cfg.tol
    write_json(_outdir(cfg) / "ortho.json", report)
    print(f"orthonormality max deviation: {worst:.3e} (tol {cfg.tol:.1e}) -> "
          f"{'pass' if report['pass'] else 'FAIL'}")
    return EXIT_PASS if report["pass"] else EXIT_NUMERICAL


def cmd_casimir(cfg: RunConfig) -> int:
    p = cfg.params()
    probe = SpacetimePoint(0.3 * cfg.alpha, 1.0, 0.5)
    entries = []
    ok = True
    for l in range(min(cfg.l_max, 3) + 1):
        for m in range(-l, l + 1):
            try:
                q, r = casimir_check(p, l, m, probe)
            except ZeroDivisionError:
                q, r = casimir_check(p, l, m, SpacetimePoint(0.3 * cfg.alpha, 0.8, 0.9))
            good = abs(q - cfg.M ** 2) <= 1e-3 * cfg.M ** 2 and abs(r) <= 1e-4
            ok = ok and good
            entries.append({"l": l, "m": m, "q_re": float(q.real), "q_im": float(q.imag),
                            "r_abs": float(abs(r)), "pass": good})
    report = {"params": _params_doc(cfg), "expected_q": cfg.M ** 2, "entries": entries,
              "pass": ok}
    write_json(_outdir(cfg) / "casimir.json", report)
    print(f"casimir invariants: q target {cfg.M ** 2:.6g}; "
          f"{'pass' if ok else 'FAIL'} over {len(entries)} shells")
    return EXIT_PASS if ok else EXIT_NUMERICAL


def cmd_evolve(cfg: RunConfig, theta0: float, phi0: float, width: float) -> int:
    p = cfg.params()
    grid = cfg.grid()
    state = nw.wavepacket_state(cfg.l_max, theta0, phi0, width)
    trace = nw.evolve_trace(p, state, cfg.t_grid(), grid)
    out = _outdir(cfg)
    doc = {
        "params": _params_doc(cfg),
        "packet": {"theta0": theta0, "phi0": phi0, "width": width},
        "t": [float(t) for t in trace["t"]],
        "expectation": [[float(v) for v in row] for row in trace["expectation"]],
        "norm": [float(v) for v in trace["norm"]],
    }
    write_json(out / "trace.json", doc)
    rows = []
    for k, t in enumerate(trace["t"]):
        dens = trace["density"][k]
        for i in range(grid.n_theta):
            for j in range(grid.n_phi):
                rows.append((float(t), float(grid.theta[i]), float(grid.phi[j]),
                             float(dens[i, j])))
    write_csv(out / "density.csv", ["t", "theta", "phi", "density"], rows)
    norm_dev = float(np.max(np.abs(trace["norm"] - 1.0)))
    print(f"evolved {len(doc['t'])} slices; norm deviation {norm_dev:.3e}")
    return EXIT_PASS if norm_dev <= 1e-10 else EXIT_NUMERICAL


def cmd_position(cfg: RunConfig, state_file: str) -> int:
    p = cfg.params()
    grid = cfg.grid()
    state = StateCoefficients.from_json(Path(state_file).read_text(encoding="utf-8"))
    if not state.normalized:
        state.normalize()
    ts = cfg.t_grid()
    expectations = []
    quad_dev = 0.0
    for t in ts:
        e = nw.position_expectation(p, state, float(t))
        eq = nw.position_expectation_density(p, state, float(t), grid)
        quad_dev = max(quad_dev, float(np.max(np.abs(e - eq))))
        expectations.append([float(v) for v in e])
    flipped = apply_discrete("P3", p, state)
    e_base = nw.position_expectation(p, state, float(ts[0]))
    e_flip = nw.position_expectation(p, flipped, float(ts[0]))
    parity_dev = float(np.max(np.abs(e_flip - e_base * np.array([1.0, 1.0, -1.0]))))
    ok = quad_dev <= cfg.tol and parity_dev <= cfg.tol
    doc = {
        "params": _params_doc(cfg),
        "t": [float(t) for t in ts],
        "expectation": expectations,
        "quadrature_agreement": quad_dev,
        "parity_covariance": parity_dev,
        "pass": ok,
    }
    write_json(_outdir(cfg) / "position.json", doc)
    print(f"position trace over {len(ts)} slices; quadrature agreement {quad_dev:.3e}, "
          f"parity covariance {parity_dev:.3e} -> {'pass' if ok else 'FAIL'}")
    return EXIT_PASS if ok else EXIT_NUMERICAL


def cmd_signdemo(cfg: RunConfig) -> int:
    p = cfg.params()
    rep = nw.sign_ambiguity_report(p)
    prof = rep["profiles"]
    dev_plus = float(np.max(np.abs(prof["opposite_signs"]["values"]
                                   - prof["closed_form_plus"])))
    dev_minus = float(np.max(np.abs(prof["equal_signs"]["values"]
                                    - prof["closed_form_minus"])))
    signs_ok = all(item["alternates"] for item in rep["sign_structure"])
    winner_ok = all(peak["winner_strict"] for peak in rep["delta_peaks"])
    ok = dev_plus <= 1e-12 and dev_minus <= 1e-12 and signs_ok and winner_ok
    out = _outdir(cfg)
    write_csv(out / "signdemo_profiles.csv",
              ["theta", "profile_opposite", "profile_equal"],
              [(float(th), float(a), float(b))
               for th, a, b in zip(prof["opposite_signs"]["theta"],
                                   prof["opposite_signs"]["values"],
                                   prof["equal_signs"]["values"])])
    doc = {
        "params": _params_doc(cfg),
        "profile_deviation_plus": dev_plus,
        "profile_deviation_minus": dev_minus,
        "alternating_sign_structure": signs_ok,
        "maximal_localization_winner": winner_ok,
        "delta_peaks": [{k: v for k, v in peak.items()} for peak in rep["delta_peaks"]],
        "pass": ok,
    }
    write_json(out / "signdemo.json", doc)
    print(f"sign demo: profile deviations {dev_plus:.2e}/{dev_minus:.2e}, "
          f"alternating signs {signs_ok}, localization winner {winner_ok} -> "
          f"{'pass' if ok else 'FAIL'}")
    return EXIT_PASS if ok else EXIT_NUMERICAL


# ----------------------------------------------------------------------
# fixture verification


def _fixture_inputs(record) -> dict:
    vals = {}
    for item in record["inputs"]:
        v = item["value"]
        if isinstance(v, dict):
            vals[item["name"]] = complex(float(v["re"]), float(v["im"]))
        else:
            vals[item["name"]] = float(v)
    return vals

def _eval_fixture(record):
    fid = record["function_id"]
    x = _fixture_inputs(record)

    def params():
        return DeSitterParams(M=x["M"], alpha=x.get("alpha", 1.0))

    if fid == "complex_gamma":
        return specfun.complex_gamma(x["z"])
    if fid == "ferrers_T":
        od = specfun.order_degree(params().nu, int(x["l"]))
        return specfun.ferrers_T(od, specfun.FerrersArg.from_time(x["t"], x.get("alpha", 1.0)))
    if fid == "ferrers_T_zero":
        return specfun.ferrers_T_zero(specfun.order_degree(params().nu, int(x["l"])))
    if fid == "gamma_l":
        return complex(specfun.gamma_l(params(), int(x["l"])))
    if fid == "wronskian_rhs":
        return specfun.wronskian_rhs(specfun.order_degree(params().nu, int(x["l"])))
    if fid == "wigner_3j":
        return complex(specfun.wigner_3j(int(x["j1"]), int(x["j2"]), int(x["j3"]),
                                         int(x["m1"]), int(x["m2"]), int(x["m3"])))
    if fid == "zeta_phase":
        return complex(nw.zeta_phase(params(), int(x["l"]), x["t"]))
    if fid == "omega_dS":
        return complex(nw.omega_dS(params(), int(x["l"]), x["t"]))
    if fid == "mode_u":
        return mode_u(params(), int(x["l"]), int(x["m"]),
                      SpacetimePoint(x["t"], x["theta"], x["phi"]))
    if fid == "two_point_G":
        val, _ = two_point_G(params(), SpacetimePoint(x["t"], x["theta"], x["phi"]),
                             SpacetimePoint(x["t2"], 0.0, 0.0), int(x["l_max"]))
        return val
    if fid == "position_matrix_element":
        A = nw._position_matrix(int(x["l_max"]), int(x["axis"]))
        from .modes import state_index
        return complex(A[state_index(int(x["p"]), int(x["s"])),
                         state_index(int(x["l"]), int(x["m"]))])
    raise KeyError(f"unknown function_id {fid!r}")


def cmd_fixtures_verify(cfg: RunConfig, fixtures_path: str) -> int:
    path = Path(fixtures_path)
    if not path.exists():
        print(f"fixture file not found: {fixtures_path}", file=sys.stderr)
        return EXIT_USAGE
    try:
        pack = json.loads(path.read_text(encoding="utf-8"))
        header = pack["header"]
        records = pack["records"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"fixture schema mismatch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failures = []
    for idx, record in enumerate(records):
        try:
            want = complex(float(record["value"]["re"]), float(record["value"]["im"]))
            abs_tol = float(record["abs_tol"])
            rel_tol = float(record["rel_tol"])
            got = _eval_fixture(record)
        except (KeyError, TypeError, ValueError) as exc:
            print(f"fixture schema mismatch at record {idx}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        err = abs(got - want)
        if err > abs_tol + rel_tol * abs(want):
            failures.append((idx, record["function_id"], err))
    print(f"fixture pack: generator {header.get('generator_version', '?')}, "
          f"{len(records)} records, {len(failures)} failures")
    for idx, fid, err in failures[:20]:
        print(f"  record {idx} ({fid}): |error| = {err:.3e}")
    return EXIT_PASS if not failures else EXIT_NUMERICAL


# ----------------------------------------------------------------------
# entry point


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dslocal",
        description="Localization analysis for a massive scalar field on the "
                    "2+1 de Sitter hyperboloid.")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--alpha", type=float, help="de Sitter radius")
    parser.add_argument("--M", type=float, help="dimensionless mass parameter")
    parser.add_argument("--lmax", type=int, help="coefficient truncation")
    parser.add_argument("--grid", help="quadrature grid as NTHETAxNPHI, e.g. 48x96")
    parser.add_argument("--t0", type=float, help="first slice time")
    parser.add_argument("--t1", type=float, help="last slice time")
    parser.add_argument("--steps", type=int, help="number of time slices")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--tol", type=float, help="pass/fail tolerance")
    parser.add_argument("--seed", type=int, help="random-state seed")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", help="series classification from the mass parameter")
    sub.add_parser("ortho", help="mode Gram matrices against the expected block structure")
    sub.add_parser("casimir", help="quadratic invariants over an (l, m) lattice")
    evolve = sub.add_parser("evolve", help="wavepacket density and expectation trace")
    evolve.add_argument("--theta0", type=float, default=0.9)
    evolve.add_argument("--phi0", type=float, default=0.3)
    evolve.add_argument("--width", type=float, default=2.0)
    pos = sub.add_parser("position", help="position expectation trace for a state file")
    pos.add_argument("state_file")
    sub.add_parser("signdemo", help="sign-ambiguity demonstration report")
    fx = sub.add_parser("fixtures-verify", help="compare against an oracle fixture pack")
    fx.add_argument("fixtures_path")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "ortho":
            return cmd_ortho(cfg)
        if args.command == "casimir":
            return cmd_casimir(cfg)
        if args.command == "evolve":
            return cmd_evolve(cfg, args.theta0, args.phi0, args.width)
        if args.command == "position":
            return cmd_position(cfg, args.state_file)
        if args.command == "signdemo":
            return cmd_signdemo(cfg)
        if args.command == "fixtures-verify":
            return cmd_fixtures_verify(cfg, args.fixtures_path)
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
