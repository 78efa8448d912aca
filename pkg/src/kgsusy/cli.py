"""Command-line front end.

Exit codes: 0 success (including "no bound states"), 1 verification
failure, 2 bad input, 3 inadmissible level.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import warnings

import numpy as np

from . import analytic, oracle, susy
from .core import InvalidParameters, Model, ModelParams

OUTPUT_ENV = "KGSUSY_OUTPUT"

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_LEVEL = 0, 1, 2, 3


class _Table:
    """Rows plus header metadata, rendered as CSV or JSON."""

    def __init__(self, kind, params, columns):
        self.kind = kind
        self.params = params
        self.columns = columns
        self.rows = []
        self.meta = {}
        self.checks = []
        self.levels = []

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {"command": self.kind, "model": self.params.model.value,
                   "params": _params_dict(self.params), **_clean(self.meta)}
            records = [_clean(dict(zip(self.columns, r))) for r in self.rows]
            if self.kind == "spectrum":
                doc["levels"] = records
            else:
                doc["levels"] = _clean(self.levels)
                if self.kind != "verify":
                    doc["rows"] = records
            doc["checks"] = [_clean(c) for c in self.checks]
            return json.dumps(doc, indent=2) + "\n"
        buf = io.StringIO()
        for k, v in self.meta.items():
            buf.write(f"# {k}: {_fmt(v)}\n")
        if self.kind == "verify":
            buf.write("check,level,measured,tolerance,passed\n")
            for c in self.checks:
                buf.write(",".join(_fmt(c[k]) for k in ("name", "level", "measured", "tolerance", "passed")) + "\n")
            return buf.getvalue()
        buf.write(",".join(self.columns) + "\n")
        for r in self.rows:
            buf.write(",".join(_fmt(v) for v in r) + "\n")
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return "%.12e" % v
    return str(v)


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _params_dict(p: ModelParams) -> dict:
    d = {"mu": p.mu, "lambda": p.lam, "eta": p.eta, "hbar": p.hbar, "c": p.c}
    if p.model is Model.HYPERBOLIC:
        d["alpha"] = p.alpha
    return d


def parse_levels(text: str | None):
    """'0..3' -> [0,1,2,3]; '0,2,5' -> [0,2,5]; '4' -> [4]."""
    if text is None:
        return None
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if any(n < 0 for n in out):
        raise ValueError("levels must be non-negative")
    return out


def parse_floats(text: str):
    return [float(t) for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# Commands


def cmd_spectrum(args, params):
    table = _Table("spectrum", params, ["n", "branch", "energy", "epsilon_residual", "admissible"])
    bounds = analytic.level_bounds(params)
    requested = parse_levels(args.levels)
    if requested is None:
        requested = list(range(4)) if bounds.count is None else list(range(bounds.count))
    for n in requested:
        try:
            lvl = analytic.level(params, n, args.branch)
        except analytic.InadmissibleLevel:
            table.rows.append([n, args.branch, math.nan, math.nan, False])
            continue
        residual = susy.epsilon_n(params, n, lvl.energy)
        table.rows.append([n, args.branch, lvl.energy, residual, True])
    if bounds.count == 0:
        table.meta["message"] = (
            "no bound states: lambda^2 > hbar alpha^2 |eta| is violated "
            f"({params.lam**2:.6g} <= {params.hbar * params.alpha**2 * abs(params.eta):.6g})"
        )
        print(table.meta["message"], file=sys.stderr)
    return table, EXIT_OK


def cmd_bounds(args, params):
    table = _Table("bounds", params, ["n_max_effective", "n_max_physical", "constraint_satisfied",
                                      "leading_coefficient"])
    b = analytic.level_bounds(params)
    table.rows.append([b.n_max_effective, b.n_max_physical, b.constraint_satisfied,
                       susy.solve_leading_coefficient(params)])
    return table, EXIT_OK


def cmd_wavefunction(args, params):
    levels = parse_levels(args.levels) or [0]
    if len(levels) != 1:
        raise ValueError("wavefunction takes a single level")
    spec = analytic.wavefunction(params, levels[0], args.branch)
    half = args.L if args.L is not None else oracle.default_half_width(params, spec.level.energy)
    x = np.linspace(-half, half, args.points)
    psi = spec(x)
    table = _Table("wavefunction", params, ["x", "re_psi", "im_psi"])
    for xi, v in zip(x, psi):
        table.rows.append([float(xi), float(v.real), float(v.imag)])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        norm = spec.pt_norm()
    table.meta.update({
        "n": spec.n,
        "branch": spec.level.branch,
        "energy": spec.level.energy,
        "normalization": spec.normalization,
        "phase_exponent": spec.phase_exponent,
        "pt_asymmetry_max": spec.pt_asymmetry(x),
        "pt_norm_re": norm.real,
        "pt_norm_im": norm.imag,
        "pt_norm_expected": float((-1) ** spec.n),
    })
    return table, EXIT_OK


VERIFY_TOLERANCES = {
    "shape_invariance": 1e-10,
    "root": 1e-10,
    "oracle_epsilon": 5e-3,
    "residual": 1e-3,
    "pt_norm": 1e-7,
    "pt_symmetry": 1e-10,
}


def run_checks(params: ModelParams, levels=None, num_points=oracle.DEFAULT_POINTS,
               perturb_energy: float = 0.0):
    """Run every verification check; returns a list of check dicts."""
    checks = []

    def add(name, level, measured, tol=None):
        tol = VERIFY_TOLERANCES[name] if tol is None else tol
        checks.append({"name": name, "level": level, "measured": measured,
                       "tolerance": tol, "passed": bool(measured <= tol)})

    all_levels = analytic.bound_energies(params, n_max=3 if levels is None else max(levels))
    if levels is not None:
        all_levels = [lv for lv in all_levels if lv.n in levels]
    e_ref = all_levels[0].energy if all_levels else 0.0
    desc = susy.Superpotential(params, e_ref)
    xs = np.linspace(-oracle.default_half_width(params, e_ref), oracle.default_half_width(params, e_ref), 50)
    try:
        rep = susy.verify_shape_invariance(desc, xs)
        add("shape_invariance", None, rep.max_deviation)
    except susy.ShapeInvarianceViolation as exc:
        add("shape_invariance", None, float("inf"))
        print(exc, file=sys.stderr)
    except susy.SingularShift as exc:
        # nothing to check: only the ground level exists
        print(f"shape invariance not applicable: {exc}", file=sys.stderr)

    for lv in all_levels:
        n, e = lv.n, lv.energy_plus
        root = oracle.quantization_root(params, n, (0.0, 2.0 * e))
        add("root", n, abs(root - e) / e)
        eps_grid = oracle.oracle_epsilon(params, n, e, num_points=num_points, stencil=5)
        add("oracle_epsilon", n, abs(eps_grid) / (params.hbar * desc.coefficient))
        spec = analytic.wavefunction(params, lv)
        h = oracle.residual_spacing(params, n)
        res = oracle.residual_check(spec, spacing=h,
                                    energy=lv.energy * (1.0 + perturb_energy))
        add("residual", n, res / (lv.energy / params.c) ** 2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            norm = spec.pt_norm()
        add("pt_norm", n, abs(norm - (-1) ** n))
        x = np.linspace(-6, 6, 101)
        add("pt_symmetry", n, spec.pt_asymmetry(x))
    return checks, [{"n": lv.n, "branch": lv.branch, "energy": lv.energy} for lv in all_levels]


def cmd_verify(args, params):
    table = _Table("verify", params, [])
    checks, levels = run_checks(params, parse_levels(args.levels), args.N or oracle.DEFAULT_POINTS,
                               args.perturb_energy)
    table.checks = checks
    table.levels = levels
    table.meta["physical_levels"] = analytic.level_bounds(params).count
    table.meta["levels_checked"] = len(levels)
    failed = [c for c in checks if not c["passed"]]
    table.meta["passed"] = not failed
    if failed:
        names = sorted({c["name"] for c in failed})
        print("verification failed: " + ", ".join(names), file=sys.stderr)
        return table, EXIT_VERIFY
    return table, EXIT_OK


def cmd_limits(args, params):
    table = _Table("limits", params, ["study", "parameter", "n", "value", "target", "deviation",
                                      "order", "extra"])
    levels = parse_levels(args.levels) or [0, 1]
    if args.study in ("nr", "both"):
        rep = analytic.nonrelativistic_limit_check(
            params.mu, args.omega, args.xi, parse_floats(args.c_values), levels, params.hbar)
        for r in rep.rows:
            table.rows.append(["nr", r.parameter, r.n, r.value, r.target, r.deviation,
                               rep.orders[r.n], r.extra["xi_shift"]])
    if args.study in ("alpha", "both"):
        p = params.with_(model=Model.HYPERBOLIC)
        rep = analytic.alpha_limit_check(p, parse_floats(args.alpha_values), levels)
        for r in rep.rows:
            table.rows.append(["alpha", r.parameter, r.n, r.value, r.target, r.deviation,
                               rep.orders[r.n], r.extra["wave_deviation"]])
    return table, EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
    "limits": cmd_limits,
    "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=[m.value for m in Model], default="linear")
    common.add_argument("--mu", type=float, default=1.0)
    common.add_argument("--lambda", dest="lam", type=float, default=1.0)
    common.add_argument("--eta", type=float, default=0.0)
    common.add_argument("--alpha", type=float, default=1.0)
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--c", type=float, default=1.0)
    common.add_argument("-n", "--levels", default=None, help="e.g. 0..3 or 0,2")
    common.add_argument("--branch", choices=["plus", "minus"], default="plus")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", "-o", default=None)
    common.add_argument("--L", type=float, default=None, help="grid half-width")
    common.add_argument("--N", type=int, default=None, help="grid points (odd)")

    parser = argparse.ArgumentParser(prog="kgsusy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="bound-state energies")
    w = sub.add_parser("wavefunction", parents=[common], help="sampled wavefunction")
    w.add_argument("--points", type=int, default=201)
    v = sub.add_parser("verify", parents=[common], help="cross-check closed forms numerically")
    v.add_argument("--perturb-energy", type=float, default=0.0,
                   help="relative shift of E_n in the residual check (negative control)")
    lim = sub.add_parser("limits", parents=[common], help="c -> inf and alpha -> 0 studies")
    lim.add_argument("--study", choices=["nr", "alpha", "both"], default="both")
    lim.add_argument("--omega", type=float, default=1.0)
    lim.add_argument("--xi", type=float, default=0.0)
    lim.add_argument("--c-values", default="1e2,1e3,1e4")
    lim.add_argument("--alpha-values", default="0.1,0.05,0.025")
    sub.add_parser("bounds", parents=[common], help="level caps and existence constraint")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = ModelParams(Model(args.model), mu=args.mu, lam=args.lam, eta=args.eta,
                             alpha=args.alpha, hbar=args.hbar, c=args.c)
        if args.N is not None and (args.N < 3 or args.N % 2 == 0):
            raise InvalidParameters("--N must be odd and >= 3")
        table, code = COMMANDS[args.command](args, params)
    except analytic.InadmissibleLevel as exc:
        print(f"inadmissible level: {exc}", file=sys.stderr)
        return EXIT_LEVEL
    except (InvalidParameters, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = table.render(args.format)
    out = args.output or os.environ.get(OUTPUT_ENV)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
