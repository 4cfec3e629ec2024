"""``scatter`` command line: solve, verify-disk, condition-study, convergence-study.

Exit codes: 0 success, 1 configuration error, 2 solver refusal,
3 verification failure.
"""

import argparse
import hashlib
import json
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .basis import BasisFamily, InnerProduct, basis_samples, estimate_riesz_bounds, gram_factor
from .fields import boundary_residual, far_field_at, uniform_angles
from .galerkin import (
    AssemblyOverflowError,
    DensitySolution,
    NearResonanceError,
    assemble_system,
    gram_condition_number,
    incident_wave,
    solve_system,
)
from .geometry import CurveKind, CurveSpec, GeometryError, make_curve, quadrature_grid, scaled_to_diameter
from .iterative import IterationLimitError, NonContractionError, NotPositiveDefiniteError, solve_by_iteration
from .operators import ResonanceWarning, assemble_T, resonance_check
from .oracle import disk_density, disk_far_field

EXIT_OK, EXIT_CONFIG, EXIT_REFUSED, EXIT_VERIFY = 0, 1, 2, 3
VERIFY_TOLERANCE = 1e-6
DEFAULT_DIRECTIONS = 64


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    curves: list
    k: float = 1.0
    alpha_degrees: float = 0.0
    families: list = field(default_factory=lambda: [BasisFamily.WEIGHTED_TRIG])
    inners: list = field(default_factory=lambda: [InnerProduct.H1])
    J: list = field(default_factory=lambda: [21])
    n: int = 256
    solver: str = "galerkin"
    tol: float = 1e-10
    max_iter: int = 500
    output_path: str = None
    directions: int = DEFAULT_DIRECTIONS
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def curve(self):
        return self.curves[0]

    @property
    def family(self):
        return self.families[0]

    @property
    def inner(self):
        return self.inners[0]

    @property
    def alpha(self):
        t = np.deg2rad(self.alpha_degrees)
        return (float(np.cos(t)), float(np.sin(t)))

    def digest(self):
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


_CURVE_FIELDS = {
    "circle": ("R",),
    "ellipse": ("p", "q"),
    "kite": (),
    "star": ("R", "eps", "n"),
}


def parse_curve(rec, where="curve"):
    if not isinstance(rec, dict) or "kind" not in rec:
        raise ConfigError(f"{where}: expected an object with a 'kind' field")
    kind = rec["kind"]
    if kind not in _CURVE_FIELDS:
        raise ConfigError(f"{where}.kind: unknown curve kind {kind!r} (expected one of {sorted(_CURVE_FIELDS)})")
    names = _CURVE_FIELDS[kind]
    allowed = set(names) | {"kind", "scale", "diameter"}
    extra = set(rec) - allowed
    if extra:
        raise ConfigError(f"{where}: unexpected field(s) {sorted(extra)}")
    missing = [f for f in names if f not in rec]
    if missing:
        raise ConfigError(f"{where}: missing field(s) {missing}")
    try:
        spec = CurveSpec(CurveKind(kind), tuple(rec[f] for f in names), float(rec.get("scale", 1.0)))
        if "diameter" in rec:
            spec = scaled_to_diameter(spec, float(rec["diameter"]))
    except (GeometryError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    return spec


def _as_list(value):
    return value if isinstance(value, list) else [value]


def parse_config(data):
    """Validate a config mapping and return a :class:`RunConfig`."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = {"curve", "curves", "k", "alpha_degrees", "family", "families", "inner", "inners", "J", "n",
             "solver", "tol", "max_iter", "output_path", "directions"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown field(s) {sorted(extra)}")
    if "curves" in data:
        curves = [parse_curve(c, f"curves[{i}]") for i, c in enumerate(_as_list(data["curves"]))]
    elif "curve" in data:
        curves = [parse_curve(data["curve"])]
    else:
        raise ConfigError("missing field 'curve'")

    def number(name, default, kind=float, positive=True):
        v = data.get(name, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)) or (kind is int and int(v) != v):
            raise ConfigError(f"{name}: expected a {kind.__name__}, got {v!r}")
        if positive and not v > 0:
            raise ConfigError(f"{name}: must be positive")
        return kind(v)

    k = number("k", 1.0)
    alpha = number("alpha_degrees", 0.0, positive=False)
    n = number("n", 256, int)
    if n % 2 or n < 8:
        raise ConfigError(f"n: must be an even integer >= 8, got {n}")
    try:
        families = [BasisFamily(f) for f in _as_list(data.get("families", data.get("family", "weighted-trig")))]
    except ValueError as exc:
        raise ConfigError(f"family: {exc}") from exc
    try:
        inners = [InnerProduct(i) for i in _as_list(data.get("inners", data.get("inner", "h1")))]
    except ValueError as exc:
        raise ConfigError(f"inner: {exc}") from exc
    Js = _as_list(data.get("J", 21))
    for J in Js:
        if isinstance(J, bool) or not isinstance(J, int) or J < 1:
            raise ConfigError(f"J: expected positive integers, got {J!r}")
        if J > n // 2 - 1:
            raise ConfigError(f"J: {J} exceeds n/2 - 1 = {n // 2 - 1}")
    solver = data.get("solver", "galerkin")
    if solver not in ("galerkin", "iteration"):
        raise ConfigError(f"solver: expected 'galerkin' or 'iteration', got {solver!r}")
    return RunConfig(
        curves=curves, k=k, alpha_degrees=alpha, families=families, inners=inners, J=list(Js), n=n,
        solver=solver, tol=number("tol", 1e-10), max_iter=number("max_iter", 500, int),
        output_path=data.get("output_path"), directions=number("directions", DEFAULT_DIRECTIONS, int),
        raw=data,
    )


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_config(data)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    value = float(value)
    if np.isnan(value):
        return "nan"
    if np.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.16e}"


def write_csv(path, header, rows, config, command):
    lines = [f"# config_hash={config.digest()} version={__version__} command={command}", ",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def _output_dir(args, config):
    out = Path(args.output_dir or (config.output_path if config else None) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _json_float(x):
    x = float(x)
    return x if np.isfinite(x) else str(x)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _solve_galerkin(curve, grid, config, J, family, inner, T=None):
    sys_ = assemble_system(curve, grid, family, config.k, J, inner, config.alpha, T=T)
    return sys_, solve_system(sys_)


def _h1_residual(grid, T, h, f):
    return float(np.linalg.norm(gram_factor((T @ h - f)[:, None], grid, InnerProduct.H1)))


def cmd_solve(config, out_dir):
    t0 = time.perf_counter()
    curve = make_curve(config.curve)
    grid = quadrature_grid(curve, config.n)
    J = config.J[0]
    summary = {
        "curve": config.curve.label, "k": config.k, "alpha_degrees": config.alpha_degrees,
        "n": config.n, "solver": config.solver, "version": __version__, "config_hash": config.digest(),
    }
    if config.solver == "iteration":
        sol, state = solve_by_iteration(curve, grid, config.k, config.alpha, config.tol, config.max_iter)
        T = assemble_T(curve, grid, config.k)
        f = incident_wave(grid.points, config.k, config.alpha)
        summary.update(
            residual_h1=_h1_residual(grid, T, sol.h, f), iterations=state.iteration_count,
            A_norm_estimate=state.estimated_A_norm, last_step_norm=state.last_step_norm,
            condition_number=None, riesz_bounds=None,
        )
    else:
        T = assemble_T(curve, grid, config.k)
        resonance_check(T)
        sys_, sol = _solve_galerkin(curve, grid, config, J, config.family, config.inner, T)
        rb = estimate_riesz_bounds(config.family, curve, config.k, J, grid)
        summary.update(
            family=config.family.value, inner=config.inner.value, J=J, residual_h1=sol.residual_h1,
            condition_number=_json_float(gram_condition_number(sys_)),
            riesz_bounds={"lower": rb.lower, "upper": rb.upper},
        )
    summary["boundary_residual"] = boundary_residual(sol, curve, config.k, config.alpha, 64)

    angles = uniform_angles(config.directions)
    A = far_field_at(sol, config.k, angles)
    write_csv(out_dir / "density.csv", ["theta", "re_h", "im_h"],
              zip(grid.nodes, sol.h.real, sol.h.imag), config, "solve")
    write_csv(out_dir / "farfield.csv", ["angle_radians", "re_A", "im_A", "abs_A"],
              zip(angles, A.real, A.imag, np.abs(A)), config, "solve")
    summary["wall_time_seconds"] = time.perf_counter() - t0
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def verify_disk(R=1.0, k=1.0, J=21, n=256, alpha=(1.0, 0.0), directions=DEFAULT_DIRECTIONS):
    """Compare the weighted-trig H1 Galerkin solution with the disk series."""
    curve = make_curve(CurveSpec.circle(R))
    grid = quadrature_grid(curve, n)
    T = assemble_T(curve, grid, k)
    sigma_ratio = resonance_check(T)
    sys_ = assemble_system(curve, grid, BasisFamily.WEIGHTED_TRIG, k, J, InnerProduct.H1, alpha, T=T)
    sol = solve_system(sys_)
    exact_h = disk_density(R, k, alpha, grid.nodes)
    angles = uniform_angles(directions)
    exact_A = disk_far_field(R, k, alpha, angles)
    A = far_field_at(sol, k, angles)
    report = {
        "R": R, "k": k, "J": J, "n": n,
        "farfield_error": float(np.max(np.abs(A - exact_A)) / np.max(np.abs(exact_A))),
        "density_error": float(np.linalg.norm(sol.h - exact_h) / np.linalg.norm(exact_h)),
        "sigma_ratio_T": float(sigma_ratio),
    }
    report["passed"] = report["farfield_error"] <= VERIFY_TOLERANCE and report["density_error"] <= VERIFY_TOLERANCE
    return report


def condition_rows(config):
    rows = []
    for spec in config.curves:
        curve = make_curve(spec)
        grid = quadrature_grid(curve, config.n)
        T = assemble_T(curve, grid, config.k)
        for family in config.families:
            for inner in config.inners:
                for J in config.J:
                    try:
                        s = assemble_system(curve, grid, family, config.k, J, inner, config.alpha, T=T)
                        sv = s.gram_singular_values()
                        cond = gram_condition_number(s)
                        rows.append((family.value, inner.value, spec.label, J, cond, sv[0], sv[-1], False))
                    except AssemblyOverflowError:
                        rows.append((family.value, inner.value, spec.label, J, np.inf, np.nan, np.nan, True))
    rows.sort(key=lambda r: (r[0], r[1], r[3], r[2]))
    return rows


CONDITION_HEADER = ["family", "inner", "curve_label", "J", "cond", "sigma_max", "sigma_min", "overflow_flag"]
CONVERGENCE_HEADER = ["curve_label", "J", "density_error", "farfield_error", "residual_h1", "boundary_residual"]


def cmd_condition_study(config, out_dir):
    rows = condition_rows(config)
    write_csv(out_dir / "condition.csv", CONDITION_HEADER, rows, config, "condition-study")
    return rows


def convergence_rows(config):
    """Errors against the disk series, or against J_ref = 2 max(J) + 1 elsewhere.

    In self-convergence mode the reference itself is reported as the last row.
    """
    rows = []
    angles = uniform_angles(config.directions)
    for spec in config.curves:
        curve = make_curve(spec)
        grid = quadrature_grid(curve, config.n)
        T = assemble_T(curve, grid, config.k)
        solutions = {J: _solve_galerkin(curve, grid, config, J, config.family, config.inner, T)[1]
                     for J in sorted(config.J)}
        if spec.kind is CurveKind.CIRCLE and spec.scale == 1.0:
            R = spec.params[0]
            ref_h = disk_density(R, config.k, config.alpha, grid.nodes)
            ref_A = disk_far_field(R, config.k, config.alpha, angles)
        else:
            J_ref = 2 * max(config.J) + 1
            if J_ref > grid.n // 2 - 1:
                raise ConfigError(f"self-convergence reference J_ref = {J_ref} exceeds n/2 - 1 = {grid.n // 2 - 1}")
            ref = _solve_galerkin(curve, grid, config, J_ref, config.family, config.inner, T)[1]
            solutions[J_ref] = ref
            ref_h, ref_A = ref.h, far_field_at(ref, config.k, angles)
        for J, sol in solutions.items():
            A = far_field_at(sol, config.k, angles)
            rows.append((
                spec.label, J,
                np.linalg.norm(sol.h - ref_h) / np.linalg.norm(ref_h),
                np.max(np.abs(A - ref_A)) / np.max(np.abs(ref_A)),
                sol.residual_h1,
                boundary_residual(sol, curve, config.k, config.alpha, 64),
            ))
    return rows


def cmd_convergence_study(config, out_dir):
    rows = convergence_rows(config)
    write_csv(out_dir / "convergence.csv", CONVERGENCE_HEADER, rows, config, "convergence-study")
    return rows


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="scatter", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("solve", "condition-study", "convergence-study"):
        sp = sub.add_parser(name)
        sp.add_argument("config")
        sp.add_argument("--output-dir")
    vd = sub.add_parser("verify-disk")
    vd.add_argument("config", nargs="?")
    vd.add_argument("--J", type=int)
    vd.add_argument("--n", type=int)
    vd.add_argument("--R", type=float)
    vd.add_argument("--k", type=float)
    vd.add_argument("--output-dir")
    return p


def _verify_disk_command(args):
    R, k, J, n, alpha = 1.0, 1.0, 21, 256, (1.0, 0.0)
    config = None
    if args.config:
        config = load_config(args.config)
        if config.curve.kind is not CurveKind.CIRCLE:
            raise ConfigError("verify-disk needs a circle curve")
        R, k, J, n, alpha = config.curve.params[0] * config.curve.scale, config.k, config.J[0], config.n, config.alpha
    R = args.R if args.R is not None else R
    k = args.k if args.k is not None else k
    J = args.J if args.J is not None else J
    n = args.n if args.n is not None else n
    if n % 2 or n < 8:
        raise ConfigError(f"--n: must be an even integer >= 8, got {n}")
    if J < 1 or J > n // 2 - 1:
        raise ConfigError(f"--J: must lie in 1..{n // 2 - 1}")
    if not (R > 0 and k > 0):
        raise ConfigError("--R and --k must be positive")
    report = verify_disk(R, k, J, n, alpha)
    print(f"farfield relative Linf error: {report['farfield_error']:.3e}")
    print(f"density relative L2 error:    {report['density_error']:.3e}")
    print("PASS" if report["passed"] else f"FAIL (tolerance {VERIFY_TOLERANCE:g})")
    if args.output_dir:
        out = _output_dir(args, config)
        (out / "verify.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def main(argv=None):
    args = build_parser().parse_args(argv)

    def show_warning(message, category, filename, lineno, file=None, line=None):
        print(f"warning: {message}", file=sys.stderr)

    with warnings.catch_warnings():
        warnings.showwarning = show_warning
        warnings.simplefilter("always", ResonanceWarning)
        return _run(args)


def _run(args):
    try:
        if args.command == "verify-disk":
            return _verify_disk_command(args)
        config = load_config(args.config)
        out = _output_dir(args, config)
        if args.command == "solve":
            summary = cmd_solve(config, out)
            print(f"boundary residual {summary['boundary_residual']:.3e}; wrote {out}")
        elif args.command == "condition-study":
            rows = cmd_condition_study(config, out)
            print(f"{len(rows)} rows written to {out / 'condition.csv'}")
        else:
            rows = cmd_convergence_study(config, out)
            print(f"{len(rows)} rows written to {out / 'convergence.csv'}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonContractionError as exc:
        print(f"solver refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (IterationLimitError, NearResonanceError, NotPositiveDefiniteError, AssemblyOverflowError) as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
