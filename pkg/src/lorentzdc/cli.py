"""Command-line front end: force profiles, spectral maps, prefactor sweeps,
desk-scale estimates, and a selftest of the oracle suites.

Output is deterministic: CSV with 9-significant-digit scientific notation
and canonical row ordering, or JSON carrying both the fully resolved
configuration and the rows.  A JSON config file can pre-set any flag
(dashes may be written as underscores); explicit command-line flags win.

Exit codes: 0 success, 1 selftest or --strict computation failure, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from . import kernels, optics
from .force import (
    EstimateInputs,
    force_profile,
    force_quantum,
    prefactor_c,
    prefactor_c_numeric,
    force_thermal,
    surface_charge,
    work_function_shift,
)
from .medium import HBAR, K_B, MaterialModel, bose, coth_half, conductivity, permittivity
from .quadrature import QuadratureSpec, integrate_adaptive, integrate_semi_infinite
from .specfun import digamma

_PART_TOKENS = {"full": "full", "real": "real_only", "imag": "imag_only"}


class UsageError(Exception):
    pass


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else f"{value:.8e}"
    return str(value)


def _write_table(columns, rows, config, out_path, fmt):
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_fmt(row.get(c)) for c in columns) for row in rows]
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = {"config": config, "rows": rows}
        text = json.dumps(payload, sort_keys=True, indent=2, default=_fmt) + "\n"
    else:
        raise UsageError(f"unknown format {fmt!r}")
    if out_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError("config file must contain a JSON object")
    return {str(k).replace("-", "_"): v for k, v in cfg.items()}


def _resolve(args, config, key, default=None):
    """Explicit flag > config file > default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _theta_list(raw) -> list[float]:
    if isinstance(raw, (list, tuple)):
        values = [float(t) for t in raw]
    else:
        values = [float(t) for t in str(raw).split(",") if t.strip()]
    if not values or any(t <= 0 for t in values):
        raise UsageError("theta values must be positive")
    return values


def _grid(zmin, zmax, points, log):
    if points is None or int(points) < 1:
        raise UsageError("grid needs at least one point")
    points = int(points)
    zmin = float(zmin)
    zmax = float(zmax)
    if not 0 < zmin <= zmax:
        raise UsageError("need 0 < zmin <= zmax")
    if points == 1:
        return np.array([zmin])
    if log:
        return np.geomspace(zmin, zmax, points)
    return np.linspace(zmin, zmax, points)


def _quad_spec(args, config) -> QuadratureSpec:
    spec = QuadratureSpec()
    rel = _resolve(args, config, "rel_tol")
    if rel is not None:
        spec = replace(spec, rel_tol=float(rel))
    return spec


def _model(args, config, run=None) -> MaterialModel:
    run = run or {}
    kind = run.get("model") or _resolve(args, config, "model", "drude")
    w = run.get("omega_p_tau") or _resolve(args, config, "omega_p_tau", 210.0)
    return MaterialModel(str(kind), float(w))


# --- force-profile ----------------------------------------------------------

def cmd_force_profile(args, config):
    spec = _quad_spec(args, config)
    jobs = int(_resolve(args, config, "jobs", 1))
    include_quantum = bool(_resolve(args, config, "quantum", False))

    runs = config.get("runs")
    if runs is None:
        runs = [{}]
    rows = []
    resolved_runs = []
    for run in runs:
        model = _model(args, config, run)
        thetas = _theta_list(run.get("theta") or _resolve(args, config, "theta", "1.25"))
        grid = _grid(
            run.get("zmin") or _resolve(args, config, "zmin", 0.2),
            run.get("zmax") or _resolve(args, config, "zmax", 8.0),
            run.get("points") or _resolve(args, config, "points", 15),
            run.get("log") if run.get("log") is not None else _resolve(args, config, "log", False),
        )
        resolved_runs.append({"model": model.kind, "omega_p_tau": model.omega_p_tau,
                              "theta": thetas, "zeta": [float(z) for z in grid]})
        for point in force_profile(model, grid, thetas, spec,
                                   include_quantum=include_quantum, jobs=jobs):
            row = {
                "model": point.model.kind,
                "theta": point.theta,
                "zeta": point.zeta,
                "f_reduced": point.f_thermal,
                "f_norm": point.f_norm,
                "err_estimate": point.error_estimate,
                "converged": point.converged,
            }
            if include_quantum:
                row["f_quantum"] = point.f_quantum
                row["f_total"] = point.f_total
            rows.append(row)

    columns = ["model", "theta", "zeta", "f_reduced", "f_norm", "err_estimate", "converged"]
    if include_quantum:
        columns += ["f_quantum", "f_total"]
    resolved = {"command": "force-profile", "runs": resolved_runs,
                "rel_tol": spec.rel_tol, "quantum": include_quantum}
    _write_table(columns, rows, resolved,
                 _resolve(args, config, "out"), _resolve(args, config, "format", "csv"))
    if _resolve(args, config, "strict", False) and not all(r["converged"] for r in rows):
        return 1
    return 0


# --- spectral-map -----------------------------------------------------------

def _map_panel_rows(panel, args, config, spec, jobs):
    name = panel.get("name", "a")
    kind = panel.get("map") or _resolve(args, config, "map", "thermal")
    model = _model(args, config, panel)
    w = model.omega_p_tau
    zeta = float(panel.get("zeta") or _resolve(args, config, "zeta", 1.5))
    theta = float(panel.get("theta") or _resolve(args, config, "theta_map", 1.25))

    def _axis(prefix, lo_default, hi_default, n_default):
        lo = float(panel.get(f"{prefix}min") or _resolve(args, config, f"{prefix}min", lo_default))
        hi = float(panel.get(f"{prefix}max") or _resolve(args, config, f"{prefix}max", hi_default))
        n = int(panel.get(f"{prefix}points") or _resolve(args, config, f"{prefix}points", n_default))
        if not 0 < lo < hi or n < 2:
            raise UsageError(f"bad {prefix} grid")
        return np.geomspace(lo, hi, n)

    rows = []
    if kind in ("quantum", "thermal"):
        xs = _axis("x", 0.05 if kind == "quantum" else 0.01, 2000.0 if kind == "quantum" else 30.0, 60)
        ps = _axis("p", 0.05, 2000.0 if kind == "quantum" else 1000.0, 60)
        part = _PART_TOKENS[str(panel.get("part") or _resolve(args, config, "part", "full"))]

        def one_row(x):
            if kind == "quantum":
                vals = kernels.quantum_kernel_imag(model, x, ps, zeta) * zeta ** 3
            else:
                vals = kernels.thermal_kernel(model, part, x, ps, zeta, theta)
            return vals

        values = _parallel_rows(one_row, xs, jobs)
        for x, vals in zip(xs, values):
            for p, v in zip(ps, vals):
                rows.append({
                    "panel": name, "x": float(x), "p_or_zeta": float(p), "value": float(v),
                    "lightcone_x": float(p), "diffusion_x": float(optics.diffusion_frequency(p, w)),
                    "knee_x": 1.0, "depth_p": w / zeta,
                    "theta_x": theta if kind == "thermal" else None,
                })
    elif kind == "spectrum":
        xs = _axis("x", 0.01, 30.0, 40)
        zs = _axis("z", 0.2, 8.0, 25)

        def one_row(x):
            out = []
            for z in zs:
                val = kernels.spectral_density(model, float(x), float(z), theta, spec)
                out.append(-z * z * val / (2.0 * math.pi))
            return out

        values = _parallel_rows(one_row, xs, jobs)
        for x, vals in zip(xs, values):
            for z, v in zip(zs, vals):
                rows.append({
                    "panel": name, "x": float(x), "p_or_zeta": float(z), "value": float(v),
                    "lightcone_x": None, "diffusion_x": None,
                    "knee_x": 1.0, "depth_p": None, "theta_x": theta,
                })
    else:
        raise UsageError(f"unknown map kind {kind!r}")
    return rows


def _parallel_rows(fn, xs, jobs):
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, xs))
    return [fn(x) for x in xs]


def cmd_spectral_map(args, config):
    spec = _quad_spec(args, config)
    jobs = int(_resolve(args, config, "jobs", 1))
    panels = config.get("panels") or [{}]
    rows = []
    for panel in panels:
        rows.extend(_map_panel_rows(panel, args, config, spec, jobs))
    columns = ["panel", "x", "p_or_zeta", "value",
               "lightcone_x", "diffusion_x", "knee_x", "depth_p", "theta_x"]
    resolved = {"command": "spectral-map", "panels": panels, "rel_tol": spec.rel_tol}
    _write_table(columns, rows, resolved,
                 _resolve(args, config, "out"), _resolve(args, config, "format", "csv"))
    return 0


# --- prefactor --------------------------------------------------------------

def cmd_prefactor(args, config):
    spec = _quad_spec(args, config)
    tmin = float(_resolve(args, config, "theta_min", 0.03))
    tmax = float(_resolve(args, config, "theta_max", 30.0))
    points = int(_resolve(args, config, "points", 30))
    force_zeta = float(_resolve(args, config, "force_zeta", 0.2))
    force_every = int(_resolve(args, config, "force_every", 0))
    if not 0 < tmin < tmax or points < 2:
        raise UsageError("need 0 < theta-min < theta-max and at least two points")

    thetas = np.geomspace(tmin, tmax, points)
    model = _model(args, config)
    rows = []
    for i, th in enumerate(thetas):
        th = float(th)
        row = {
            "theta": th,
            "c_closed_norm": prefactor_c(th),
            "c_numeric_norm": prefactor_c_numeric(th, spec),
            "f_norm_at_zeta0.2": None,
        }
        if force_every and i % force_every == 0:
            res = force_thermal(model, force_zeta, th, spec)
            row["f_norm_at_zeta0.2"] = res.f_norm
        rows.append(row)
    columns = ["theta", "c_closed_norm", "c_numeric_norm", "f_norm_at_zeta0.2"]
    resolved = {"command": "prefactor", "theta_min": tmin, "theta_max": tmax,
                "points": points, "force_zeta": force_zeta, "force_every": force_every,
                "model": model.kind, "omega_p_tau": model.omega_p_tau,
                "rel_tol": spec.rel_tol}
    _write_table(columns, rows, resolved,
                 _resolve(args, config, "out"), _resolve(args, config, "format", "csv"))
    return 0


# --- estimates --------------------------------------------------------------

def cmd_estimates(args, config):
    custom = [_resolve(args, config, k) for k in ("n0", "v_fermi", "mass", "tau")]
    if any(v is not None for v in custom):
        if any(v is None for v in custom):
            raise UsageError("custom material needs all of --n0, --v-fermi, --mass, --tau")
        inputs = EstimateInputs(n0=float(custom[0]), v_fermi=float(custom[1]),
                                mass=float(custom[2]), tau_seconds=float(custom[3]))
    else:
        inputs = EstimateInputs.gold()
    theta = float(_resolve(args, config, "theta", 0.75))

    wf = work_function_shift(inputs, theta)
    sc = surface_charge(inputs, theta)
    t_kelvin = theta * HBAR / (K_B * inputs.tau_seconds)
    report = {
        "n0": inputs.n0,
        "v_fermi": inputs.v_fermi,
        "mass": inputs.mass,
        "tau_seconds": inputs.tau_seconds,
        "theta": theta,
        "temperature_K": t_kelvin,
        "omega_p": inputs.omega_p,
        "lambdabar_p_m": inputs.lambdabar_p,
        "debye_length_m": inputs.debye_length,
        "c_norm": wf.c_norm,
        "coupling_fraction": wf.coupling_fraction,
        "momentum_fraction": wf.momentum_fraction,
        "work_function_shift_eV": wf.delta_phi_ev,
        "work_function_shift_factored_eV": wf.factored_ev,
        "surface_charge_C_per_m2": sc.charge_per_m2,
        "surface_charge_e_per_um2": sc.charge_per_um2,
        "surface_charge_factored_C_per_m2": sc.factored_per_m2,
        "surface_charge_factored_e_per_um2": sc.factored_per_um2,
    }
    fmt = _resolve(args, config, "format", "text")
    out = _resolve(args, config, "out")
    if fmt == "json":
        text = json.dumps({"config": {"command": "estimates"}, "report": report},
                          sort_keys=True, indent=2) + "\n"
    else:
        lines = [
            f"material: n0 = {inputs.n0:.4e} 1/m^3, v_F = {inputs.v_fermi:.4e} m/s, "
            f"m = {inputs.mass:.4e} kg, tau = {inputs.tau_seconds:.4e} s",
            f"theta = {theta:g}  (T = {t_kelvin:.2f} K), lambdabar_p = {inputs.lambdabar_p*1e9:.2f} nm, "
            f"ell_D = {inputs.debye_length*1e9:.4f} nm",
            f"factored fractions: e^2/(eps0 hbar c) = {wf.coupling_fraction:.4f}, "
            f"(hbar/lambdabar_p)/(m v_F) = {wf.momentum_fraction:.5f}",
            f"work-function shift:  direct {wf.delta_phi_ev:+.4e} eV | "
            f"factored {wf.factored_ev:+.4e} eV",
            f"screening charge:     direct {sc.charge_per_m2:+.4e} C/m^2 "
            f"({sc.charge_per_um2:+.4f} e/um^2) | factored {sc.factored_per_m2:+.4e} C/m^2 "
            f"({sc.factored_per_um2:+.4f} e/um^2)",
        ]
        text = "\n".join(lines) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)
    return 0


# --- selftest ---------------------------------------------------------------

def _selftest_checks():
    rng = np.random.default_rng(20240205)
    checks = []

    # Fresnel combined-sum identity on random lossy points
    worst = 0.0
    for _ in range(300):
        x = float(10.0 ** rng.uniform(-3, 3))
        p = float(10.0 ** rng.uniform(-3, 4))
        w = float(10.0 ** rng.uniform(0.5, 3))
        eps = permittivity(MaterialModel.drude(w), x)
        q, v = optics.wavevectors(eps, x, p)
        r_p, r_s = optics.fresnel_inner(eps, q, v)
        s = optics.fresnel_sum(eps, q, v)
        worst = max(worst, abs(s - (r_p + r_s)) / (1.0 + abs(r_p) + abs(r_s)))
    checks.append(("fresnel combined-sum identity", worst, 1e-11))

    # polarization-tensor angular average identity; p sampled over five
    # decades around the medium wavenumber so the assembly stays conditioned
    worst = 0.0
    for _ in range(300):
        x = float(10.0 ** rng.uniform(-3, 3))
        w = float(10.0 ** rng.uniform(0.5, 3))
        eps = permittivity(MaterialModel.drude(w), x)
        p = float(10.0 ** rng.uniform(-3, 2.0)) * x * math.sqrt(abs(eps) + 1.0)
        q, v = optics.wavevectors(eps, x, p)
        r_p, r_s = optics.fresnel_inner(eps, q, v)
        lhs = optics.angular_average_vector(eps, q, v, p)
        rhs = q * (r_p + r_s)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-30))
    checks.append(("angular-average tensor identity", worst, 1e-11))

    # quadrature closed forms
    spec = QuadratureSpec()
    r = integrate_adaptive(lambda t: t * t, 0.0, 1.0, spec)
    checks.append(("quadrature x^2 on [0,1]", abs(r.value - 1.0 / 3.0), 1e-12))
    z = 0.7
    r = integrate_semi_infinite(lambda q: q * np.exp(-2 * z * q), 0.0, spec, 1.0 / (2 * z))
    checks.append(("semi-infinite Q e^-2Qz", abs(r.value - 1.0 / (4 * z * z)) / (1.0 / (4 * z * z)), 1e-10))
    th = 1.25
    r = integrate_semi_infinite(lambda x: x / np.expm1(x / th), 0.0, spec, th)
    exact = math.pi ** 2 * th ** 2 / 6.0
    checks.append(("Bose integral x nbar", abs(r.value - exact) / exact, 1e-10))

    # branch rule: Im q >= 0 and Im v >= 0 guarantee decaying exponentials
    worst = 0.0
    for _ in range(300):
        x = float(10.0 ** rng.uniform(-3, 3))
        p = float(10.0 ** rng.uniform(-3, 4))
        eps = permittivity(MaterialModel.drude(), x)
        q, v = optics.wavevectors(eps, x, p)
        worst = max(worst, -min(float(np.imag(q)), float(np.imag(v)), 0.0))
    checks.append(("wavevector branch rule Im >= 0", worst, 0.0))

    # digamma knowns
    checks.append(("digamma psi(1)", abs(digamma(1.0) + 0.5772156649015329), 1e-12))
    checks.append(("digamma psi(1/2)", abs(digamma(0.5) + 1.9635100260214235), 1e-12))

    # coth identity
    worst = 0.0
    for _ in range(100):
        x = float(10.0 ** rng.uniform(-6, 1.7))
        worst = max(worst, abs(coth_half(x, 1.0) - 1.0 - 2.0 * bose(x, 1.0)))
    checks.append(("coth = 1 + 2 nbar identity", worst, 1e-13))

    # prefactor dual route
    worst = 0.0
    for th in (0.05, 0.7, 3.0, 20.0):
        c1 = prefactor_c(th)
        c2 = prefactor_c_numeric(th)
        worst = max(worst, abs(c1 - c2) / abs(c2))
    checks.append(("prefactor closed vs numeric", worst, 1e-6))
    return checks


def cmd_selftest(args, config):
    perturb = bool(getattr(args, "perturb_branch", False))
    if perturb:
        with optics.perturbed_branch():
            checks = _selftest_checks()
    else:
        checks = _selftest_checks()
    failed = 0
    for name, value, bound in checks:
        ok = value <= bound
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {value:.3e} (bound {bound:.1e})")
    print(f"selftest: {len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 1


# --- quantum force summary (used by demos; not a spec interface) ------------

def cmd_run(args, config):
    command = config.get("command")
    if command is None:
        raise UsageError("config file must contain a 'command' key for `run`")
    handler = _COMMANDS.get(str(command))
    if handler is None:
        raise UsageError(f"unknown command {command!r} in config")
    return handler(args, config)


_COMMANDS = {
    "force-profile": cmd_force_profile,
    "spectral-map": cmd_spectral_map,
    "prefactor": cmd_prefactor,
    "estimates": cmd_estimates,
    "selftest": cmd_selftest,
}


def _add_common(parser):
    parser.add_argument("--config", help="JSON config file; explicit flags override it")
    parser.add_argument("--model", choices=("drude", "plasma", "ideal"))
    parser.add_argument("--omega-p-tau", dest="omega_p_tau", type=float)
    parser.add_argument("--rel-tol", dest="rel_tol", type=float)
    parser.add_argument("--out", help="output path ('-' for stdout)")
    parser.add_argument("--format", choices=("csv", "json", "text"))
    parser.add_argument("--jobs", type=int)
    parser.add_argument("--strict", action="store_const", const=True, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorentzdc",
        description="Rectified DC Lorentz force density below a conductor surface.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("force-profile", help="force density over a depth grid")
    _add_common(p)
    p.add_argument("--theta", help="comma-separated reduced temperatures")
    p.add_argument("--zmin", type=float)
    p.add_argument("--zmax", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--log", action="store_const", const=True, default=None)
    p.add_argument("--quantum", action="store_const", const=True, default=None,
                   help="also compute the Wick-rotated quantum force per point")
    p.set_defaults(handler=cmd_force_profile)

    p = sub.add_parser("spectral-map", help="integrand / spectrum maps behind the figures")
    _add_common(p)
    p.add_argument("--map", choices=("quantum", "thermal", "spectrum"))
    p.add_argument("--zeta", type=float)
    p.add_argument("--theta", dest="theta_map", type=float)
    p.add_argument("--part", choices=tuple(_PART_TOKENS))
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--xpoints", type=int)
    p.add_argument("--pmin", type=float)
    p.add_argument("--pmax", type=float)
    p.add_argument("--ppoints", type=int)
    p.add_argument("--zmin", dest="zmin", type=float)
    p.add_argument("--zmax", dest="zmax", type=float)
    p.add_argument("--zpoints", type=int)
    p.set_defaults(handler=cmd_spectral_map)

    p = sub.add_parser("prefactor", help="short-distance amplitude c(T) sweep")
    _add_common(p)
    p.add_argument("--theta-min", dest="theta_min", type=float)
    p.add_argument("--theta-max", dest="theta_max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--force-zeta", dest="force_zeta", type=float)
    p.add_argument("--force-every", dest="force_every", type=int,
                   help="compute the full force at every k-th theta (0 = skip)")
    p.set_defaults(handler=cmd_prefactor)

    p = sub.add_parser("estimates", help="work-function shift and screening charge")
    _add_common(p)
    p.add_argument("--n0", type=float)
    p.add_argument("--v-fermi", dest="v_fermi", type=float)
    p.add_argument("--mass", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--theta", type=float)
    p.set_defaults(handler=cmd_estimates)

    p = sub.add_parser("selftest", help="run the oracle suites")
    _add_common(p)
    p.add_argument("--perturb-branch", dest="perturb_branch",
                   action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(handler=cmd_selftest)

    p = sub.add_parser("run", help="run the command recorded in a config file")
    _add_common(p)
    p.set_defaults(handler=cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.handler(args, config)
    except UsageError as exc:
        parser.exit(2, f"error: {exc}\n")
    except (OSError, json.JSONDecodeError) as exc:
        parser.exit(2, f"error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
