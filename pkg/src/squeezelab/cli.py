"""Command-line front end: solve, analytic, verify, qgrid, roots.

Configs are JSON files; outputs are FockVector JSON, Q-grid CSV with a
metadata sidecar, and report JSON.  All float output goes through repr()
(shortest round-trip decimal), and dictionaries are serialized with sorted
keys, so identical configs give byte-identical outputs.
"""

import argparse
import cmath
import json
import math
import os
import sys

import numpy as np

from . import analytic, bargmann, fock, models, numerics, solver

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


class ConfigError(ValueError):
    pass


def _parse_complex(v, name):
    if isinstance(v, (int, float)):
        return complex(v)
    if (isinstance(v, (list, tuple)) and len(v) == 2
            and all(isinstance(x, (int, float)) for x in v)):
        return complex(v[0], v[1])
    raise ConfigError(f"{name} must be a number or a [re, im] pair")


def _cfmt(z):
    z = complex(z)
    return [z.real, z.imag]


DEFAULT_GRID = {"x_min": -5.0, "x_max": 5.0, "y_min": -5.0, "y_max": 5.0,
                "nx": 81, "ny": 81}

_FIG1_LAMBDAS = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0)

PRESETS = {
    # cubic f(z) = z^3 + z, beta = 0, seeds psi(0)=1, psi'(0)=0, psi''(0)=1
    "fig1": {
        "model": "poly_f",
        "coeffs": [0.0, 1.0, 0.0, 1.0],
        "beta": 0.0,
        "seeds": [1.0, 0.0, 1.0],
        "lambdas": [[l, 0.0] for l in _FIG1_LAMBDAS],
    },
    # even amplitude-squared state, beta = 5, complex lambda sweep
    "fig2": {
        "model": "amp2",
        "parity": "even",
        "beta": 5.0,
        "lambdas": [[l, 1.0] for l in _FIG1_LAMBDAS],
    },
    # deformed g(n) = n, seeds psi(0)=0, psi'(0)=1; beta = 1 (the source
    # figure does not state beta; 1 is this artifact's choice)
    "fig3": {
        "model": "deformed_g",
        "g_values": list(range(80)),
        "beta": 1.0,
        "seeds": [0.0, 1.0],
        "lambdas": [[l, 0.0] for l in _FIG1_LAMBDAS],
    },
}


def load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def validate_grid(grid):
    g = dict(DEFAULT_GRID)
    g.update(grid or {})
    if g["nx"] < 2 or g["ny"] < 2:
        raise ConfigError("grid nx, ny must be >= 2")
    if g["x_max"] <= g["x_min"] or g["y_max"] <= g["y_min"]:
        raise ConfigError("grid extents must be increasing")
    return g


def _model_config(cfg, lam_override=None):
    """Validated (model, lam, beta, extras) tuple from a config dict."""
    model = cfg.get("model")
    if model not in ("poly_f", "deformed_g", "quadrature", "amp2"):
        raise ConfigError(f"unknown model {model!r}")
    lam = (_parse_complex(lam_override, "lambda") if lam_override is not None
           else _parse_complex(cfg.get("lambda"), "lambda"))
    if lam == -1:
        raise ConfigError("lambda = -1 is excluded")
    beta = _parse_complex(cfg.get("beta", 0.0), "beta")
    return model, lam, beta


def _seeds(cfg):
    seeds = cfg.get("seeds")
    if seeds is None:
        raise ConfigError("model requires 'seeds' (one per ODE order)")
    return tuple(_parse_complex(s, "seed") for s in seeds)


def build_ode(cfg, lam_override=None):
    model, lam, beta = _model_config(cfg, lam_override)
    if model == "poly_f":
        coeffs = tuple(float(c) for c in cfg.get("coeffs", ()))
        return models.build_poly_f_ode(models.PolyFSpec(coeffs, lam, beta))
    if model == "deformed_g":
        g_values = tuple(float(g) for g in cfg.get("g_values", ()))
        if not g_values:
            raise ConfigError("deformed_g requires 'g_values'")
        return models.build_deformed_ode(
            models.DeformedGSpec(g_values, lam, beta))
    if model == "quadrature":
        return models.build_poly_f_ode(models.PolyFSpec((0.0, 1.0), lam, beta))
    raise ConfigError(f"model {model!r} has no ODE form here; use 'analytic'")


def solve_state(cfg, lam_override=None):
    """EntireState plus diagnostics for an ODE-backed model config."""
    model, lam, beta = _model_config(cfg, lam_override)
    if model == "amp2":
        p = analytic.AmpSquaredParams(lam, beta)
        dim = int(cfg.get("dim", 120))
        st = analytic.amp2_squeezed_form(p, cfg.get("parity", "even"), dim)
        return st, {"model": "amp2", "normalization": 1.0}
    ode = build_ode(cfg, lam_override)
    init = solver.InitialData(_seeds(cfg))
    n_taylor = int(cfg.get("n_taylor", 120))
    st = solver.solve_series(ode, init, n_taylor)
    field = solver.assemble_field(
        ode, init,
        phi_count=int(cfg.get("phi_count", 64)),
        r_count=int(cfg.get("r_count", 200)),
        r_max=float(cfg.get("r_max", 4.0)),
        tol=float(cfg.get("tol", 1e-10)),
    )
    rep = solver.analyticity_check(field)
    norm = bargmann.normalization(st)
    diags = {
        "model": model,
        "lambda": _cfmt(lam),
        "beta": _cfmt(beta),
        "ode_order": ode.order,
        "normalization": norm,
        "free_indices": field.free_indices,
        "analyticity": {
            "positive_mode_residual": rep.positive_mode_residual,
            "profile_residuals": [float(x) for x in rep.profile_residuals],
            "max_residual": rep.max_residual,
        },
    }
    return st, diags


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=1)
        fh.write("\n")


def cmd_solve(cfg, out_dir, normalized=False, precision="double"):
    prefix = cfg.get("out_prefix", "solve")
    st, diags = solve_state(cfg)
    vec = st.fock
    if normalized:
        vec = vec.normalized()
    state_path = os.path.join(out_dir, f"{prefix}_state.json")
    vec.save(state_path)
    diag_path = os.path.join(out_dir, f"{prefix}_diagnostics.json")
    _write_json(diag_path, diags)
    return [state_path, diag_path]


def write_qgrid(st, grid, csv_path, meta_path, normalized, description):
    xs, ys, q = bargmann.q_grid(
        st, grid["x_min"], grid["x_max"], grid["y_min"], grid["y_max"],
        int(grid["nx"]), int(grid["ny"]), normalized=normalized)
    with open(csv_path, "w") as fh:
        fh.write("re,im,q\n")
        for iy in range(len(ys)):
            for ix in range(len(xs)):
                fh.write(f"{float(xs[ix])!r},{float(ys[iy])!r},{float(q[iy, ix])!r}\n")
    meta = {
        "csv": os.path.basename(csv_path),
        "x_min": grid["x_min"], "x_max": grid["x_max"],
        "y_min": grid["y_min"], "y_max": grid["y_max"],
        "nx": int(grid["nx"]), "ny": int(grid["ny"]),
        "normalized": bool(normalized),
        "description": description,
    }
    _write_json(meta_path, meta)
    return meta


def cmd_qgrid(cfg, out_dir, normalized=False, precision="double"):
    grid = validate_grid(cfg.get("grid"))
    preset = cfg.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        base = dict(PRESETS[preset])
        lambdas = base.pop("lambdas")
        base.update({k: v for k, v in cfg.items()
                     if k not in ("preset", "grid")})
        panels = []
        written = []
        for i, lam in enumerate(lambdas):
            st, _ = solve_state(base, lam_override=lam)
            lam_c = _parse_complex(lam, "lambda")
            tag = f"{preset}_{i:02d}"
            csv_path = os.path.join(out_dir, f"{tag}.csv")
            meta_path = os.path.join(out_dir, f"{tag}.json")
            desc = f"{base['model']} lambda={lam_c.real!r}+{lam_c.imag!r}i"
            meta = write_qgrid(st, grid, csv_path, meta_path, normalized, desc)
            meta["title"] = _lambda_label(lam_c)
            panels.append(meta)
            written.extend([csv_path, meta_path])
        meta_all = os.path.join(out_dir, f"{preset}_meta.json")
        _write_json(meta_all, {"preset": preset, "panels": panels})
        written.append(meta_all)
        return written
    if "state_file" in cfg:
        st = bargmann.EntireState(fock.FockVector.load(cfg["state_file"]))
    else:
        st, _ = solve_state(cfg)
    prefix = cfg.get("out_prefix", "qgrid")
    csv_path = os.path.join(out_dir, f"{prefix}.csv")
    meta_path = os.path.join(out_dir, f"{prefix}.json")
    write_qgrid(st, grid, csv_path, meta_path, normalized,
                cfg.get("description", cfg.get("model", "state")))
    return [csv_path, meta_path]


def _lambda_label(lam):
    if lam.imag == 0:
        return f"lambda={lam.real:g}"
    return f"lambda={lam.real:g}{lam.imag:+g}i"


def cmd_roots(cfg, out_dir, normalized=False, precision="double"):
    coeffs = tuple(float(c) for c in cfg.get("coeffs", ()))
    if len(coeffs) < 2:
        raise ConfigError("roots requires polynomial 'coeffs' of degree >= 1")
    gamma = _parse_complex(cfg.get("gamma", 0.0), "gamma")
    rep = models.root_report(coeffs, gamma)
    out = {
        "roots": [[r.real, r.imag, k] for r, k in rep.roots],
        "separable": bool(rep.separable),
        "discriminant": _cfmt(rep.discriminant),
    }
    path = os.path.join(out_dir, cfg.get("out_prefix", "roots") + ".json")
    _write_json(path, out)
    return [path]


def cmd_analytic(cfg, out_dir, normalized=False, precision="double"):
    model, lam, beta = _model_config(cfg)
    prefix = cfg.get("out_prefix", "analytic")
    if model in ("quadrature", "poly_f"):
        p = analytic.QuadratureParams(lam, beta)
        d = analytic.quad_dispersions(p)
        out = {
            "lambda": _cfmt(lam),
            "beta": _cfmt(beta),
            "norm_squared": analytic.quad_norm_closed(p),
            "var_x": d.var_x,
            "var_p": d.var_p,
            "defect": d.defect,
            "min_normally_ordered_quad_variance": d.min_no_quad_variance,
            "mean_a": _cfmt(analytic.quad_mean_a(p)),
        }
    elif model == "amp2":
        p = analytic.AmpSquaredParams(lam, beta)
        parity = cfg.get("parity", "even")
        unc = analytic.amp2_uncertainty(p, parity, dim=int(cfg.get("dim", 120)))
        out = analytic.report_json(p, parity=parity, unc=unc)
        if parity == "even":
            rep = analytic.amp2_mean_photon_even(
                p, extended=(precision == "extended") or None)
            out["mean_n"] = rep.value
            out["matched_variant"] = rep.matched_variant
    else:
        raise ConfigError(f"no closed forms for model {model!r}")
    path = os.path.join(out_dir, prefix + ".json")
    _write_json(path, out)
    return [path]


# ---------------------------------------------------------------------------
# verify: the invariant battery
# ---------------------------------------------------------------------------

def _check(name, residual, tol):
    return {"name": name, "residual": float(residual), "tolerance": tol,
            "pass": bool(residual <= tol)}


def verify_battery(mutate=None):
    checks = []

    # quadrature: solver series vs the closed-form Gaussian, lambda sweep
    worst = 0.0
    for lam in _FIG1_LAMBDAS:
        p = analytic.QuadratureParams(lam, 1.0 + 1.0j)
        ode = models.build_poly_f_ode(models.PolyFSpec((0.0, 1.0), lam, p.beta))
        st = solver.solve_series(ode, solver.InitialData((1.0,)), 80)
        for z in (0.5, 1.5, 1.0 + 1.0j, -2.0, 3.0):
            ref = cmath.exp(p.w * z * z / 2 + p.u * z)
            worst = max(worst, abs(st(z) - ref) / abs(ref))
    checks.append(_check("quadrature solver vs closed form", worst, 1e-7))

    # quadrature dispersion identity sweep
    worst = 0.0
    for lam in (2.0, 1.0 + 1.0j, 3.0 + 0.5j, 0.5 + 0.2j):
        d = analytic.quad_dispersions(analytic.QuadratureParams(lam, 0.0))
        ref = math.tan(cmath.phase(complex(lam))) ** 2
        worst = max(worst, abs(d.defect - ref))
    checks.append(_check("quadrature defect equals tan^2(arg lambda)", worst, 1e-10))

    # amplitude-squared branch invariance
    worst = 0.0
    for lam in (2.0, 1.5 + 0.7j):
        pp = analytic.AmpSquaredParams(lam, 5.0, branch=+1)
        pm = analytic.AmpSquaredParams(lam, 5.0, branch=-1)
        for z in (0.4, 1.0 - 0.3j, 1.5j):
            vp = analytic.amp2_fb_value(pp, "even", z)
            vm = analytic.amp2_fb_value(pm, "even", z)
            worst = max(worst, abs(vp - vm) / max(1.0, abs(vp)))
    checks.append(_check("amplitude-squared branch invariance", worst, 1e-10))

    # deformed g(n)=n: derivative recurrence vs ray integration
    beta = 1.0
    spec = models.DeformedGSpec(tuple(range(60)), 2.0, beta)
    ode = models.build_deformed_ode(spec)
    d = models.initial_condition_recurrence(spec, 0.0, 6, free_values=[1.0])
    if mutate == "recurrence-sign":
        # test fixture: flip the sign of the three-term relation's last term
        table = spec.table()
        lam = 2.0
        for k in range(1, 6):
            rhs = beta * d[k] + k * (1 - lam) * table.g(k - 1) * d[k - 1]
            if table.g(k) != 0:
                d[k + 1] = rhs / ((1 + lam) * table.g(k))
    init = solver.InitialData(tuple(d[:2]))
    st = solver.solve_series(ode, init, 60)
    ref_d = [st.taylor[k] * math.factorial(k) for k in range(len(d))]
    worst = max(abs(a - b) for a, b in zip(d, ref_d))
    checks.append(_check("deformed initial-condition recurrence vs series", worst, 1e-9))

    # Mehler identity spot sweep
    worst = 0.0
    ctl = numerics.SeriesControl(max_terms=4000)
    for x, y, z in ((0.3, 0.2, 0.6), (0.5 + 0.1j, -0.4, 0.85), (0.0, 0.0, 0.9)):
        s = numerics.mehler_sum(x, y, z, ctl)
        c = numerics.mehler_closed_form(x, y, z)
        worst = max(worst, abs(s - c) / max(1.0, abs(c)))
    checks.append(_check("Hermite bilinear series vs closed form", worst, 1e-9))

    return checks


def cmd_verify(cfg, out_dir, normalized=False, precision="double"):
    mutate = (cfg or {}).get("mutate")
    checks = verify_battery(mutate=mutate)
    out = {"checks": checks, "all_pass": all(c["pass"] for c in checks)}
    path = os.path.join(out_dir, (cfg or {}).get("out_prefix", "verify") + ".json")
    _write_json(path, out)
    if not out["all_pass"]:
        raise VerificationFailed(
            ", ".join(c["name"] for c in checks if not c["pass"]))
    return [path]


class VerificationFailed(Exception):
    pass


COMMANDS = {
    "solve": cmd_solve,
    "analytic": cmd_analytic,
    "verify": cmd_verify,
    "qgrid": cmd_qgrid,
    "roots": cmd_roots,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="squeezelab",
        description="Generalized squeezed states: solvers, reports, Q-grids.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON config path")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--precision", choices=("double", "extended"),
                        default="double")
    parser.add_argument("--normalized", action="store_true")
    args = parser.parse_args(argv)

    try:
        if args.config is not None:
            cfg = load_config(args.config)
        elif args.command == "verify":
            cfg = {}
        else:
            raise ConfigError(f"command {args.command!r} requires --config")
        os.makedirs(args.out, exist_ok=True)
        written = COMMANDS[args.command](
            cfg, args.out, normalized=args.normalized,
            precision=args.precision)
    except (ConfigError, models.RecurrenceInconsistent) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)},
                  sys.stderr, sort_keys=True)
        sys.stderr.write("\n")
        return EXIT_CONFIG
    except (solver.SolverError, analytic.NotNormalizable, VerificationFailed,
            numerics.SeriesError, ValueError, OSError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)},
                  sys.stderr, sort_keys=True)
        sys.stderr.write("\n")
        return EXIT_FAILURE
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
