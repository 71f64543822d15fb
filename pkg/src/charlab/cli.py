"""Batch front end: ``charlab <command> --config <path> [--out DIR]``.

Exit status: 0 success, 1 tolerance failure, 2 invalid configuration,
3 numerical failure. Every failure also writes a machine-readable
``error.json`` into the output directory.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import io
from .characteristics import moc_solve, trace_many
from .errors import CharlabError
from .field import SolutionField
from .oracle import FVDiagnostics, fv_solve
from .solutions import (
    constant_profile,
    make_simple_wave,
    nonclassical_f,
    pde_residual,
    profile_from_f,
    sample_field,
    sine_profile,
)
from .swe import sw_matrix
from .symmetry import (
    PsiFamily,
    det0_determining_residual,
    eigenvalue_coefficient_check,
    gradient_relations_residual,
    invariant_surface_residual,
    reduced_determining_residual,
    restricted_generator,
    v1,
    v2,
)

__all__ = ["COMMANDS", "ConfigError", "load_schema", "validate_config", "run", "main"]

COMMANDS = ("simulate", "trace", "verify", "exact", "breaking", "compare")

EXIT_OK, EXIT_TOLERANCE, EXIT_SCHEMA, EXIT_NUMERICAL = 0, 1, 2, 3

DEFAULT_TOLERANCES = {
    "residual": 1e-3,
    "drift": 1e-3,
    "min_order": 1.7,
    "min_ratio": 1.5,
    "invariant": 1e-10,
}

FD_CHECKS = ("invariant-surface", "gradient-relation", "pde")

XI_CANDIDATES = {
    "u": lambda s: s[1],
    "u+sqrt(h)": lambda s: s[1] + math.sqrt(s[0]),
    "u-sqrt(h)": lambda s: s[1] - math.sqrt(s[0]),
    "u+2sqrt(h)": lambda s: s[1] + 2 * math.sqrt(s[0]),
    "u-2sqrt(h)": lambda s: s[1] - 2 * math.sqrt(s[0]),
    "0": lambda s: 0.0,
}


class ConfigError(CharlabError):
    pass


def load_schema() -> dict:
    text = resources.files("charlab").joinpath("schema/run_config.schema.json").read_text()
    return json.loads(text)


def validate_config(config: dict) -> None:
    try:
        jsonschema.validate(config, load_schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{path}: {exc.message}") from None
    dom = config.get("domain")
    if dom is not None and not dom["x_min"] < dom["x_max"]:
        raise ConfigError("domain: x_min must be < x_max")


def _require(config, key):
    if key not in config:
        raise ConfigError(f"command '{config['command']}' needs '{key}'")
    return config[key]


# -- builders ---------------------------------------------------------------


def _build_f(spec):
    kind = spec["type"]
    if kind == "constant":
        c = float(spec["value"])
        return lambda y: np.full(np.shape(y), c)
    if kind == "cosh2":
        s = float(spec["scale"])
        return lambda y: s * np.cosh(y) ** 2
    amp = float(spec["amplitude"])
    return lambda y: 1.0 / (amp * np.cos(y))


def _build_profile(spec):
    kind = spec["type"]
    if kind == "sine":
        return sine_profile(spec.get("mean", 1.0), spec.get("amplitude", 0.1), spec.get("wavenumber", 1.0))
    if kind == "constant":
        return constant_profile(spec["value"])
    return profile_from_f(
        _build_f(spec["f"]), spec.get("y0", 0.0), spec.get("H0", 1.0), tuple(spec["y_domain"])
    )


def _build_wave(config):
    spec = _require(config, "wave")
    return make_simple_wave(spec.get("a", 1), spec.get("alpha", 0.0), _build_profile(spec["profile"]))


def _build_initial(spec):
    if spec["type"] == "constant":
        h, u = float(spec["h"]), float(spec["u"])
        return (lambda x: np.full(np.shape(x), h), lambda x: np.full(np.shape(x), u))
    hb = float(spec.get("h_background", 1.0))
    amp = float(spec.get("amplitude", 0.2))
    x0 = float(spec.get("center", 0.0))
    width = float(spec.get("width", 1.0))
    velocity = spec.get("velocity", "still")

    def h0(x):
        return hb + amp * np.exp(-(((np.asarray(x) - x0) / width) ** 2))

    if velocity == "still":
        return h0, lambda x: np.zeros(np.shape(x))
    sign = 1.0 if velocity == "simple-wave+" else -1.0
    # keep the opposite-family invariant uniform
    return h0, lambda x: sign * 2.0 * (np.sqrt(h0(x)) - math.sqrt(hb))


def _x_grid(dom, nx=None):
    return np.linspace(dom["x_min"], dom["x_max"], nx or dom["nx"])


def _t_grid(dom, nt=None):
    return np.linspace(0.0, dom["t_end"], nt or dom.get("nt", 11))


def _moc_dt(initial, dom, nx):
    x = _x_grid(dom, nx)
    h, u = initial[0](x), initial[1](x)
    speed = float(np.max(np.abs(u) + np.sqrt(h)))
    dx = (dom["x_max"] - dom["x_min"]) / (nx - 1)
    return dom.get("dt") or dom.get("cfl", 0.8) * dx / speed


def _simulate(config, nx=None) -> tuple[SolutionField, dict]:
    dom = _require(config, "domain")
    initial = _build_initial(_require(config, "initial"))
    nx = nx or dom["nx"]
    solver = config.get("solver", "moc")
    info = {"solver": solver, "nx": nx}
    if solver == "moc":
        dt = _moc_dt(initial, dom, nx)
        field = moc_solve(initial, (dom["x_min"], dom["x_max"]), dom["t_end"], nx, dt)
        info["dt"] = float(field.dt)
    else:
        diag = FVDiagnostics()
        field = fv_solve(
            initial, (dom["x_min"], dom["x_max"]), dom["t_end"], nx, dom.get("cfl", 0.9),
            nt_out=dom.get("nt", 11), diagnostics=diag,
        )
        dm, dq = diag.max_step_change()
        info.update(steps=len(diag.times) - 1, max_mass_step_change=dm, max_momentum_step_change=dq)
    return field, info


def _field_source(config):
    if "wave" in config and "initial" not in config:
        dom = _require(config, "domain")
        return sample_field(_build_wave(config), _x_grid(dom), _t_grid(dom)), {"source": "exact"}
    field, info = _simulate(config)
    info["source"] = "simulate"
    return field, info


def _variation(field):
    return {
        "h_range": float(np.ptp(field.h_values)),
        "u_range": float(np.ptp(field.u_values)),
    }


# -- commands ---------------------------------------------------------------


def _cmd_simulate(config, out, tol, outputs):
    field, info = _simulate(config)
    io.write_field_csv(out / outputs.get("field", "field.csv"), field)
    report = {"command": "simulate", **info, **_variation(field), "failures": []}
    if "trace" in config:
        curves = _trace_curves(config, field)
        drift = max(c.drift for c in curves)
        report["invariant_drift"] = drift
        if drift > tol["drift"]:
            report["failures"].append(f"invariant drift {drift:.3g} > {tol['drift']:.3g}")
    return report


def _trace_curves(config, field):
    spec = config["trace"]
    t0 = spec.get("t0", float(field.t_grid[0]))
    t1 = spec.get("t1", float(field.t_grid[-1]))
    curves = []
    for fam in spec.get("families", [1]):
        curves.extend(trace_many(field, fam, spec["seeds"], t0, t1, spec["dt"]))
    return curves


def _cmd_trace(config, out, tol, outputs):
    _require(config, "trace")
    field, info = _field_source(config)
    curves = _trace_curves(config, field)
    io.atomic_write_text(out / outputs.get("traces", "traces.csv"), io.traces_to_csv(curves))
    drift = {}
    for c in curves:
        key = f"{c.family:+d}"
        drift[key] = max(drift.get(key, 0.0), c.drift)
    report = {
        "command": "trace",
        **info,
        "drift": drift,
        "exited": [c.exited for c in curves],
        "failures": [],
    }
    for key, d in drift.items():
        if d > tol["drift"]:
            report["failures"].append(f"family {key} drift {d:.3g} > {tol['drift']:.3g}")
    return report


def _cmd_exact(config, out, tol, outputs):
    wave = _build_wave(config)
    dom = _require(config, "domain")
    field = sample_field(wave, _x_grid(dom), _t_grid(dom))
    io.write_field_csv(out / outputs.get("field", "field.csv"), field)
    dev = float(np.max(np.abs(field.u_values - 2 * wave.a * np.sqrt(field.h_values) - wave.alpha)))
    report = {"command": "exact", "invariant_deviation": dev, **_variation(field), "failures": []}
    if dev > tol["invariant"]:
        report["failures"].append(f"invariant deviation {dev:.3g} > {tol['invariant']:.3g}")
    return report


def _cmd_breaking(config, out, tol, outputs):
    rep = _build_wave(config).breaking
    return {"command": "breaking", "t_break": rep.t_break, "argmin_y": rep.argmin_y, "failures": []}


def _interior_points(field, stride):
    i = np.arange(1, field.x_grid.size - 1, stride)
    j = np.arange(1, field.t_grid.size - 1, stride)
    X, T = np.meshgrid(field.x_grid[i], field.t_grid[j], indexing="ij")
    return np.column_stack([X.ravel(), T.ravel()])


def _verify_residuals(config, wave, field, points):
    """Return ``{check: [(name, x, t, values), ...]}`` and eigen verdicts."""
    branch = config.get("generator", {}).get("branch", "v1" if wave.a == 1 else "v2")
    if branch == "det-neq-0":
        fam = PsiFamily(wave.a, nonclassical_f(wave))
        gen = restricted_generator(fam)
        default_checks = ["invariant-surface", "gradient-relation", "reduced-determining", "pde"]
        default_xi = "u"
    else:
        gen = v1() if branch == "v1" else v2()
        fam = None
        default_checks = ["invariant-surface", "determining-det0", "eigenvalue-coefficient", "pde"]
        default_xi = "u+sqrt(h)" if branch == "v1" else "u-sqrt(h)"
    checks = config.get("checks", default_checks)
    x, t = points[:, 0], points[:, 1]
    h, u = field.interpolate(x, t)
    results, verdicts = {}, {}
    for check in checks:
        if check == "invariant-surface":
            rh, ru = invariant_surface_residual(gen, field, points)
            results[check] = [(f"{check}:{gen.name}:R_h", x, t, rh), (f"{check}:{gen.name}:R_u", x, t, ru)]
        elif check == "pde":
            r1, r2 = pde_residual(field, points)
            results[check] = [(f"{check}:mass", x, t, r1), (f"{check}:momentum", x, t, r2)]
        elif check == "determining-det0":
            if fam is not None:
                raise ConfigError("determining-det0 applies to the v1/v2 branches")
            k_sign = -1 if branch == "v1" else 1
            pts4 = np.column_stack([x, t, h, u])
            r1, r2 = det0_determining_residual(lambda *a: np.zeros(np.shape(a[0])), k_sign, pts4)
            results[check] = [(f"{check}:R1", x, t, r1), (f"{check}:R2", x, t, r2)]
        elif check == "eigenvalue-coefficient":
            xi_name = config.get("xi", default_xi)
            rep = eigenvalue_coefficient_check(sw_matrix(), XI_CANDIDATES[xi_name], list(zip(h, u)))
            results[check] = [(f"{check}:det(M-xi E):xi={xi_name}", x, t, rep.dets)]
            verdicts[check] = rep
        elif check in ("gradient-relation", "reduced-determining"):
            if fam is None:
                raise ConfigError(f"{check} applies to the det-neq-0 branch")
            if check == "gradient-relation":
                ga, gb = gradient_relations_residual(gen, field, points)
                results[check] = [(f"{check}:u_x+phi/h", x, t, ga), (f"{check}:h_x+psi", x, t, gb)]
            else:
                r = reduced_determining_residual(fam, np.column_stack([t, h, u]))
                results[check] = [(f"{check}", x, t, r)]
    return results, verdicts


def _cmd_verify(config, out, tol, outputs):
    wave = _build_wave(config)
    dom = _require(config, "domain")
    stride = config.get("points_stride", max(1, (dom["nx"] - 2) // 40))
    field = sample_field(wave, _x_grid(dom), _t_grid(dom))
    points = _interior_points(field, stride)
    results, verdicts = _verify_residuals(config, wave, field, points)
    entries = [e for check in results for e in results[check]]
    io.atomic_write_text(out / outputs.get("residuals", "residuals.csv"), io.residuals_to_csv(entries))

    maxima = {c: float(max(np.max(np.abs(e[3])) for e in results[c])) for c in results}
    report = {"command": "verify", "max_residual": maxima, "failures": []}
    for check, value in maxima.items():
        if check == "eigenvalue-coefficient":
            rep = verdicts[check]
            report["eigenvalue_coefficient"] = {
                "xi": config.get("xi"), "verdict": rep.verdict, "threshold": rep.threshold,
            }
            if not rep.verdict:
                report["failures"].append(
                    f"eigenvalue-coefficient: max |det(M - xi E)| = {value:.3g} > {rep.threshold:.3g}"
                )
        elif value > tol["residual"]:
            report["failures"].append(f"{check}: max residual {value:.3g} > {tol['residual']:.3g}")

    if "levels" in config:
        levels = sorted(config["levels"])
        nt0 = dom.get("nt", 11)
        coarse_x = _x_grid(dom, levels[0])
        coarse_t = _t_grid(dom, nt0)
        # probe points: interior nodes of the coarsest level, nested in finer ones
        probe = _interior_points(SolutionField(coarse_x, coarse_t, np.ones((coarse_x.size, nt0)),
                                               np.ones((coarse_x.size, nt0))), max(1, stride // 4))
        # only finite-difference residuals have a discretization order
        table = {c: [] for c in results if c in FD_CHECKS}
        for nx in levels:
            ratio = (nx - 1) // (levels[0] - 1)
            f_level = sample_field(wave, _x_grid(dom, nx), _t_grid(dom, (nt0 - 1) * ratio + 1))
            res, _ = _verify_residuals(config, wave, f_level, probe)
            for c in table:
                table[c].append(float(max(np.max(np.abs(e[3])) for e in res[c])))
        orders = {}
        for c, vals in table.items():
            if vals[-1] == 0.0 or vals[0] == 0.0:
                orders[c] = None
                continue
            slope = np.polyfit(np.log(np.array(levels) - 1.0), np.log(vals), 1)[0]
            orders[c] = float(-slope)
            if -slope < tol["min_order"]:
                report["failures"].append(f"{c}: observed order {-slope:.3f} < {tol['min_order']:.3g}")
        report["levels"] = levels
        report["level_max_residual"] = table
        report["observed_order"] = orders
    return report


def _compare_level(config, nx):
    dom = config["domain"]
    initial = _build_initial(config["initial"])
    domain = (dom["x_min"], dom["x_max"])
    moc = moc_solve(initial, domain, dom["t_end"], nx, _moc_dt(initial, dom, nx))
    diag = FVDiagnostics()
    fv = fv_solve(initial, domain, dom["t_end"], nx, dom.get("cfl", 0.9), nt_out=2, diagnostics=diag)
    dx = (domain[1] - domain[0]) / (nx - 1)
    diff = float(np.sum(np.abs(moc.h_values[:, -1] - fv.h_values[:, -1])) * dx)
    dm, dq = diag.max_step_change()
    return {"nx": nx, "dx": dx, "l1_difference": diff, "max_mass_step_change": dm, "max_momentum_step_change": dq}


def _cmd_compare(config, out, tol, outputs):
    _require(config, "initial")
    _require(config, "domain")
    levels = sorted(_require(config, "levels"))
    workers = max(1, int(os.environ.get("CHARLAB_THREADS", "1") or 1))
    with ThreadPoolExecutor(max_workers=min(workers, len(levels))) as pool:
        rows = list(pool.map(lambda nx: _compare_level(config, nx), levels))
    ratios = [None] + [rows[k - 1]["l1_difference"] / rows[k]["l1_difference"] for k in range(1, len(rows))]
    for row, ratio in zip(rows, ratios):
        row["ratio"] = ratio
    table = io.rows_to_csv(
        ("nx", "dx", "l1_difference", "ratio"),
        [(r["nx"], r["dx"], r["l1_difference"], "" if r["ratio"] is None else r["ratio"]) for r in rows],
    )
    io.atomic_write_text(out / outputs.get("table", "compare.csv"), table)
    report = {"command": "compare", "levels": rows, "failures": []}
    for r in rows[1:]:
        if r["ratio"] < tol["min_ratio"]:
            report["failures"].append(f"nx={r['nx']}: L1 reduction {r['ratio']:.3f} < {tol['min_ratio']:.3g}")
    return report


_DISPATCH = {
    "simulate": _cmd_simulate,
    "trace": _cmd_trace,
    "verify": _cmd_verify,
    "exact": _cmd_exact,
    "breaking": _cmd_breaking,
    "compare": _cmd_compare,
}


def _error_record(out: Path, kind: str, message: str, code: int) -> int:
    record = {"status": "error", "kind": kind, "exit_code": code, "message": message}
    try:
        io.write_json(out / "error.json", record)
    except OSError:
        pass
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


def run(config: dict, out_dir=".", tolerance_scale: float = 1.0) -> int:
    """Validate ``config``, execute it, write artifacts into ``out_dir``; return the exit status."""
    out = Path(out_dir)
    try:
        validate_config(config)
        if not tolerance_scale > 0:
            raise ConfigError("tolerance scale must be positive")
    except ConfigError as exc:
        return _error_record(out, "schema", str(exc), EXIT_SCHEMA)

    tol = dict(DEFAULT_TOLERANCES)
    tol.update(config.get("tolerances", {}))
    for key in ("residual", "drift", "invariant"):
        tol[key] *= tolerance_scale
    outputs = config.get("outputs", {})
    try:
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            report = _DISPATCH[config["command"]](config, out, tol, outputs)
    except ConfigError as exc:
        return _error_record(out, "schema", str(exc), EXIT_SCHEMA)
    except (CharlabError, FloatingPointError, ValueError, ArithmeticError) as exc:
        return _error_record(out, "numerical", f"{type(exc).__name__}: {exc}", EXIT_NUMERICAL)

    report["tolerances"] = tol
    report["status"] = "fail" if report["failures"] else "ok"
    io.write_json(out / outputs.get("report", "report.json"), report)
    if report["failures"]:
        return _error_record(out, "tolerance", "; ".join(report["failures"]), EXIT_TOLERANCE)
    stale = out / "error.json"
    if stale.exists():
        stale.unlink()
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="charlab", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, type=Path)
    parser.add_argument("--out", type=Path, default=Path("."))
    parser.add_argument("--tolerance-scale", type=float, default=1.0)
    args = parser.parse_args(argv)

    try:
        config = json.loads(args.config.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        return _error_record(args.out, "schema", f"cannot read config: {exc}", EXIT_SCHEMA)
    if not isinstance(config, dict):
        return _error_record(args.out, "schema", "config must be a JSON object", EXIT_SCHEMA)
    config.setdefault("command", args.command)
    if config["command"] != args.command:
        return _error_record(
            args.out, "schema",
            f"config command '{config['command']}' does not match '{args.command}'", EXIT_SCHEMA,
        )
    return run(config, args.out, args.tolerance_scale)


if __name__ == "__main__":
    sys.exit(main())
