"""Scenario runner: the package's external surface.

Subcommands: eval | decompose | classify | witness | lemma-check, each taking
--config PATH --out DIR [--seed INT] [--tol FLOAT].  Exit codes: 0 success,
2 config error, 3 numerical-convergence failure, 4 verdict inconclusive.

Reports are deterministic: JSON bytes depend only on the config file and the
package version (timing goes to stderr).  The eval path emits a CSV alongside
a rendered figure; every command writes a versioned JSON report.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .amplitudes import HermiteGaussianSum, alpha
from .classify import (
    ClassifyError,
    ClassifyGrid,
    check_membership,
    extract_coefficients,
)
from .contact import ContactError, ContactPoint, TangentSubspace, unit_vector
from .contact import SplittingData, transversal_coordinate_index
from .decompose import decompose_forward, reduce_ybar_dependence
from .evaluate import (
    Fibred,
    Intersecting,
    Type1,
    Type2,
    eval_fibred,
    eval_intersecting_direct,
    eval_intersecting_reduced,
    eval_type1,
    eval_type2,
)
from .blowup import Chart, ChartPoint
from .phases import conormal_tangent, random_model_pair
from .poly import Poly

SCHEMA_VERSION = 1


class ConfigError(Exception):
    pass


class ConvergenceError(Exception):
    pass


class InconclusiveError(Exception):
    pass


# ----------------------------------------------------------------------
# config handling
def load_config(path):
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    raw = p.read_bytes()
    try:
        cfg = yaml.safe_load(raw)
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a YAML mapping")
    if cfg.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {cfg.get('schema_version')!r}; "
            f"expected {SCHEMA_VERSION}"
        )
    return cfg, hashlib.sha256(raw).hexdigest()


def _require(cfg, key, types=None):
    if key not in cfg:
        raise ConfigError(f"missing required config key {key!r}")
    v = cfg[key]
    if types is not None and not isinstance(v, types):
        raise ConfigError(f"config key {key!r} has wrong type {type(v).__name__}")
    return v


def _as_complex(v, where):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ConfigError(f"{where}: expected number or [re, im], got {v!r}")


def _poly_from_spec(spec, variables, where):
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}: polynomial spec must be a mapping")
    coeffs = {}
    for key, val in spec.items():
        try:
            expo = tuple(int(e) for e in str(key).split(","))
        except ValueError as e:
            raise ConfigError(f"{where}: bad exponent key {key!r}") from e
        if len(expo) != len(variables) or any(e < 0 for e in expo):
            raise ConfigError(
                f"{where}: exponent key {key!r} must have "
                f"{len(variables)} nonnegative entries"
            )
        coeffs[expo] = _as_complex(val, f"{where}[{key}]")
    return Poly(variables, coeffs)


def _amp_from_spec(spec, where):
    if not isinstance(spec, dict) or "terms" not in spec:
        raise ConfigError(f"{where}: expected a mapping with a 'terms' list")
    terms = []
    for i, t in enumerate(spec["terms"]):
        if not isinstance(t, dict):
            raise ConfigError(f"{where}.terms[{i}]: expected a mapping")
        try:
            terms.append(
                (
                    _as_complex(t.get("coeff", 1.0), f"{where}.terms[{i}].coeff"),
                    int(t.get("hermite", 0)),
                    float(t.get("center", 0.0)),
                    float(t.get("width", 1.0)),
                    float(t.get("freq", 0.0)),
                )
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{where}.terms[{i}]: {e}") from e
    try:
        return HermiteGaussianSum(terms)
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e


def _grid_axis(spec, where):
    if not isinstance(spec, dict):
        raise ConfigError(f"{where}: grid axis must be a mapping")
    try:
        start, stop = float(spec["start"]), float(spec["stop"])
        count = int(spec.get("count", 9))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"{where}: need numeric start/stop/count ({e})") from e
    spacing = spec.get("spacing", "linear")
    if spacing == "geometric":
        if start <= 0 or stop <= 0:
            raise ConfigError(f"{where}: geometric spacing needs positive bounds")
        return np.geomspace(start, stop, count)
    if spacing == "linear":
        return np.linspace(start, stop, count)
    raise ConfigError(f"{where}: unknown spacing {spacing!r}")


def _orders(cfg):
    o = _require(cfg, "orders", dict)
    if "m" not in o:
        raise ConfigError("orders.m is required")
    m = float(o["m"])
    r = o.get("r")
    if r is not None:
        r = float(r)
        if abs(r - (m + 0.5)) > 1e-12:
            raise ConfigError(
                "orders.r must equal orders.m + 1/2 when both are given "
                "(class-comparison setting)"
            )
    return m, r


def build_instance(cfg):
    cls = _require(cfg, "class", str)
    m, _ = _orders(cfg)
    n = int(cfg.get("n", 2))
    k = int(cfg.get("k", 1))
    if cls == "type1":
        phase = _poly_from_spec(
            _require(cfg, "phase", dict), tuple(f"y{i+1}" for i in range(n - 1)),
            "phase",
        )
        amp = _poly_from_spec(
            _require(cfg, "amplitude", dict),
            ("x",) + tuple(f"y{i+1}" for i in range(n - 1)),
            "amplitude",
        )
        return Type1(m=m, n=n, phase=phase, amp=amp)
    if cls == "type2":
        profile = _amp_from_spec(_require(cfg, "profile", dict), "profile")
        smooth = None
        if "smooth" in cfg:
            smooth = _poly_from_spec(
                cfg["smooth"],
                ("x",) + tuple(f"y{i+2}" for i in range(n - 2)),
                "smooth",
            )
        return Type2(m=m, n=n, k=k, profile=profile, smooth=smooth)
    if cls == "intersecting":
        if n != 2:
            raise ConfigError("intersecting scenarios are implemented for n = 2")
        amp = _amp_from_spec(_require(cfg, "amplitude", dict), "amplitude")
        passive = cfg.get("passive", {"0,0,0": 1.0})
        p = _poly_from_spec(passive, ("x", "y", "ybar"), "passive")
        return Intersecting(m=m, terms=((p, amp),))
    if cls == "fibred":
        if (n, k) != (2, 1):
            raise ConfigError("fibred scenarios are implemented for n = 2, k = 1")
        _, r = _orders(cfg)
        if r is None:
            r = m + 0.5
        chart = Chart("ff_projective", n=2, k=1, j=1)
        names = tuple(chart.coord_names())
        phit = _poly_from_spec(cfg.get("phase", {"0,0": 0.0}), names, "phase")
        amp = _poly_from_spec(
            _require(cfg, "amplitude", dict), names, "amplitude"
        )
        return Fibred(m=m, r=r, n=2, k=1, phitilde=phit, amp=amp)
    raise ConfigError(f"unknown class {cls!r}")


MULTIPLIERS = {
    "1": lambda x, y: 1.0,
    "y": lambda x, y: y,
    "x": lambda x, y: x,
    "x^2": lambda x, y: x * x,
    "x*y": lambda x, y: x * y,
    "x/y": lambda x, y: x / y,
}


def _multiplier(name):
    if name not in MULTIPLIERS:
        raise ConfigError(
            f"unknown multiplier {name!r}; choose from {sorted(MULTIPLIERS)}"
        )
    return MULTIPLIERS[name]


# ----------------------------------------------------------------------
# serialization helpers
def _c2l(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _write_json(path, payload):
    data = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    Path(path).write_text(data)


def _report_skeleton(cfg, config_hash, command):
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "config_hash": config_hash,
        "scenario": cfg,
    }


def _save_figure(fig, path):
    fig.savefig(path, dpi=120)
    import matplotlib.pyplot as plt

    plt.close(fig)


def _mpl():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


# ----------------------------------------------------------------------
def _eval_point(inst, x, y, method):
    if isinstance(inst, Type1):
        return eval_type1(inst, x, [y])
    if isinstance(inst, Type2):
        return eval_type2(inst, x, [y])
    if isinstance(inst, Intersecting):
        if method == "direct" or (method == "auto" and not inst.ybar_free()):
            return eval_intersecting_direct(inst, x, y)
        if not inst.ybar_free():
            raise ConfigError("method 'reduced' requires a ybar-free amplitude")
        return eval_intersecting_reduced(inst, x, y)
    if isinstance(inst, Fibred):
        chart = Chart("ff_projective", n=2, k=1, j=1)
        if y <= 0 or x <= 0:
            raise ConfigError("fibred evaluation needs x > 0 and y > 0")
        return eval_fibred(inst, ChartPoint(chart, [y, x / y]))
    raise ConfigError("unsupported instance type")


def cmd_eval(cfg, config_hash, out, tol):
    inst = build_instance(cfg)
    grid = _require(cfg, "grid", dict)
    xs = _grid_axis(_require(grid, "x", dict), "grid.x")
    ys = _grid_axis(_require(grid, "y", dict), "grid.y")
    method = cfg.get("method", "auto")
    if method not in ("auto", "direct", "reduced"):
        raise ConfigError(f"unknown method {method!r}")
    rows = []
    worst = 0.0
    for x in xs:
        for y in ys:
            rep = _eval_point(inst, float(x), float(y), method)
            v = complex(rep.value)
            rows.append(
                [float(x), float(y), v.real, v.imag, abs(v), rep.est_error,
                 rep.method]
            )
            if np.isfinite(rep.est_error):
                worst = max(worst, rep.est_error / max(abs(v), 1.0))
    if worst > max(tol, 1e-12) * 100:
        raise ConvergenceError(
            f"quadrature error estimate {worst:.3e} exceeds tolerance budget"
        )
    csv_path = out / "eval.csv"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y1", "re_u", "im_u", "abs_u", "est_error", "method"])
        w.writerows(rows)
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(6, 4))
    arr = np.array([r[:5] for r in rows], dtype=float)
    for y in ys:
        sel = np.isclose(arr[:, 1], y)
        ax.plot(arr[sel, 0], np.maximum(arr[sel, 4], 1e-300), label=f"y={y:.3g}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("x")
    ax.set_ylabel("|u|")
    if len(ys) <= 8:
        ax.legend(fontsize=7)
    _save_figure(fig, out / "eval.png")
    report = _report_skeleton(cfg, config_hash, "eval")
    report["outputs"] = {"csv": "eval.csv", "figure": "eval.png"}
    report["summary"] = {
        "n_points": len(rows),
        "max_relative_est_error": worst,
    }
    _write_json(out / "report.json", report)
    return 0


def cmd_decompose(cfg, config_hash, out, tol):
    inst = build_instance(cfg)
    if not isinstance(inst, Intersecting):
        raise ConfigError("decompose requires class: intersecting")
    tail_bound = None
    if not inst.ybar_free():
        inst, tail, tail_bound = reduce_ybar_dependence(
            inst, int(cfg.get("reduce_order", 4))
        )
    dec = decompose_forward(inst)
    grid = cfg.get("grid", {})
    xs = _grid_axis(
        grid.get("x", {"start": 1e-3, "stop": 0.3, "count": 9,
                       "spacing": "geometric"}),
        "grid.x",
    )
    Zs = np.linspace(-10.0, 10.0, 81)
    residual = 0.0
    for x in xs:
        for Z in Zs:
            y = float(x) * float(Z)
            rec = complex(dec.reconstruct(float(x), y))
            ref = eval_intersecting_reduced(inst, float(x), y).value
            residual = max(residual, abs(rec - ref) / max(abs(ref), x ** (inst.m + 0.5)))
    x_mid = float(np.median(xs))
    decay = dec.g_decay_report(x_mid)
    g_samples = [
        {"Z": float(Z), "g": _c2l(dec.g(x_mid, float(Z)))} for Z in Zs
    ]
    report = _report_skeleton(cfg, config_hash, "decompose")
    report["f_coefficients"] = {
        ",".join(map(str, e)): _c2l(c) for e, c in sorted(dec.f.coeffs.items())
    }
    report["g_samples"] = {"x": x_mid, "values": g_samples}
    report["residual"] = residual
    report["decay_report"] = [
        {"order": r.order, "sup_bound": r.sup_bound,
         "growth_exponent": float(r.growth_exponent), "passes": r.passes}
        for r in decay
    ]
    report["b_cancellation_residuals"] = dec.diagnostics[
        "b_cancellation_residuals"
    ]
    if tail_bound is not None:
        report["ybar_tail_bound_coeff"] = tail_bound
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(6, 4))
    gv = np.array([complex(*s["g"]) for s in g_samples])
    ax.plot(Zs, gv.real, label="Re g")
    ax.plot(Zs, gv.imag, label="Im g")
    ax.plot(Zs, alpha(Zs) * abs(complex(dec.f(x_mid, 0.0))), "--",
            label="alpha * |f(x,0)|")
    ax.set_xlabel("Z")
    ax.legend(fontsize=8)
    _save_figure(fig, out / "decompose.png")
    report["outputs"] = {"figure": "decompose.png"}
    _write_json(out / "decompose.json", report)
    if residual > tol or not all(r.passes for r in decay):
        _write_json(out / "decompose.json", report)
        raise ConvergenceError(
            f"decomposition failed checks: residual {residual:.3e}, "
            f"decay passes {[r.passes for r in decay]}"
        )
    return 0


def _interior_callable(cfg):
    inst = build_instance(cfg)
    if isinstance(inst, Intersecting):
        if not inst.ybar_free():
            inst, _, _ = reduce_ybar_dependence(inst, int(cfg.get("reduce_order", 4)))
        return (lambda x, y: eval_intersecting_reduced(inst, x, y).value), inst.m
    if isinstance(inst, Type2):
        return (lambda x, y: eval_type2(inst, x, [y]).value), inst.m
    raise ConfigError("classification supports intersecting and type2 scenarios")


def _classification(cfg, tol, multiplier_name):
    u, m = _interior_callable(cfg)
    h = _multiplier(multiplier_name)
    fit = cfg.get("fit", {})
    order = int(fit.get("order", 4))
    grid = ClassifyGrid(
        sigma0=float(fit.get("sigma0", 0.4)),
        rho0=float(fit.get("rho0", 0.2)),
        levels=int(fit.get("levels", 8)),
    )
    table = extract_coefficients(
        lambda x, y: h(x, y) * u(x, y), m, order=order, grid=grid
    )
    res = check_membership(table, tol=max(tol, 1e-10))
    verdict = {
        "member": "intersecting",
        "not_member": "not-intersecting",
        "inconclusive": "inconclusive",
    }[res.status]
    payload = {
        "multiplier": multiplier_name,
        "fit_order": order,
        "table": [[_c2l(c) for c in row] for row in table.c],
        "uncertainties": [[float(u_) for u_ in row] for row in table.sigma_unc],
        "verdict": verdict,
        "violations": [
            {"j": j, "l": l, "value": _c2l(v), "uncertainty": float(u_)}
            for j, l, v, u_ in res.violations
        ],
        "inconclusive_entries": [
            {"j": j, "l": l, "value": _c2l(v), "uncertainty": float(u_)}
            for j, l, v, u_ in res.inconclusive
        ],
    }
    return payload, table


def _table_figure(tables, names, path):
    plt = _mpl()
    fig, axes = plt.subplots(1, len(tables), figsize=(4 * len(tables), 3.2),
                             squeeze=False)
    for ax, t, name in zip(axes[0], tables, names):
        mags = np.log10(np.abs(t.c) + 1e-16)
        im = ax.imshow(mags, origin="upper", cmap="viridis")
        ax.set_xlabel("l (rho power)")
        ax.set_ylabel("j (sigma power)")
        ax.set_title(f"log10 |c_jl|, h = {name}", fontsize=9)
        fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    _save_figure(fig, path)


def cmd_classify(cfg, config_hash, out, tol):
    payload, table = _classification(cfg, tol, cfg.get("multiplier", "1"))
    report = _report_skeleton(cfg, config_hash, "classify")
    report.update(payload)
    _table_figure([table], [payload["multiplier"]], out / "classify.png")
    report["outputs"] = {"figure": "classify.png"}
    _write_json(out / "classify.json", report)
    if payload["verdict"] == "inconclusive":
        raise InconclusiveError("membership test inconclusive at this precision")
    return 0


def cmd_witness(cfg, config_hash, out, tol):
    before_name = cfg.get("baseline_multiplier", "1")
    after_name = cfg.get("multiplier", "x/y")
    before, t_before = _classification(cfg, tol, before_name)
    after, t_after = _classification(cfg, tol, after_name)
    proper = (
        before["verdict"] == "intersecting"
        and after["verdict"] == "not-intersecting"
    )
    report = _report_skeleton(cfg, config_hash, "witness")
    report["before"] = before
    report["after"] = after
    report["proper"] = proper
    _table_figure(
        [t_before, t_after], [before_name, after_name], out / "witness.png"
    )
    report["outputs"] = {"figure": "witness.png"}
    _write_json(out / "witness.json", report)
    if "inconclusive" in (before["verdict"], after["verdict"]):
        raise InconclusiveError("one of the paired classifications is inconclusive")
    return 0


def cmd_lemma_check(cfg, config_hash, out, tol, seed):
    pairs = cfg.get("pairs", {"mode": "zero_conormal"})
    mode = pairs.get("mode", "zero_conormal")
    results = []
    errors = []
    if mode == "zero_conormal":
        q = ContactPoint(y=[0.0], tau=0.0, mu=[0.0])
        V1 = TangentSubspace(q, [unit_vector(1, "dy", 0)])
        V2 = conormal_tangent(q, 1)
        j = transversal_coordinate_index(V1, V2, SplittingData(k=1, n=2), tol=tol)
        results.append({"n": 2, "k": 1, "index": j})
    elif mode == "random":
        rng = np.random.default_rng(seed)
        count = int(pairs.get("count", 20))
        dims = pairs.get("dims", [[2, 1], [3, 1], [3, 2], [4, 2]])
        for i in range(count):
            n, k = dims[i % len(dims)]
            V1, V2, split, _ = random_model_pair(rng, int(n), int(k))
            try:
                j = transversal_coordinate_index(V1, V2, split, tol=tol)
                results.append({"n": int(n), "k": int(k), "index": j})
            except ContactError as e:
                errors.append({"n": int(n), "k": int(k), "error": str(e)})
    elif mode == "identical":
        q = ContactPoint(y=[0.0], tau=0.0, mu=[0.0])
        V1 = TangentSubspace(q, [unit_vector(1, "dy", 0)])
        try:
            transversal_coordinate_index(V1, V1, SplittingData(k=1, n=2), tol=tol)
        except ContactError as e:
            errors.append({"n": 2, "k": 1, "error": str(e)})
    else:
        raise ConfigError(f"unknown pairs.mode {mode!r}")
    report = _report_skeleton(cfg, config_hash, "lemma-check")
    report["results"] = results
    report["errors"] = errors
    # 'identical' deliberately feeds V1 = V2 and succeeds iff that is rejected
    ok = bool(errors) if mode == "identical" else (not errors and bool(results))
    report["all_ok"] = ok
    _write_json(out / "lemma_check.json", report)
    if not ok:
        raise ConvergenceError("lemma check failed; see lemma_check.json")
    return 0


# ----------------------------------------------------------------------
def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="legbench", description="Legendre-distribution scenario runner"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("eval", "decompose", "classify", "witness", "lemma-check"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=".")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        cfg, config_hash = load_config(args.config)
        tol = args.tol if args.tol is not None else float(cfg.get("tol", 1e-6))
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "eval":
            rc = cmd_eval(cfg, config_hash, out, tol)
        elif args.command == "decompose":
            rc = cmd_decompose(cfg, config_hash, out, tol)
        elif args.command == "classify":
            rc = cmd_classify(cfg, config_hash, out, tol)
        elif args.command == "witness":
            rc = cmd_witness(cfg, config_hash, out, tol)
        else:
            seed = args.seed if args.seed else int(cfg.get("seed", 0))
            rc = cmd_lemma_check(cfg, config_hash, out, tol, seed)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (ConvergenceError, ClassifyError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3
    except InconclusiveError as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return 4
    print(f"elapsed {time.monotonic() - t0:.2f}s", file=sys.stderr)
    return rc


if __name__ == "__main__":
    sys.exit(main())
