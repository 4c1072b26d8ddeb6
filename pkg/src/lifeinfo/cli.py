"""Command-line front end: sweep a measure over a grid and write CSV or JSON.

Usage::

    lifeinfo run --config run.json [--measure M] [--grid G] [--tol T]
                 [--seed S] [--samples N] [--output PATH] [--format csv|json]
    lifeinfo list-models
    lifeinfo list-measures

The config is a JSON object::

    {
      "model": {"family": "linear", "params": {}},
      "measure": "past-mi",
      "grid": {"s": [0.01, 0.99, 30], "t": [0.01, 0.99, 30]},
      "quadrature": {"rel_tol": 1e-8},
      "output": {"path": "fig1.csv", "format": "csv"},
      "seed": 0
    }

``model`` may also be written compactly, e.g. ``"os(n=3,uniform)"`` or
``"copula(clayton,theta=1,marginal_x=exponential)"``.  A grid axis is
``[min, max, steps]``, ``{"min":, "max":, "steps":}`` or ``{"values": [...]}``;
the second axis may instead be the string ``"1-p"`` or ``"s"`` to tie it to
the first.  On the command line ``--grid "p=0.01:0.49:50,q=1-p"``.

Exit status is 0 on success, 1 on a usage or config error and 2 when any
grid point failed to converge.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import copulas as _cop
from .copula_mi import past_mi_copula, residual_mi_survival_copula
from .dynamic_entropy import joint_entropy, verify_decomposition
from .dynamic_mi import dynamic_mi, past_mi_bound, residual_mi, past_mi, residual_mi_bound
from .errors import LifeInfoError, NonConvergenceWarning, ZeroRegionProbability
from .lifetime_models import (CopulaModel, make_freund, make_from_copula, make_gumbel_type,
                              make_independent, make_linear_unit_square, make_lomax_tte,
                              make_reflected_triangle, make_truncated_tte, make_uniform_triangle,
                              marginal)
from .mc_oracle import mc_mutual_information
from .order_stats_mi import (OrderStatModel, os_mi_closed_form_result, os_mi_direct,
                             order_stat_model)
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .regions import ConditioningRegion

__all__ = ["main", "RunConfig", "ConfigError", "load_config", "run", "build_model",
           "MODELS", "MEASURES"]


class ConfigError(LifeInfoError, ValueError):
    """Malformed config, unknown model or unknown measure."""


# ---------------------------------------------------------------------------
# model catalog

def _marginal_from(spec):
    if spec is None:
        return marginal("exponential")
    if isinstance(spec, str):
        return marginal(spec)
    spec = dict(spec)
    return marginal(spec.pop("family"), **spec)


def _copula_from(name, params):
    name = (name or "clayton").lower()
    if name == "clayton":
        return _cop.ClaytonCopula(float(params.get("theta", 1.0)))
    if name == "independence":
        return _cop.IndependenceCopula()
    if name == "lomax":
        return _cop.lomax_copula(float(params.get("r", 1.0)))
    raise ConfigError(f"unknown copula {name!r}; choose clayton, independence or lomax")


def _copula_model(copula=None, marginal_x=None, marginal_y=None, **params):
    cop = _copula_from(copula, params)
    return make_from_copula(cop, _marginal_from(marginal_x or "uniform"),
                            _marginal_from(marginal_y or "uniform"))


def _os_model(n=3, component="uniform", **params):
    return order_stat_model(component, int(n), **params)


def _independent(marginal_x=None, marginal_y=None):
    return make_independent(_marginal_from(marginal_x), _marginal_from(marginal_y))


#: family -> (builder, parameter summary, positional parameter name)
MODELS = {
    "linear": (make_linear_unit_square, "f(x,y) = x + y on the unit square", None),
    "triangle": (make_uniform_triangle, "alpha, beta: uniform on alpha x + beta y <= 1", None),
    "reflected-triangle": (make_reflected_triangle,
                           "alpha, beta: F(x,y) = (alpha x + beta y - 1)^2 on the reflected triangle", None),
    "gumbel": (make_gumbel_type, "theta: survival exp(-x-y-theta x y)", None),
    "lomax-tte": (make_lomax_tte, "r, alpha, beta: survival (1 + alpha x + beta y)^-r", None),
    "truncated-tte": (make_truncated_tte,
                      "omega, alpha, beta: survival (alpha x/omega + beta y/omega - 1)^2", None),
    "freund": (make_freund, "a, b, a_prime, b_prime: failure rates before/after the other fails", None),
    "independent": (_independent, "marginal_x, marginal_y: independent components", None),
    "copula": (_copula_model,
               "copula (clayton|independence|lomax), theta or r, marginal_x, marginal_y", "copula"),
    "os": (_os_model, "n, component (uniform|exponential|weibull) [+ component params]: "
                      "(first, last) failure of n iid components", "component"),
}

_COMPACT = re.compile(r"^\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*$")


def _scalar(text):
    text = text.strip()
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse_model_spec(spec) -> tuple[str, dict]:
    """Normalize a model spec to ``(family, params)``."""
    if isinstance(spec, dict):
        if "family" not in spec:
            raise ConfigError("model needs a 'family' entry")
        family = str(spec["family"])
        params = dict(spec.get("params", {}))
        params.update({k: v for k, v in spec.items() if k not in ("family", "params")})
        return family, params
    if not isinstance(spec, str):
        raise ConfigError(f"cannot read model spec {spec!r}")
    m = _COMPACT.match(spec)
    if not m:
        raise ConfigError(f"cannot parse model spec {spec!r}")
    family, body = m.group(1), m.group(2)
    params = {}
    if body and body.strip():
        for item in body.split(","):
            if "=" in item:
                k, v = item.split("=", 1)
                params[k.strip()] = _scalar(v)
            else:
                pos = MODELS.get(family, (None, None, None))[2]
                if pos is None or pos in params:
                    raise ConfigError(f"unexpected positional argument {item.strip()!r} for {family}")
                params[pos] = item.strip()
    return family, params


def build_model(spec):
    """Instantiate a model (or order-statistics model) from a config spec."""
    family, params = parse_model_spec(spec)
    if family not in MODELS:
        raise ConfigError(f"unknown model {family!r}; run 'lifeinfo list-models'")
    try:
        return MODELS[family][0](**params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad parameters for {family}: {exc}") from exc


# ---------------------------------------------------------------------------
# measures

@dataclass
class Row:
    a: float
    b: float
    value: float
    error: float
    converged: bool
    null: bool = False


def _need_bivariate(model, measure):
    if isinstance(model, OrderStatModel):
        raise ConfigError(f"measure {measure} needs a bivariate model, not os(...)")


def _copula_of(model, measure):
    if isinstance(model, CopulaModel):
        return model.copula
    if getattr(model, "name", "") == "lomax-tte":
        return _cop.lomax_copula(model.params["r"])
    raise ConfigError(f"measure {measure} needs a copula(...) or lomax-tte model")


def _eval_st(measure, model, s, t, cfg, spec):
    region = cfg.region
    if measure == "past-mi":
        r = past_mi(model, s, t, spec)
    elif measure == "residual-mi":
        r = residual_mi(model, s, t, spec)
    elif measure == "mixed-entropy":
        r = joint_entropy(model, ConditioningRegion(region or "past_residual", s, t), spec)
    elif measure == "bounds":
        fn = past_mi_bound if (region or "residual") in ("past", "past_past") else residual_mi_bound
        rep = fn(model, s, t)
        return rep.bound_value, 0.0, True
    elif measure == "mc-validate":
        reg = ConditioningRegion(region or "residual", s, t)
        q = dynamic_mi(model, reg, spec)
        mc = mc_mutual_information(model, reg, cfg.samples, cfg.seed)
        ok = abs(q.value - mc.mean) <= 3 * (mc.std_error + q.numerical_error)
        return mc.mean, mc.std_error, bool(ok and q.converged)
    elif measure == "decomposition-check":
        res, err = verify_decomposition(model, s, t, spec)
        return res, err, True
    else:  # pragma: no cover
        raise ConfigError(measure)
    return r.value, r.numerical_error, r.converged


def _eval_pq(measure, model, p, q, cfg, spec):
    if measure == "os-mi":
        if not isinstance(model, OrderStatModel):
            raise ConfigError("measure os-mi needs an os(...) model")
        if cfg.route == "direct":
            r = os_mi_direct(model, float(model.quantile(p)), float(model.quantile(q)), spec)
        else:
            r = os_mi_closed_form_result(p, q, model.n, spec)
    elif measure == "copula-past-mi":
        r = past_mi_copula(_copula_of(model, measure), p, q, spec)
    elif measure == "copula-residual-mi":
        r = residual_mi_survival_copula(_copula_of(model, measure), p, q, spec)
    else:  # pragma: no cover
        raise ConfigError(measure)
    return r.value, r.numerical_error, r.converged


#: measure -> (grid axes, description)
MEASURES = {
    "past-mi": (("s", "t"), "MI of (X, Y) given X <= s, Y <= t"),
    "residual-mi": (("s", "t"), "MI of (X - s, Y - t) given X > s, Y > t"),
    "mixed-entropy": (("s", "t"), "joint entropy on a mixed event, 'region' selects "
                                  "past_residual (default) or residual_past"),
    "os-mi": (("p", "q"), "MI of (first, last) of n iid failures given X_1:n <= xi_p < xi_q < X_n:n "
                          "(closed form; 'route': 'direct' integrates instead)"),
    "copula-past-mi": (("p", "q"), "past MI at marginal quantiles (xi_p, xi_q) from the copula alone"),
    "copula-residual-mi": (("p", "q"), "residual MI at (xi_p, xi_q) from the survival copula"),
    "bounds": (("s", "t"), "monotonicity bound on past or residual MI ('region'); nan when none applies"),
    "mc-validate": (("s", "t"), "Monte-Carlo MI estimate with its standard error; converged means "
                                "it matches quadrature within 3 (std error + quadrature error)"),
    "decomposition-check": (("s", "t"), "residual of the four-event entropy decomposition"),
}


# ---------------------------------------------------------------------------
# config

@dataclass
class RunConfig:
    model: object
    measure: str
    grid: dict
    quadrature: QuadratureSpec = DEFAULT_SPEC
    output: str = "-"
    format: str = "csv"
    seed: int = 0
    samples: int = 100_000
    region: str | None = None
    route: str = "closed-form"
    notes: list = field(default_factory=list)


def _axis_values(name, spec):
    if isinstance(spec, dict):
        if "values" in spec:
            return np.asarray(spec["values"], dtype=float)
        try:
            spec = [spec["min"], spec["max"], spec["steps"]]
        except KeyError as exc:
            raise ConfigError(f"grid axis {name} needs min, max and steps") from exc
    if isinstance(spec, (list, tuple)) and len(spec) == 3:
        lo, hi, steps = float(spec[0]), float(spec[1]), int(spec[2])
        if steps < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
            raise ConfigError(f"bad grid axis {name}: {spec!r}")
        return np.linspace(lo, hi, steps)
    if isinstance(spec, (int, float)):
        return np.asarray([float(spec)])
    raise ConfigError(f"bad grid axis {name}: {spec!r}")


def parse_grid_flag(text: str) -> dict:
    """``"s=0.01:0.99:30,t=0.5"`` -> grid dict."""
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise ConfigError(f"bad --grid item {item!r}")
        k, v = (z.strip() for z in item.split("=", 1))
        if ":" in v:
            parts = v.split(":")
            if len(parts) != 3:
                raise ConfigError(f"bad --grid range {v!r}; use min:max:steps")
            out[k] = [float(parts[0]), float(parts[1]), int(parts[2])]
        else:
            try:
                out[k] = float(v)
            except ValueError:
                out[k] = v
    return out


def _quadrature(over) -> QuadratureSpec:
    if not over:
        return DEFAULT_SPEC
    known = {"rel_tol", "abs_tol", "max_subdivisions", "transform"}
    bad = set(over) - known
    if bad:
        raise ConfigError(f"unknown quadrature keys {sorted(bad)}")
    try:
        return replace(DEFAULT_SPEC, **over)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad quadrature settings: {exc}") from exc


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Read the JSON config and apply flag overrides (flags win)."""
    raw = {}
    if path:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
    out = raw.get("output", {})
    if isinstance(out, str):
        out = {"path": out}
    quad = dict(raw.get("quadrature", {}))
    if overrides.get("tol") is not None:
        quad["rel_tol"] = overrides["tol"]
    measure = overrides.get("measure") or raw.get("measure")
    model = overrides.get("model") or raw.get("model")
    grid = parse_grid_flag(overrides["grid"]) if overrides.get("grid") else raw.get("grid")
    if model is None:
        raise ConfigError("no model given")
    if measure is None:
        raise ConfigError("no measure given")
    if measure not in MEASURES:
        raise ConfigError(f"unknown measure {measure!r}; run 'lifeinfo list-measures'")
    if not grid:
        raise ConfigError("no grid given")
    fmt = overrides.get("format") or out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {fmt!r}")
    seed = overrides.get("seed") if overrides.get("seed") is not None else raw.get("seed", 0)
    samples = overrides.get("samples") or raw.get("samples", 100_000)
    return RunConfig(model=model, measure=measure, grid=dict(grid), quadrature=_quadrature(quad),
                     output=overrides.get("output") or out.get("path", "-"), format=fmt,
                     seed=int(seed), samples=int(samples), region=raw.get("region"),
                     route=raw.get("route", "closed-form"))


def grid_points(cfg: RunConfig):
    """Grid points in row order, with inadmissible points dropped and noted."""
    a_name, b_name = MEASURES[cfg.measure][0]
    if a_name not in cfg.grid or b_name not in cfg.grid:
        raise ConfigError(f"measure {cfg.measure} needs grid axes {a_name} and {b_name}")
    extra = set(cfg.grid) - {a_name, b_name}
    if extra:
        raise ConfigError(f"unexpected grid axes {sorted(extra)} for {cfg.measure}")
    A = _axis_values(a_name, cfg.grid[a_name])
    b_spec = cfg.grid[b_name]
    if isinstance(b_spec, str):
        tie = b_spec.replace(" ", "")
        if tie == f"1-{a_name}":
            pairs = [(a, 1.0 - a) for a in A]
        elif tie == a_name:
            pairs = [(a, a) for a in A]
        else:
            raise ConfigError(f"cannot read grid axis {b_name}={b_spec!r}")
    else:
        B = _axis_values(b_name, b_spec)
        pairs = [(a, b) for a in A for b in B]
    kept = []
    for a, b in pairs:
        if a_name == "p":
            ok = 0 < a < 1 and 0 < b < 1 and (a < b or cfg.measure != "os-mi")
        else:
            ok = a >= 0 and b >= 0
        if ok:
            kept.append((float(a), float(b)))
    dropped = len(pairs) - len(kept)
    if dropped:
        cfg.notes.append(f"dropped {dropped} grid point(s) outside the admissible region")
    return (a_name, b_name), kept


def run(cfg: RunConfig):
    """Evaluate the grid; returns ``(column names, rows)``."""
    model = build_model(cfg.model)
    names, pts = grid_points(cfg)
    if names[0] == "s":
        _need_bivariate(model, cfg.measure)
        evaluate = _eval_st
    else:
        evaluate = _eval_pq
    rows = []
    for a, b in pts:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", NonConvergenceWarning)
            try:
                value, err, ok = evaluate(cfg.measure, model, a, b, cfg, cfg.quadrature)
                null = False
            except ZeroRegionProbability:
                value, err, ok, null = math.nan, math.nan, False, True
            except ConfigError:
                raise
            except LifeInfoError as exc:
                cfg.notes.append(f"point ({a:g}, {b:g}): {type(exc).__name__}: {exc}")
                value, err, ok, null = math.nan, math.nan, False, False
        if any(issubclass(w.category, NonConvergenceWarning) for w in caught):
            ok = False
        rows.append(Row(a, b, float(value), float(err), bool(ok), null))
    return names, rows


# ---------------------------------------------------------------------------
# output

def _fmt(v: float) -> str:
    return "nan" if math.isnan(v) else f"{v:.17e}"


def write_rows(names, rows, fh, fmt="csv"):
    cols = list(names) + ["value", "error", "converged"]
    if fmt == "csv":
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r.a), _fmt(r.b), _fmt(r.value), _fmt(r.error),
                        "true" if r.converged else "false"])
    else:
        recs = [{names[0]: r.a, names[1]: r.b,
                 "value": None if math.isnan(r.value) else r.value,
                 "error": None if math.isnan(r.error) else r.error,
                 "converged": r.converged} for r in rows]
        json.dump(recs, fh, indent=1)
        fh.write("\n")


def list_models() -> str:
    lines = ["model families (parameters):"]
    for name, (_, doc, _) in MODELS.items():
        lines.append(f"  {name:20s} {doc}")
    lines.append("compact form: family(k=v,...), e.g. os(n=3,uniform) or copula(clayton,theta=2)")
    return "\n".join(lines)


def list_measures() -> str:
    lines = ["measures (grid axes): definition"]
    for name, (axes, doc) in MEASURES.items():
        lines.append(f"  {name:20s} ({axes[0]},{axes[1]})  {doc}")
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parser():
    ap = _Parser(prog="lifeinfo", description="Dynamic mutual information for lifetime pairs.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    r = sub.add_parser("run", help="evaluate a measure over a grid")
    r.add_argument("--config", help="JSON run config")
    r.add_argument("--model", help="model spec, overrides the config")
    r.add_argument("--measure", help="measure name, overrides the config")
    r.add_argument("--grid", help='grid, e.g. "s=0.01:0.99:30,t=0.01:0.99:30" or "p=0.01:0.49:50,q=1-p"')
    r.add_argument("--tol", type=float, help="relative quadrature tolerance")
    r.add_argument("--seed", type=int, help="seed for mc-validate")
    r.add_argument("--samples", type=int, help="sample count for mc-validate")
    r.add_argument("--output", help="output path, '-' for stdout")
    r.add_argument("--format", choices=("csv", "json"))
    sub.add_parser("list-models", help="list model families")
    sub.add_parser("list-measures", help="list measures")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list-models":
        print(list_models())
        return 0
    if args.command == "list-measures":
        print(list_measures())
        return 0
    try:
        cfg = load_config(args.config, vars(args))
        names, rows = run(cfg)
    except ConfigError as exc:
        print(f"lifeinfo: config error: {exc}", file=sys.stderr)
        return 1
    for note in cfg.notes:
        print(f"lifeinfo: warning: {note}", file=sys.stderr)
    if cfg.output == "-":
        write_rows(names, rows, sys.stdout, cfg.format)
    else:
        with open(cfg.output, "w", newline="") as fh:
            write_rows(names, rows, fh, cfg.format)
    failed = sum(1 for r in rows if not r.converged and not r.null)
    if failed:
        print(f"lifeinfo: {failed} point(s) did not converge", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
