"""Command-line front end: ``price``, ``curve`` and ``validate``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 a declared
tolerance failed in ``validate`` (the report is still written).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

from .errors import NoConvergentRoot, SeriesRadiusExceeded, ValidationError, WhitbondError
from .models import CIR, MODEL_NAMES, PricingQuery, ShortRateModel, make_model
from .oracles import McConfig, PdeConfig, mc_estimate, pde_estimate, riccati_estimate
from .pricing import PRICING_METHODS, Method, PriceEstimate, price
from .quadrature import QuadratureSpec

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_TOLERANCE = 0, 2, 3, 4
PRICE_COLUMNS = ("model", "r", "tau", "method", "price", "err_estimate", "flags")
CURVE_COLUMNS = ("tau", "price", "yield", "method", "err_estimate")
PAIR_COLUMNS = ("model", "r", "tau", "method_a", "method_b", "price_a", "price_b",
                "discrepancy", "tolerance", "status")
ORACLE_METHODS = ("pde", "mc")
DEFAULT_CURVE_TAUS = (0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 20.0, 30.0)
DEFAULT_VALIDATE_RS = (0.02, 0.05)
DEFAULT_VALIDATE_TAUS = (0.0, 1.0, 5.0)

# declared tolerances of validate, by the kind of the second method
REL_TOL_CLOSED = 1e-6
REL_TOL_RICCATI = 1e-8
REL_TOL_PDE = 5e-4
MC_SIGMAS = 3.0
# Euler bias is O(dt); unless n_steps is given, MC uses this many steps per year
MC_STEPS_PER_YEAR = 1000
MC_MIN_STEPS = 50
# documented unavailability of a route, reported without counting as a failure
_UNAVAILABLE = (SeriesRadiusExceeded, NoConvergentRoot)

_QUAD_KEYS = {f.name for f in fields(QuadratureSpec)}
_MC_KEYS = {"n_paths", "n_steps", "antithetic", "r_cap", "scheme", "threads", "steps_per_year"}
_PDE_KEYS = {"pde_n_space": "n_space", "pde_n_time": "n_time", "pde_r_max": "r_max",
             "pde_grid": "grid"}
_TOP_KEYS = {"model", "alpha", "beta", "gamma", "r", "tau", "method", "format", "seed",
             "out", "jobs"}


@dataclass
class RunConfig:
    """Everything a command needs, merged from the config file and the flags."""

    model: ShortRateModel
    rs: tuple
    taus: tuple
    methods: tuple
    fmt: str = "csv"
    out: str | None = None
    jobs: int = 1
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    mc: McConfig = field(default_factory=McConfig)
    mc_steps_per_year: float | None = MC_STEPS_PER_YEAR
    pde: PdeConfig = field(default_factory=PdeConfig)


def available_methods(model: ShortRateModel) -> tuple:
    """Closed-form routes of the model followed by the oracle routes."""
    extra = ("riccati",) if isinstance(model, CIR) else ()
    return PRICING_METHODS[model.name] + extra + ORACLE_METHODS


def _canonical_method(model: ShortRateModel, name: str) -> str:
    allowed = available_methods(model)
    if name in allowed:
        return name
    # also accept the PriceEstimate spelling, e.g. "cir_affine" or "gbm_laplace"
    for m in allowed:
        if _method_value(model, m) == name:
            return m
    raise ValidationError(f"method {name!r} not available for {model.name}; choose from {allowed}")


def _method_value(model, route):
    values = {
        ("ci", "whittaker"): Method.CI_WHITTAKER, ("ci", "integral"): Method.CI_INTEGRAL,
        ("cirvr", "whittaker"): Method.CIRVR_WHITTAKER, ("cirvr", "integral"): Method.CIRVR_INTEGRAL,
        ("gbm", "laplace"): Method.GBM_LAPLACE, ("gbm", "closed"): Method.GBM_CLOSED,
        ("gcir", "whittaker"): Method.GCIR_WHITTAKER, ("cir", "closed"): Method.CIR_AFFINE,
        ("modci", "integral"): Method.MODCI_INTEGRAL,
    }
    m = values.get((model.name, route)) or {"pde": Method.PDE, "mc": Method.MC,
                                            "riccati": Method.RICCATI}.get(route)
    return m.value if m else None


def evaluate(cfg: RunConfig, route: str, q: PricingQuery) -> PriceEstimate:
    """Price one query with one route."""
    if route == "mc":
        mc = cfg.mc
        if cfg.mc_steps_per_year is not None:
            mc = replace(mc, n_steps=max(MC_MIN_STEPS, math.ceil(cfg.mc_steps_per_year * q.tau)))
        return mc_estimate(cfg.model, q, mc)
    if route == "pde":
        return pde_estimate(cfg.model, q, cfg.pde)
    if route == "riccati":
        return riccati_estimate(cfg.model, q)
    return price(cfg.model, q, route, cfg.quad)


# ---------------------------------------------------------------- formatting

def fmt_float(x: float) -> str:
    """17 significant digits, locale independent; non-finite values as ``nan``/``inf``."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        return fmt_float(v) if math.isfinite(v) else "null"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(x)}" for k, x in v.items()) + "}"
    return "[" + ", ".join(_json_value(x) for x in v) + "]"


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, (list, tuple, frozenset, set)):
        return "|".join(sorted(v))
    s = str(v)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def render_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines += [",".join(_csv_cell(r[c]) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def render_json(obj) -> str:
    if isinstance(obj, list):
        return "[\n" + ",\n".join("  " + _json_value(r) for r in obj) + "\n]\n"
    return _json_value(obj) + "\n"


def price_record(model: ShortRateModel, q: PricingQuery, est: PriceEstimate) -> dict:
    return {"model": model.name, "r": q.r, "tau": q.tau, "method": est.method.value,
            "price": est.price, "err_estimate": est.err_estimate, "flags": sorted(est.flags)}


# ---------------------------------------------------------------- config

def _float_list(text) -> tuple:
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return (float(text),)
    if isinstance(text, str):
        parts = [p for p in text.split(",") if p.strip()]
    else:
        parts = list(text)
    try:
        return tuple(float(p) for p in parts)
    except (TypeError, ValueError):
        raise ValidationError(f"expected a number or a comma-separated list, got {text!r}") from None


def _str_list(v) -> tuple:
    if isinstance(v, str):
        return tuple(p.strip() for p in v.split(",") if p.strip())
    return tuple(v)


def load_settings(args) -> dict:
    """Flat settings: config-file keys first, then any flag given on the command line."""
    settings = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config!r}: {exc}") from None
        if not isinstance(data, dict):
            raise ValidationError("config file must hold a flat JSON object")
        unknown = set(data) - _TOP_KEYS - _QUAD_KEYS - _MC_KEYS - set(_PDE_KEYS)
        if unknown:
            raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        settings.update(data)
    for key in _TOP_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            settings[key] = v
    return settings


def build_run_config(settings: dict, default_taus=None, default_rs=None, all_methods=False) -> RunConfig:
    if "model" not in settings:
        raise ValidationError("--model is required")
    model = make_model(settings["model"], settings.get("alpha"), settings.get("beta"),
                       settings.get("gamma"))
    rs = _float_list(settings["r"]) if "r" in settings else default_rs
    taus = _float_list(settings["tau"]) if "tau" in settings else default_taus
    if not rs:
        raise ValidationError("--r is required")
    if not taus:
        raise ValidationError("--tau is required")
    if "method" in settings:
        methods = tuple(_canonical_method(model, m) for m in _str_list(settings["method"]))
    elif all_methods:
        methods = available_methods(model)
    else:
        methods = (PRICING_METHODS[model.name][0],)
    if not methods:
        raise ValidationError("empty method list")
    fmt = settings.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ValidationError("--format must be csv or json")
    jobs = settings.get("jobs", 1)
    if isinstance(jobs, bool) or not isinstance(jobs, int) or jobs < 1:
        raise ValidationError("jobs must be an integer >= 1")
    try:
        quad = QuadratureSpec(**{k: settings[k] for k in _QUAD_KEYS if k in settings})
        mc_kw = {k: settings[k] for k in _MC_KEYS - {"steps_per_year"} if k in settings}
        if "seed" in settings:
            mc_kw["seed"] = settings["seed"]
        mc = McConfig(**mc_kw)
        pde = PdeConfig(**{v: settings[k] for k, v in _PDE_KEYS.items() if k in settings})
    except TypeError as exc:
        raise ValidationError(str(exc)) from None
    spy = None if "n_steps" in settings else settings.get("steps_per_year", MC_STEPS_PER_YEAR)
    if spy is not None and not (isinstance(spy, (int, float)) and not isinstance(spy, bool) and spy > 0):
        raise ValidationError("steps_per_year must be a positive number")
    return RunConfig(model, rs, taus, methods, fmt, settings.get("out"), jobs, quad=quad, mc=mc,
                     mc_steps_per_year=spy, pde=pde)


def _queries(rs, taus):
    return [PricingQuery(r, t) for r in rs for t in taus]


def _map(cfg: RunConfig, fn, items):
    # grid points may run in parallel; results keep grid order
    if cfg.jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# ---------------------------------------------------------------- commands

def cmd_price(cfg: RunConfig) -> tuple[int, str]:
    """One record per (r, tau, method)."""
    tasks = [(q, m) for q in _queries(cfg.rs, cfg.taus) for m in cfg.methods]
    rows = _map(cfg, lambda t: price_record(cfg.model, t[0], evaluate(cfg, t[1], t[0])), tasks)
    text = render_csv(PRICE_COLUMNS, rows) if cfg.fmt == "csv" else \
        render_json(rows[0] if len(rows) == 1 else rows)
    return EXIT_OK, text


def cmd_curve(cfg: RunConfig) -> tuple[int, str]:
    """Price and continuously compounded yield ``-ln(P)/tau`` on a maturity grid."""
    if len(cfg.rs) != 1:
        raise ValidationError("curve takes a single --r")
    if len(cfg.methods) != 1:
        raise ValidationError("curve takes a single --method")
    taus = cfg.taus
    if any(t <= 0.0 for t in taus) or any(b <= a for a, b in zip(taus, taus[1:])):
        raise ValidationError("curve needs a strictly positive, strictly ascending tau grid")
    r, route = cfg.rs[0], cfg.methods[0]

    def row(t):
        est = evaluate(cfg, route, PricingQuery(r, t))
        return {"tau": t, "price": est.price, "yield": -math.log(est.price) / t,
                "method": est.method.value, "err_estimate": est.err_estimate}

    rows = _map(cfg, row, list(taus))
    text = render_csv(CURVE_COLUMNS, rows) if cfg.fmt == "csv" else render_json(rows)
    return EXIT_OK, text


def pair_tolerance(a: PriceEstimate, b: PriceEstimate) -> float:
    """Declared agreement bound between two methods at one grid point."""
    kinds = {a.method, b.method}
    scale = max(a.price, b.price)
    base = a.err_estimate + b.err_estimate
    if Method.MC in kinds:
        mc, other = (a, b) if a.method == Method.MC else (b, a)
        return MC_SIGMAS * mc.err_estimate + other.err_estimate
    if Method.PDE in kinds:
        return REL_TOL_PDE * scale + base
    if Method.RICCATI in kinds:
        return REL_TOL_RICCATI * scale + base
    if kinds == {Method.GBM_LAPLACE, Method.GBM_CLOSED}:
        return base + 1e-12
    return REL_TOL_CLOSED * scale + base


def cmd_validate(cfg: RunConfig) -> tuple[int, str]:
    """Per-method prices, pairwise discrepancies and pass/fail on each grid point."""
    queries = _queries(cfg.rs, cfg.taus)

    def run(q):
        out = []
        for route in cfg.methods:
            try:
                out.append((route, evaluate(cfg, route, q), None))
            except WhitbondError as exc:
                if isinstance(exc, ValidationError) and route not in ORACLE_METHODS:
                    raise
                kind = "UNAVAILABLE" if isinstance(exc, _UNAVAILABLE) else "FAILED"
                out.append((route, None, f"{kind} {type(exc).__name__}: {exc}"))
        return q, out

    results = _map(cfg, run, queries)
    prices, pairs, seen, failures, unavailable = [], [], set(), 0, 0
    for q, out in results:
        for route, est, err in out:
            if est is None:
                prices.append({"model": cfg.model.name, "r": q.r, "tau": q.tau, "method": route,
                               "price": math.nan, "err_estimate": math.nan, "flags": [err]})
                if err.startswith("UNAVAILABLE"):
                    unavailable += 1
                else:
                    failures += 1
                continue
            seen |= est.flags
            prices.append(price_record(cfg.model, q, est))
        ok = [(route, est) for route, est, _ in out if est is not None]
        for i in range(len(ok)):
            for j in range(i + 1, len(ok)):
                a, b = ok[i][1], ok[j][1]
                gap, tol = abs(a.price - b.price), pair_tolerance(a, b)
                status = "pass" if gap <= tol else "FAIL"
                failures += status == "FAIL"
                pairs.append({"model": cfg.model.name, "r": q.r, "tau": q.tau,
                              "method_a": a.method.value, "method_b": b.method.value,
                              "price_a": a.price, "price_b": b.price, "discrepancy": gap,
                              "tolerance": tol, "status": status})
    summary = {"status": "pass" if failures == 0 else "FAIL", "failures": failures,
               "unavailable": unavailable, "pairs": len(pairs), "flags_encountered": sorted(seen)}
    if cfg.fmt == "csv":
        buf = io.StringIO()
        buf.write(render_csv(PRICE_COLUMNS, prices))
        buf.write("\n")
        buf.write(render_csv(PAIR_COLUMNS, pairs))
        buf.write("\n")
        buf.write(render_csv(("status", "failures", "unavailable", "pairs", "flags_encountered"), [summary]))
        text = buf.getvalue()
    else:
        text = render_json({"prices": prices, "pairs": pairs, "summary": summary})
    return (EXIT_OK if failures == 0 else EXIT_TOLERANCE), text


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="whitbond", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {"price": "price one bond (or a small r x tau grid)",
             "curve": "yield curve over a maturity grid",
             "validate": "cross-method validation report"}
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--model", choices=MODEL_NAMES)
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--r", help="short rate, or comma-separated list")
        p.add_argument("--tau", help="time to maturity, or comma-separated list")
        p.add_argument("--method", help="route name, or comma-separated list")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--config", help="flat JSON file with the same keys as the flags")
        p.add_argument("--seed", type=int, help="Monte Carlo seed")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--jobs", type=int, help="threads over grid points (output order is fixed)")
    return parser


_COMMANDS = {
    "price": (cmd_price, {}),
    "curve": (cmd_curve, {"default_taus": DEFAULT_CURVE_TAUS}),
    "validate": (cmd_validate, {"default_taus": DEFAULT_VALIDATE_TAUS,
                                "default_rs": DEFAULT_VALIDATE_RS, "all_methods": True}),
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command, defaults = _COMMANDS[args.command]
    try:
        cfg = build_run_config(load_settings(args), **defaults)
        status, text = command(cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (WhitbondError, ArithmeticError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
