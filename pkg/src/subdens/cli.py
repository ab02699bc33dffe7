"""Command-line interface: density grids to CSV, series-vs-oracle
comparisons, reproducible sampling, and small-argument limit reports.

Exit codes: 0 success, 1 comparison failure, 2 usage/validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import composite, invgauss, oracle, stable, tempered
from .errors import SubdensError
from .params import (SUSPECT_FLAGS, GridSpec, IGParams, PairParams,
                     StableParams, TemperedParams)

_EVAL_DENSITIES = ("stable", "inv-stable", "stable-pow", "inv-stable-pow",
                   "tempered", "inv-tempered", "product-inv", "product-stable",
                   "quotient-inv", "ig", "ig-first-exit")
_ORACLES = ("mc", "mellin", "laplace", "closed-form")


def _fmt(v: float) -> str:
    return repr(float(v))


# ---------------------------------------------------------------------------
# density registry

def _params_for(name: str, a: argparse.Namespace):
    if name in ("stable", "inv-stable", "stable-pow", "inv-stable-pow"):
        _need(a, name, "alpha")
        return StableParams(a.alpha, a.t)
    if name in ("tempered", "inv-tempered"):
        _need(a, name, "alpha")
        lam = a.lam if a.lam is not None else 0.0
        return TemperedParams(a.alpha, lam, a.t)
    if name in ("product-inv", "product-stable", "quotient-inv"):
        _need(a, name, "alpha1", "alpha2")
        return PairParams(a.alpha1, a.alpha2, a.t)
    if name in ("ig", "ig-first-exit"):
        _need(a, name, "delta")
        return IGParams(a.delta, a.gamma if a.gamma is not None else 0.0, a.t)
    raise SubdensError(f"unknown density {name!r}")


def _need(a: argparse.Namespace, name: str, *keys: str) -> None:
    for k in keys:
        if getattr(a, k, None) is None:
            raise SubdensError(f"density {name!r} requires --{k}")


def _grid_fn(name: str, p, a: argparse.Namespace):
    if name == "stable":
        return lambda xs: stable.stable_pdf_grid(p, xs)
    if name == "inv-stable":
        return lambda xs: stable.inv_stable_pdf_grid(p, xs)
    if name == "stable-pow":
        n = _power(a)
        return lambda xs: stable.stable_power_pdf_grid(p, n, xs)
    if name == "inv-stable-pow":
        n = _power(a)
        return lambda xs: stable.inv_stable_power_pdf_grid(p, n, xs)
    if name == "tempered":
        return lambda xs: tempered.tempered_pdf_grid(p, xs)
    if name == "inv-tempered":
        return lambda xs: tempered.inv_tempered_pdf_grid(p, xs)
    if name == "product-inv":
        return lambda xs: composite.product_inv_pdf_grid(p, xs)
    if name == "product-stable":
        return lambda xs: composite.product_stable_pdf_grid(p, xs)
    if name == "quotient-inv":
        return lambda xs: composite.quotient_inv_pdf_grid(p, xs)
    if name == "ig":
        return lambda xs: invgauss.ig_pdf_grid(p, xs)
    if name == "ig-first-exit":
        return lambda xs: invgauss.ig_first_exit_pdf_grid(p, xs)
    raise SubdensError(f"unknown density {name!r}")


def _power(a: argparse.Namespace) -> int:
    if a.power is None or a.power < 1:
        raise SubdensError("power densities require --power >= 1")
    return int(a.power)


# ---------------------------------------------------------------------------
# eval

def _cmd_eval(a: argparse.Namespace) -> int:
    p = _params_for(a.density, a)
    grid = GridSpec(a.x_min, a.x_max, a.points, a.spacing)
    xs = grid.xs()
    vals, errs, terms, flags = _grid_fn(a.density, p, a)(xs)
    suspect = np.isin(flags, SUSPECT_FLAGS)
    out_terms = np.where(suspect, -1, terms)
    lines = ["x,density,abs_err_est,terms"]
    for i in range(xs.size):
        lines.append(f"{_fmt(xs[i])},{_fmt(vals[i])},{_fmt(errs[i])},"
                     f"{int(out_terms[i])}")
    _write(a.out, "\n".join(lines) + "\n")
    if suspect.any():
        print(f"warning: {int(suspect.sum())} point(s) carry an accuracy flag "
              "(terms=-1)", file=sys.stderr)
    if a.gnuplot:
        _write(a.out + ".gp", _gnuplot_script(a))
    return 0


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _gnuplot_script(a: argparse.Namespace) -> str:
    log = "set logscale x\n" if a.spacing == "log" else ""
    return (f"set datafile separator ','\n{log}"
            f"set xlabel 'x'\nset ylabel 'density'\n"
            f"plot '{a.out}' skip 1 using 1:2 with lines title '{a.density}'\n")


# ---------------------------------------------------------------------------
# compare

def _closed_form_fn(name: str, p, a):
    if name == "stable" and p.alpha == 0.5:
        return lambda xs: stable.stable_half_pdf(xs, p.t)
    if name == "inv-stable" and p.alpha == 0.5:
        return lambda xs: stable.inv_stable_half_pdf(xs, p.t)
    if name == "tempered" and p.alpha == 0.5:
        return lambda xs: (np.exp(-p.lam * xs + math.sqrt(p.lam) * p.t)
                           * stable.stable_half_pdf(xs, p.t))
    if name == "stable-pow" and p.alpha == 0.5:
        n = _power(a)
        return lambda xs: (xs ** (1.0 / n - 1.0) / n
                           * stable.stable_half_pdf(xs ** (1.0 / n), p.t))
    if name == "inv-stable-pow" and p.alpha == 0.5:
        n = _power(a)
        return lambda xs: (xs ** (1.0 / n - 1.0) / n
                           * stable.inv_stable_half_pdf(xs ** (1.0 / n), p.t))
    if name == "ig":
        return lambda xs: invgauss.ig_pdf_series_grid(p, xs)[0]
    if name == "ig-first-exit" and p.gamma == 0.0:
        return lambda xs: invgauss.ig_first_exit_reflection_pdf(p, xs)
    return None


def _laplace_fn(name: str, p):
    """(transform factory, invert-variable) for per-point Laplace inversion."""
    if name == "stable":
        return (lambda x: (lambda s: np.exp(-p.t * s ** p.alpha))), "x"
    if name == "tempered":
        return (lambda x: (lambda s: np.exp(
            -p.t * ((s + p.lam) ** p.alpha - p.lam ** p.alpha)))), "x"
    if name == "inv-stable":
        return (lambda x: (lambda u: u ** (p.alpha - 1.0)
                           * np.exp(-x * u ** p.alpha))), "t"
    if name == "inv-tempered":
        def fac(x):
            def F(u):
                g = (u + p.lam) ** p.alpha - p.lam ** p.alpha
                return g * np.exp(-x * g) / u
            return F
        return fac, "t"
    if name == "ig":
        return (lambda x: (lambda s: np.exp(
            -p.delta * p.t * (np.sqrt(p.gamma ** 2 + 2.0 * s) - p.gamma)))), "x"
    if name == "ig-first-exit":
        def fac(x):
            def F(u):
                g = p.delta * (np.sqrt(p.gamma ** 2 + 2.0 * u) - p.gamma)
                return g * np.exp(-x * g) / u
            return F
        return fac, "t"
    return None


def _mellin_setup(name: str, p):
    if name == "stable":
        rate = 0.5 * math.pi * (1.0 / p.alpha - 1.0)
        return (lambda s: stable.stable_mellin(p, s),
                oracle.ContourSpec(0.5, 46.0 / rate + 24.0, 256,
                                   (-1e9, 1.0 + p.alpha)))
    if name == "inv-stable":
        rate = 0.5 * math.pi * (1.0 - p.alpha)
        return (lambda s: stable.inv_stable_mellin(p, s),
                oracle.ContourSpec(1.0, 46.0 / rate + 24.0, 256, (0.0, 1e9)))
    if name == "product-inv":
        rate = 0.5 * math.pi * (2.0 - p.alpha1 - p.alpha2)
        return (lambda s: composite.product_inv_mellin(p, s),
                oracle.ContourSpec(1.0, 46.0 / rate + 24.0, 256, (0.0, 1e9)))
    if name == "product-stable":
        rate = 0.5 * math.pi * (1.0 / p.alpha1 + 1.0 / p.alpha2 - 2.0)
        return (lambda s: composite.product_stable_mellin(p, s),
                oracle.ContourSpec(0.5, 46.0 / rate + 24.0, 256,
                                   (-1e9, 1.0 + min(p.alpha1, p.alpha2))))
    if name == "quotient-inv":
        rate = 0.5 * math.pi * (2.0 - p.alpha1 - p.alpha2)
        return (lambda s: composite.quotient_mellin(p, s),
                oracle.ContourSpec(1.0, 46.0 / rate + 24.0, 256, (0.0, 2.0)))
    return None


def _sampler_for(name: str, p, n: int, seed: int, workers: int):
    if name in ("stable", "stable-pow"):
        return oracle.sample_stable(p.alpha, p.t, n, seed, workers)
    if name in ("inv-stable", "inv-stable-pow"):
        return oracle.sample_inverse(p.alpha, p.t, n, seed, workers)
    if name == "tempered":
        return oracle.sample_tempered(p.alpha, p.lam, p.t, n, seed, workers)
    if name == "inv-tempered":
        if p.lam == 0.0:
            return oracle.sample_inverse(p.alpha, p.t, n, seed, workers)
        return oracle.sample_inverse_tempered(p.alpha, p.lam, p.t, n, seed, workers)
    if name == "product-inv":
        return oracle.sample_product_inv(p.alpha1, p.alpha2, p.t, n, seed, workers)
    if name == "product-stable":
        return oracle.sample_product_stable(p.alpha1, p.alpha2, p.t, n, seed, workers)
    if name == "quotient-inv":
        return oracle.sample_quotient_inv(p.alpha1, p.alpha2, p.t, n, seed, workers)
    if name == "ig":
        return oracle.sample_ig(p.delta, p.gamma, p.t, n, seed, workers)
    if name == "ig-first-exit":
        return oracle.sample_ig_first_exit(p.delta, p.gamma, p.t, n, seed, workers)
    raise SubdensError(f"no sampler for {name!r}")


def _power_transform_batch(name: str, a, values: np.ndarray) -> np.ndarray:
    if name.endswith("-pow"):
        return values ** _power(a)
    return values


def _cmd_compare(a: argparse.Namespace) -> int:
    p = _params_for(a.density, a)
    grid = GridSpec(a.x_min, a.x_max, a.points, a.spacing)
    xs = grid.xs()
    series = _grid_fn(a.density, p, a)(xs)[0]

    if a.oracle == "closed-form":
        fn = _closed_form_fn(a.density, p, a)
        if fn is None:
            raise SubdensError(
                f"closed-form oracle unavailable for {a.density!r} at these "
                "parameters (needs alpha=1/2, ig, or gamma=0 first-exit)")
        ref = np.asarray(fn(xs), dtype=np.float64)
    elif a.oracle == "laplace":
        pair = _laplace_fn(a.density, p)
        if pair is None:
            raise SubdensError(f"laplace oracle unavailable for {a.density!r}")
        fac, var = pair
        ref = np.array([oracle.laplace_invert(
            fac(float(x)), p.t if var == "t" else float(x)).value for x in xs])
    elif a.oracle == "mellin":
        pair = _mellin_setup(a.density, p)
        if pair is None:
            raise SubdensError(f"mellin oracle unavailable for {a.density!r}")
        F, spec = pair
        ref = np.array([oracle.mellin_invert(F, spec, float(x)).value
                        for x in xs])
    else:  # mc
        batch = _sampler_for(a.density, p, a.n, a.seed, a.workers)
        vals = _power_transform_batch(a.density, a, batch.values)
        q05, q95 = np.quantile(vals, [0.05, 0.95])
        if xs.min() < q05 or xs.max() > q95:
            print(f"warning: comparison points outside KDE interior range "
                  f"[{q05:.4g}, {q95:.4g}]", file=sys.stderr)
        sd = float(vals.std())
        q25, q75 = np.quantile(vals, [0.25, 0.75])
        h = 0.9 * min(sd, float(q75 - q25) / 1.34) * vals.size ** -0.2
        from .backend import kernels
        ref = kernels().kde_eval(xs, np.sort(vals), h)

    rel = np.abs(series - ref) / np.maximum(np.abs(ref), 1e-300)
    passed = rel <= a.tol
    records = []
    for i, x in enumerate(xs):
        records.append(dict(x=float(x), series=float(series[i]),
                            oracle=float(ref[i]), rel_err=float(rel[i]),
                            passed=bool(passed[i])))
        print(f"x={_fmt(x)} series={_fmt(series[i])} oracle={_fmt(ref[i])} "
              f"rel_err={rel[i]:.3e} {'PASS' if passed[i] else 'FAIL'}")
    print(f"{int(passed.sum())}/{xs.size} points within tol={a.tol} "
          f"({a.density} vs {a.oracle})")
    if a.jsonl:
        with open(a.jsonl, "w", encoding="utf-8", newline="\n") as fh:
            for r in records:
                fh.write(json.dumps(r) + "\n")
    return 0 if bool(passed.all()) else 1


# ---------------------------------------------------------------------------
# sample

def _cmd_sample(a: argparse.Namespace) -> int:
    p = _params_for(a.process, a)
    batch = _sampler_for(a.process, p, a.n, a.seed, a.workers)
    vals = _power_transform_batch(a.process, a, batch.values)
    lines = [f"# seed={a.seed}, workers={a.workers}"]
    lines.extend(_fmt(v) for v in vals)
    _write(a.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# limit

def _limit_structure(name: str, p, a):
    if name == "inv-stable":
        return stable.inv_stable_power_limit0(p, 1)
    if name == "inv-stable-pow":
        return stable.inv_stable_power_limit0(p, _power(a))
    if name == "inv-tempered":
        from .params import LimitStructure
        return LimitStructure(0.0, 0.0, 0.0, tempered.inv_tempered_limit0(p))
    if name == "product-inv":
        return composite.product_inv_limit0(p)
    if name == "product-stable":
        return composite.product_stable_limit0(p)
    if name == "quotient-inv":
        return composite.quotient_limit0(p)
    raise SubdensError(f"no small-argument limit report for {name!r}")


def _cmd_limit(a: argparse.Namespace) -> int:
    p = _params_for(a.density, a)
    st = _limit_structure(a.density, p, a)
    where = "x->inf" if st.at_infinity else "x->0+"
    print(f"{a.density}: leading behavior ({where}): "
          f"x^{_fmt(st.exponent)} * ({_fmt(st.c2)}*log(x)^2 + "
          f"{_fmt(st.c1)}*log(x) + {_fmt(st.c0)})")
    grid_fn = _grid_fn(a.density, p, a)
    probes = (1e4, 1e6, 1e8) if st.at_infinity else (1e-4, 1e-6, 1e-8)
    for x in probes:
        pred = float(st(x))
        val = float(grid_fn(np.array([x]))[0][0])
        ratio = val / pred if pred != 0 else math.inf
        print(f"  x={x:g}: density={_fmt(val)} predicted={_fmt(pred)} "
              f"ratio={ratio:.10f}")
    return 0


# ---------------------------------------------------------------------------
# argument plumbing

def _read_config(path: str) -> dict[str, str]:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SubdensError(f"bad config line (want key = value): {raw!r}")
            k, v = line.split("=", 1)
            cfg[k.strip().replace("-", "_")] = v.strip()
    return cfg


def _add_param_flags(sp, cfg):
    f = lambda k, cast=float: cast(cfg[k]) if k in cfg else None  # noqa: E731
    sp.add_argument("--alpha", type=float, default=f("alpha"))
    sp.add_argument("--alpha1", type=float, default=f("alpha1"))
    sp.add_argument("--alpha2", type=float, default=f("alpha2"))
    sp.add_argument("--lambda", dest="lam", type=float,
                    default=f("lambda") if "lambda" in cfg else f("lam"))
    sp.add_argument("--delta", type=float, default=f("delta"))
    sp.add_argument("--gamma", type=float, default=f("gamma"))
    sp.add_argument("--t", type=float, default=float(cfg.get("t", 1.0)))
    sp.add_argument("--power", type=int,
                    default=int(cfg["power"]) if "power" in cfg else None)


def _add_grid_flags(sp, cfg, x_min=0.3, x_max=3.0, points=5):
    sp.add_argument("--x-min", type=float, default=float(cfg.get("x_min", x_min)))
    sp.add_argument("--x-max", type=float, default=float(cfg.get("x_max", x_max)))
    sp.add_argument("--points", type=int, default=int(cfg.get("points", points)))
    sp.add_argument("--spacing", choices=("linear", "log"),
                    default=cfg.get("spacing", "linear"))


def build_parser(cfg: dict[str, str]) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="subdens",
        description="Subordinator density evaluation, sampling and verification")
    ap.add_argument("--config", help="key = value file of flag defaults")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a density grid to CSV")
    ev.add_argument("--density", required=True, choices=_EVAL_DENSITIES)
    _add_param_flags(ev, cfg)
    _add_grid_flags(ev, cfg, 0.1, 10.0, 100)
    ev.add_argument("--out", default=cfg.get("out", "-"))
    ev.add_argument("--gnuplot", action="store_true",
                    default=cfg.get("gnuplot", "0") not in ("0", "", "false"))
    ev.set_defaults(fn=_cmd_eval)

    cp = sub.add_parser("compare", help="compare a density series to an oracle")
    cp.add_argument("--density", required=True, choices=_EVAL_DENSITIES)
    cp.add_argument("--oracle", required=True, choices=_ORACLES)
    cp.add_argument("--tol", type=float, default=float(cfg.get("tol", 1e-5)))
    cp.add_argument("--n", type=int, default=int(cfg.get("n", 1_000_000)),
                    help="Monte Carlo sample size (mc oracle)")
    cp.add_argument("--seed", type=int, default=int(cfg.get("seed", 20260811)))
    cp.add_argument("--workers", type=int, default=int(cfg.get("workers", 1)))
    cp.add_argument("--jsonl", default=cfg.get("jsonl"),
                    help="write per-point JSON-lines report here")
    _add_param_flags(cp, cfg)
    _add_grid_flags(cp, cfg)
    cp.set_defaults(fn=_cmd_compare)

    sm = sub.add_parser("sample", help="draw reproducible variates to CSV")
    sm.add_argument("--process", required=True, choices=_EVAL_DENSITIES)
    sm.add_argument("--n", type=int, default=int(cfg.get("n", 1000)))
    sm.add_argument("--seed", type=int, default=int(cfg.get("seed", 20260811)))
    sm.add_argument("--workers", type=int, default=int(cfg.get("workers", 1)))
    sm.add_argument("--out", default=cfg.get("out", "-"))
    _add_param_flags(sm, cfg)
    sm.set_defaults(fn=_cmd_sample)

    lm = sub.add_parser("limit", help="report the small-argument limit")
    lm.add_argument("--density", required=True, choices=(
        "inv-stable", "inv-stable-pow", "inv-tempered", "product-inv",
        "product-stable", "quotient-inv"))
    _add_param_flags(lm, cfg)
    lm.set_defaults(fn=_cmd_limit)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    cfg: dict[str, str] = {}
    if "--config" in argv:
        try:
            cfg = _read_config(argv[argv.index("--config") + 1])
        except (IndexError, OSError, SubdensError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
    ap = build_parser(cfg)
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except SubdensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
