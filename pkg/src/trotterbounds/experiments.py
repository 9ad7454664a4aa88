"""Experiment kinds behind the service and the command-line runner.

``execute`` turns a validated config into a ``RunResult`` (curves, documents,
metrics, checked assertions); ``write_artifacts`` renders it to CSV and JSON.
Both are deterministic for a fixed config and seed.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.stats import kendalltau

from . import bessel_sim as bs
from . import dense_oracle as do
from . import hydrogen_model as hm
from .formula_algebra import ProductFormula, derive_bound, first_order, suzuki_times, swapped_formula
from .schemas import Assertion, Curve, ExperimentConfig, Kind, Level, RunResult

SIG = 9


def fmt(x: float) -> str:
    return format(float(x), f".{SIG}g")


def rounded(x: float) -> float:
    return float(fmt(x))


def make_formula(order: int, taus=(), scheme: str = "ABA") -> ProductFormula:
    if taus:
        pf = ProductFormula([Fraction(x) for x in taus], order)
    elif order == 1:
        pf = first_order()
    else:
        pf = suzuki_times(order)
    return swapped_formula(pf) if scheme == "BAB" else pf


def _slope(rows, window) -> float | None:
    try:
        return do.slope_fit(rows, window).slope
    except ValueError:
        return None


def _map(fn: Callable, items: list, threads: int) -> list:
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _level(cfg_level: Level) -> hm.HydrogenLevel:
    return hm.HydrogenLevel(cfg_level.n, cfg_level.l)


# --- kinds -------------------------------------------------------------------

def _bound_derivation(cfg: ExperimentConfig, threads: int) -> RunResult:
    pf = make_formula(cfg.order, cfg.taus, cfg.formula)
    be = derive_bound(pf)
    doc = be.to_dict()
    metrics = {"terms": float(len(be.terms))}
    for w, c in be.float_terms().items():
        metrics[f"coeff.{w}"] = c
    return RunResult(kind=cfg.kind, documents={"bound": doc}, metrics=metrics)


def _hydrogen_bound_curve(cfg: ExperimentConfig, threads: int) -> RunResult:
    lev = _level(cfg.level)
    terms = hm.first_order_terms(lev, printed=cfg.printed)
    rows = [(N, sum(term(cfg.t, N) for term in terms)) for N in cfg.N]
    meta = {
        "level": lev.label,
        "t": cfg.t,
        "printed": cfg.printed,
        "terms": [{"coeff": rounded(tm.coeff), "N_power": str(tm.step_power),
                   "t_power": str(tm.time_power)} for tm in terms],
    }
    metrics = {}
    s = _slope(rows, cfg.window)
    if s is not None:
        metrics["slope"] = s
    return RunResult(kind=cfg.kind, curves=[Curve(name=f"bound_{cfg.level.label}", rows=rows, meta=meta)],
                     metrics=metrics)


def _sim_sweep(cfg: ExperimentConfig, threads: int) -> RunResult:
    lev = _level(cfg.level)
    pf = make_formula(cfg.order, cfg.taus, cfg.formula)

    def one(M):
        basis = bs.build_basis(lev.l, cfg.R, M)
        proj = bs.project_level(basis, lev, cfg.max_loss)
        rows = bs.trotter_error_curve(proj.state, pf, cfg.t, cfg.N)
        return M, proj.loss, rows

    curves, metrics = [], {}
    results = _map(one, list(cfg.modes), threads)
    for M, loss, rows in results:
        meta = {"level": lev.label, "R": cfg.R, "modes": M, "order": pf.order_p, "scheme": cfg.formula,
                "t": cfg.t, "projection_loss": rounded(loss),
                "unitaries": [bs.unitary_count(pf, N) for N in cfg.N]}
        curves.append(Curve(name=f"error_{cfg.level.label}_M{M}", rows=rows, meta=meta))
        metrics[f"projection_loss.M{M}"] = loss
        s = _slope(rows, cfg.window)
        if s is not None:
            metrics[f"slope.M{M}"] = s
    for (Ma, _, ra), (Mb, _, rb) in zip(results, results[1:]):
        diff = max(abs(a[1] - b[1]) / b[1] for a, b in zip(ra, rb))
        metrics[f"rel_diff.M{Ma}.M{Mb}"] = diff
    return RunResult(kind=cfg.kind, curves=curves, metrics=metrics)


def _ionization(cfg: ExperimentConfig, threads: int) -> RunResult:
    levels = list(cfg.levels) or [cfg.level]
    pf = make_formula(cfg.order or 1, cfg.taus, cfg.formula)
    M = cfg.modes[0]

    def one(lv):
        lev = _level(lv)
        n_max = max(cfg.n_max or 0, lev.n)
        basis = bs.build_basis(lev.l, cfg.R, M)
        exact = bs.ionization_curve(lev, None, cfg.t, [1], basis, n_max)[0][1]
        rows = bs.ionization_curve(lev, pf, cfg.t, cfg.N, basis, n_max)
        return lv, n_max, exact, rows

    curves, metrics = [], {}
    for lv, n_max, exact, rows in _map(one, levels, threads):
        meta = {"level": lv.label, "R": cfg.R, "modes": M, "order": pf.order_p, "t": cfg.t,
                "n_max": n_max, "exact_ionization": rounded(exact)}
        curves.append(Curve(name=f"ionization_{lv.label}", rows=rows, meta=meta))
        metrics[f"exact.{lv.label}"] = exact
        if len(rows) >= 2:
            metrics[f"kendall.{lv.label}"] = float(kendalltau([r[0] for r in rows], [r[1] for r in rows])[0])
        for N, v in rows:
            metrics[f"ionization.{lv.label}.N{N}"] = v
    return RunResult(kind=cfg.kind, curves=curves, metrics=metrics)


def _order_comparison(cfg: ExperimentConfig, threads: int) -> RunResult:
    lev = _level(cfg.level)
    M = cfg.modes[0]
    basis = bs.build_basis(lev.l, cfg.R, M)
    proj = bs.project_level(basis, lev, cfg.max_loss)
    prop = bs.ExactPropagator.build(basis)

    def one(p):
        pf = make_formula(p, (), cfg.formula)
        rows = bs.trotter_error_curve(proj.state, pf, cfg.t, cfg.N, propagator=prop)
        return p, [(bs.unitary_count(pf, N), e) for N, e in rows]

    curves, metrics = [], {}
    for p, rows in _map(one, list(cfg.orders), threads):
        meta = {"level": lev.label, "R": cfg.R, "modes": M, "order": p, "t": cfg.t,
                "x_column": "total_unitaries", "trotter_steps": list(cfg.N),
                "projection_loss": rounded(proj.loss)}
        curves.append(Curve(name=f"unitaries_order{p}", rows=rows, meta=meta))
        s = _slope(rows, cfg.window)
        if s is not None:
            metrics[f"slope.order{p}"] = s
    return RunResult(kind=cfg.kind, curves=curves, metrics=metrics)


def _oracle_battery(cfg: ExperimentConfig, threads: int) -> RunResult:
    def one(p):
        pf = make_formula(p)
        vals = do.validation_battery(pf, cfg.count, cfg.seed, d=cfg.dim, t=cfg.t, Ns=cfg.N)
        return p, vals

    curves, metrics = [], {}
    k = len(cfg.N)
    for p, vals in _map(one, list(cfg.orders), threads):
        rows = []
        for i, N in enumerate(cfg.N):
            rows.append((N, max(v.measured for v in vals[i::k])))
        worst = max((v.measured / v.bound for v in vals if v.bound > 0), default=0.0)
        meta = {"order": p, "pairs": cfg.count, "dim": cfg.dim, "seed": cfg.seed, "t": cfg.t,
                "worst_ratio": rounded(worst), "error_column": "max measured error over pairs"}
        curves.append(Curve(name=f"oracle_order{p}", rows=rows, meta=meta))
        metrics[f"violations.order{p}"] = float(sum(not v.holds for v in vals))
        metrics[f"worst_ratio.order{p}"] = worst
    return RunResult(kind=cfg.kind, curves=curves, metrics=metrics)


_RUNNERS = {
    Kind.bound_derivation: _bound_derivation,
    Kind.hydrogen_bound_curve: _hydrogen_bound_curve,
    Kind.sim_sweep: _sim_sweep,
    Kind.ionization: _ionization,
    Kind.order_comparison: _order_comparison,
    Kind.oracle_battery: _oracle_battery,
}


def execute(cfg: ExperimentConfig, threads: int = 1) -> RunResult:
    result = _RUNNERS[cfg.kind](cfg, max(1, threads))
    checks = []
    for e in cfg.expect:
        v = result.metrics.get(e.metric)
        ok = v is not None and not math.isnan(v) and e.lo <= v <= e.hi
        checks.append(Assertion(metric=e.metric, lo=e.lo, hi=e.hi, value=v, passed=ok))
    result.assertions = checks
    return result


# --- rendering ---------------------------------------------------------------

def csv_text(curve: Curve) -> str:
    lines = ["N,error"]
    for x, y in curve.rows:
        xs = str(int(x)) if float(x).is_integer() else fmt(x)
        lines.append(f"{xs},{fmt(y)}")
    return "\n".join(lines) + "\n"


def _clean(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return rounded(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return _clean(obj.item())
    return obj


def dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def summary(cfg: ExperimentConfig, result: RunResult) -> dict:
    return {
        "kind": cfg.kind.value,
        "config": cfg.model_dump(mode="json", exclude={"out"}),
        "metrics": result.metrics,
        "assertions": [a.model_dump() for a in result.assertions],
        "artifacts": sorted([f"{c.name}.csv" for c in result.curves] + [f"{c.name}.json" for c in result.curves]
                            + [f"{k}.json" for k in result.documents]),
        "green": result.green,
    }


def render_files(cfg: ExperimentConfig, result: RunResult) -> dict[str, str]:
    """File name -> content for every artifact of a run, summary included."""
    files = {}
    for c in result.curves:
        files[f"{c.name}.csv"] = csv_text(c)
        files[f"{c.name}.json"] = dump_json({"name": c.name, "rows": len(c.rows), **c.meta})
    for name, doc in result.documents.items():
        files[f"{name}.json"] = dump_json(doc)
    files["summary.json"] = dump_json(summary(cfg, result))
    return files


def write_files(files: dict[str, str], out_dir: str | os.PathLike) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(files):
        p = out / name
        if p.resolve().parent != out.resolve():
            raise ValueError(f"artifact {name!r} would escape the output directory")
        p.write_text(files[name])
        written.append(p)
    return written


def write_artifacts(cfg: ExperimentConfig, result: RunResult, out_dir: str | os.PathLike) -> list[Path]:
    return write_files(render_files(cfg, result), out_dir)
