"""Command-line front end: ingest datasets, run analyses, emit reports.

Machine-readable JSON goes to stdout, a short human summary to stderr, so
output can be piped into other tools. Exit codes: 0 success, 1 usage error,
2 data/validation error, 3 fit non-convergence. Floats in emitted JSON are
rounded to 9 significant digits so repeated runs over the same workspace are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .correlate import (
    CorrelationField,
    binned_trend,
    correlation_matrix,
    cross_measure_correlation,
    dynamic_correlation,
)
from .distfit import (
    GumbelParams,
    Scaling,
    empirical_pdf,
    gumbel_curve_ks,
    gumbel_fit,
    pareto_tail_fit,
    pdf_peak_location,
    zipf_pareto_predict,
)
from .errors import CitemetricsError, FitConvergenceError, ValidationError, WorkspaceError
from .indices import derive_rates
from .ingest import load_dataset, parse_csv, read_manifest, store_dataset, write_csv
from .model import Basis, Discipline, FitMethod, FitResult, RankedSet, build_ranked_set
from .rankstats import (
    Measure,
    basis_measure,
    rank_series,
    scale_by_mean,
    set_overlap,
    write_series_csv,
    zipf_fit,
)
from .synthgen import FixtureProfile, build_fixture, fixture_metadata

WORKSPACE_ENV = "CITEMETRICS_WORKSPACE"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise UsageError(message)


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(payload: dict, summary: str) -> None:
    print(json.dumps(_round_floats(payload), sort_keys=True, indent=2))
    print(summary, file=sys.stderr)


def _parse_spec(spec: str) -> tuple[Discipline, Basis, int]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"bad dataset spec {spec!r}, expected discipline:basis:year")
    try:
        discipline = Discipline(parts[0])
        basis = Basis(parts[1])
        year = int(parts[2])
    except ValueError:
        raise UsageError(
            f"bad dataset spec {spec!r}: discipline in (sci, socsci), "
            "basis in (citations, if), year an integer"
        ) from None
    return discipline, basis, year


def _workspace(args) -> Path:
    if args.workspace:
        return Path(args.workspace)
    env = os.environ.get(WORKSPACE_ENV)
    if env:
        return Path(env)
    raise UsageError(f"no workspace given: pass --workspace or set {WORKSPACE_ENV}")


def _load(args, spec: str) -> RankedSet:
    discipline, basis, year = _parse_spec(spec)
    return load_dataset(_workspace(args), discipline, basis, year)


_MEASURES = {"n": Measure.CITATIONS, "if": Measure.IMPACT_FACTOR, "cr": Measure.RATE}
_FIELDS = {
    "rank": CorrelationField.RANK,
    "n": CorrelationField.CITATIONS,
    "if": CorrelationField.IMPACT_FACTOR,
    "cr": CorrelationField.RATE,
}


def _fit_json(measure: str, fit: FitResult, extra: dict | None = None) -> dict:
    payload = {
        "measure": measure,
        "method": fit.method.value,
        "params": dict(fit.params),
        "stderr": dict(fit.stderr),
        "fit_range": list(fit.fit_range),
    }
    if extra:
        payload.update(extra)
    return payload


def _scaled_rates(ranked: RankedSet) -> tuple[np.ndarray, int]:
    derivation = derive_rates(ranked)
    rates = np.array([r for _, r in derivation.rates])
    return rates / rates.mean(), len(derivation.dropped)


def _curve_points(ranked: RankedSet) -> int:
    # reference curves use 12 points for citation-ranked sets, 14 otherwise
    return 12 if ranked.basis is Basis.CITATIONS else 14


# --- subcommand handlers -----------------------------------------------------


def _cmd_ingest(args) -> None:
    records = parse_csv(args.input)
    discipline = Discipline(args.discipline)
    basis = Basis(args.basis)
    ranked = build_ranked_set(records, discipline, basis, args.year, cap=args.top)
    entry = store_dataset(_workspace(args), ranked, overwrite=args.overwrite)
    _emit(
        {"stored": entry},
        f"ingested {len(ranked)} rows as "
        f"{discipline.value}:{basis.value}:{args.year}",
    )


def _cmd_rank(args) -> None:
    ranked = _load(args, args.set)
    series = rank_series(ranked, _MEASURES[args.measure])
    if args.collapse:
        series = scale_by_mean(series)
    payload = {
        "label": series.label.text(),
        "collapsed": bool(args.collapse),
        "ranks": list(series.ranks),
        "values": list(series.values),
    }
    if args.emit:
        write_series_csv(args.emit, series.label.text(), series.ranks, series.values)
        payload["written"] = args.emit
    _emit(payload, f"rank series {series.label.text()}: {len(series)} points")


def _cmd_fit_zipf(args) -> None:
    ranked = _load(args, args.set)
    series = rank_series(ranked, _MEASURES[args.measure])
    fit = zipf_fit(series, k_min=args.kmin)
    payload = _fit_json(args.measure, fit)
    payload["pareto_prediction"] = zipf_pareto_predict(fit.params["b"]) if fit.params["b"] > 0 else None
    _emit(
        payload,
        f"zipf fit {series.label.text()}: b = {fit.params['b']:.4f} "
        f"± {fit.stderr['b']:.4f}",
    )


def _cmd_dist(args) -> None:
    ranked = _load(args, args.set)
    measure = _MEASURES[args.measure]
    if measure is Measure.RATE:
        derivation = derive_rates(ranked)
        samples = [r for _, r in derivation.rates]
    else:
        series = rank_series(ranked, measure)
        samples = list(series.values)
    scaling = Scaling.MEAN_SCALED if args.collapse else Scaling.RAW
    dist = empirical_pdf(samples, binning=args.binning, scaling=scaling)
    centers = [float(c) for c in dist.centers()]
    payload = {
        "measure": args.measure,
        "binning": args.binning,
        "scaling": dist.scaling.value,
        "n_samples": dist.n_samples,
        "bin_edges": list(dist.bin_edges),
        "densities": list(dist.densities),
    }
    if scaling is Scaling.MEAN_SCALED:
        payload["peak"] = pdf_peak_location(dist)
    if args.emit:
        write_series_csv(args.emit, f"{args.set}:{args.measure}:pdf", centers, dist.densities)
        payload["written"] = args.emit
    _emit(payload, f"pdf {args.set}:{args.measure}: {len(centers)} bins")


def _cmd_fit_pareto(args) -> None:
    ranked = _load(args, args.set)
    measure = _MEASURES[args.measure]
    if measure is Measure.RATE:
        samples = [r for _, r in derive_rates(ranked).rates]
    else:
        samples = list(rank_series(ranked, measure).values)
    x_min = None if args.xmin == "auto" else float(args.xmin)
    fit = pareto_tail_fit(samples, x_min=x_min)
    _emit(
        _fit_json(args.measure, fit),
        f"pareto tail {args.set}:{args.measure}: gamma = "
        f"{fit.params['gamma']:.4f} ± {fit.stderr['gamma']:.4f} "
        f"(x_min = {fit.params['x_min']:.4g})",
    )


def _cmd_fit_gumbel(args) -> None:
    ranked = _load(args, args.set)
    scaled, dropped = _scaled_rates(ranked)
    method = (
        FitMethod.MAXIMUM_LIKELIHOOD if args.method == "mle"
        else FitMethod.LOG_LOG_LEAST_SQUARES
    )
    params, fit = gumbel_fit(scaled, method=method)
    ks = gumbel_curve_ks(scaled, params, _curve_points(ranked))
    payload = _fit_json("cr", fit, {"ks": ks, "dropped_zero_articles": dropped})
    _emit(
        payload,
        f"log-gumbel fit {args.set}: a = {params.a:.4f}, b = {params.b:.4f}, "
        f"KS D = {ks['D']:.4f} ({'pass' if ks['pass'] else 'FAIL'})",
    )


def _cmd_ks(args) -> None:
    ranked = _load(args, args.set)
    fit_payload = json.loads(Path(args.fit).read_text(encoding="utf-8"))
    try:
        params = GumbelParams(
            a=float(fit_payload["params"]["a"]), b=float(fit_payload["params"]["b"])
        )
        log_base = float(fit_payload["params"].get("log_base", math.e))
    except (KeyError, TypeError):
        raise ValidationError(
            f"{args.fit}: expected a fit report with params.a and params.b"
        ) from None
    scaled, _ = _scaled_rates(ranked)
    ks = gumbel_curve_ks(
        scaled, params, _curve_points(ranked),
        log_base=log_base, significance=args.significance,
    )
    _emit(
        {"set": args.set, "ks": ks},
        f"KS {args.set}: D = {ks['D']:.4f} vs critical {ks['critical']:.3f} "
        f"at s = {args.significance} -> {'pass' if ks['pass'] else 'FAIL'}",
    )


def _cmd_correlate(args) -> None:
    pair_mode = args.a is not None or args.b is not None
    cross_mode = args.set is not None or args.x is not None or args.y is not None
    if pair_mode == cross_mode:
        raise UsageError("use either --a/--b/--field or --set/--x/--y")
    if pair_mode:
        if not (args.a and args.b and args.field):
            raise UsageError("pair correlation needs --a, --b and --field")
        report = dynamic_correlation(
            _load(args, args.a), _load(args, args.b), _FIELDS[args.field]
        )
    else:
        if not (args.set and args.x and args.y):
            raise UsageError("cross-measure correlation needs --set, --x and --y")
        report = cross_measure_correlation(
            _load(args, args.set), _FIELDS[args.x], _FIELDS[args.y]
        )
    _emit(
        report.as_dict(),
        f"R = {report.r_value:.4f} over {report.n_pairs} pairs "
        f"({report.transform.value})",
    )


def _cmd_overlap(args) -> None:
    common, count = set_overlap(_load(args, args.a), _load(args, args.b))
    _emit(
        {"a": args.a, "b": args.b, "count": count, "common_ids": list(common)},
        f"overlap {args.a} ~ {args.b}: {count} journals",
    )


def _cmd_trend(args) -> None:
    ranked = _load(args, args.set)
    extract = {
        "articles": lambda r: float(r.articles),
        "n": lambda r: float(r.citations),
        "if": lambda r: float(r.impact_factor),
        "cr": lambda r: r.citations / r.articles if r.articles else None,
    }
    pairs = [
        (extract[args.x](rec), extract[args.y](rec))
        for rec in ranked.records
    ]
    pairs = [(x, y) for x, y in pairs if x is not None and y is not None]
    xs, ys = zip(*pairs)
    rows = binned_trend(xs, ys, n_bins=args.bins)
    payload = {
        "set": args.set,
        "x": args.x,
        "y": args.y,
        "bins": [{"center": c, "mean": m, "stderr": s} for c, m, s in rows],
    }
    _emit(payload, f"trend {args.y} vs {args.x} over {len(rows)} bins")


def _cmd_synth(args) -> None:
    fixture = build_fixture(args.profile, args.year, args.seed)
    write_csv(args.out, fixture.records)
    meta = fixture_metadata(args.profile, args.year, args.seed)
    meta_path = Path(args.out).with_suffix(Path(args.out).suffix + ".meta.json")
    meta_path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    _emit(
        {"written": str(args.out), "metadata": str(meta_path), "rows": len(fixture)},
        f"synthesized {args.profile}:{args.year} (seed {args.seed}) -> {args.out}",
    )


def _dataset_report(ranked: RankedSet) -> dict:
    basis_m = basis_measure(ranked.basis)
    series = rank_series(ranked, basis_m)
    zipf = zipf_fit(series)
    out = {
        "discipline": ranked.discipline.value,
        "basis": ranked.basis.value,
        "year": ranked.year,
        "rows": len(ranked),
        "zipf": _fit_json(basis_m.value, zipf),
        "pareto_predicted_gamma": zipf_pareto_predict(zipf.params["b"])
        if zipf.params["b"] > 0
        else None,
    }
    try:
        pareto = pareto_tail_fit(list(series.values))
        out["pareto"] = _fit_json(basis_m.value, pareto)
    except ValidationError as exc:
        out["pareto"] = {"error": str(exc)}
    try:
        scaled, dropped = _scaled_rates(ranked)
        params, gum = gumbel_fit(scaled)
        ks = gumbel_curve_ks(scaled, params, _curve_points(ranked))
        dist = empirical_pdf(scaled, binning="log", scaling=Scaling.MEAN_SCALED)
        out["gumbel"] = _fit_json("cr", gum, {"ks": ks})
        out["cr_peak"] = pdf_peak_location(dist)
        out["dropped_zero_articles"] = dropped
    except (ValidationError, FitConvergenceError) as exc:
        out["gumbel"] = {"error": str(exc)}
    return out


def _cmd_report(args) -> None:
    workspace = _workspace(args)
    entries = read_manifest(workspace)
    if not entries:
        raise WorkspaceError(f"workspace {workspace} holds no datasets")
    entries = sorted(entries, key=lambda e: (e["discipline"], e["basis"], e["year"]))

    datasets = {}
    for e in entries:
        key = (e["discipline"], e["basis"], e["year"])
        datasets[key] = load_dataset(
            workspace, Discipline(e["discipline"]), Basis(e["basis"]), e["year"]
        )

    report = {"datasets": [_dataset_report(ds) for ds in datasets.values()]}

    groups: dict[tuple[str, str], list[RankedSet]] = {}
    for (disc, basis, _year), ds in datasets.items():
        groups.setdefault((disc, basis), []).append(ds)

    dynamics = []
    overlaps = []
    for (disc, basis), sets in sorted(groups.items()):
        if len(sets) < 2:
            continue
        value_field = (
            CorrelationField.CITATIONS
            if Basis(basis) is Basis.CITATIONS
            else CorrelationField.IMPACT_FACTOR
        )
        years, rank_cells = correlation_matrix(sets, CorrelationField.RANK)
        _, value_cells = correlation_matrix(sets, value_field)
        for i, yi in enumerate(years):
            for yj in years[i + 1:]:
                rank_cell = rank_cells[(yi, yj)]
                value_cell = value_cells[(yi, yj)]
                dynamics.append(
                    {
                        "discipline": disc,
                        "basis": basis,
                        "year_a": yi,
                        "year_b": yj,
                        "rank": rank_cell.as_dict() if not isinstance(rank_cell, str) else {"error": rank_cell},
                        "value": value_cell.as_dict() if not isinstance(value_cell, str) else {"error": value_cell},
                    }
                )
        by_year = {ds.year: ds for ds in sets}
        years_sorted = sorted(by_year)
        for ya, yb in zip(years_sorted, years_sorted[1:]):
            _, count = set_overlap(by_year[ya], by_year[yb])
            overlaps.append(
                {"discipline": disc, "basis": basis, "year_a": ya, "year_b": yb, "count": count}
            )
    report["dynamic_correlations"] = dynamics
    report["consecutive_overlaps"] = overlaps

    cross = []
    trends = []
    for (disc, basis, year), ds in sorted(datasets.items()):
        other = (
            CorrelationField.IMPACT_FACTOR
            if Basis(basis) is Basis.CITATIONS
            else CorrelationField.CITATIONS
        )
        try:
            rep = cross_measure_correlation(ds, other, CorrelationField.RATE)
            cross.append(
                {"discipline": disc, "basis": basis, "year": year, **rep.as_dict()}
            )
        except ValidationError as exc:
            cross.append(
                {"discipline": disc, "basis": basis, "year": year, "error": str(exc)}
            )
        xs = [float(r.articles) for r in ds.records if r.articles > 0]
        ys = [r.impact_factor for r in ds.records if r.articles > 0]
        rows = binned_trend(xs, ys)
        trends.append(
            {
                "discipline": disc,
                "basis": basis,
                "year": year,
                "x": "articles",
                "y": "if",
                "bins": [{"center": c, "mean": m, "stderr": s} for c, m, s in rows],
            }
        )
    report["cross_measure_correlations"] = cross
    report["if_vs_articles_trends"] = trends

    text = json.dumps(_round_floats(report), sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    print(
        f"report over {len(datasets)} datasets"
        + (f" -> {args.out}" if args.out else ""),
        file=sys.stderr,
    )


# --- parser ------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="citemetrics", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=handler)
        p.add_argument("--workspace", default=None, help=f"dataset workspace (default ${WORKSPACE_ENV})")
        return p

    p = add("ingest", _cmd_ingest, help="parse a CSV and store it as a ranked dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--discipline", required=True, choices=[d.value for d in Discipline])
    p.add_argument("--basis", required=True, choices=[b.value for b in Basis])
    p.add_argument("--year", required=True, type=int)
    p.add_argument("--top", type=int, default=1000)
    p.add_argument("--overwrite", action="store_true")

    p = add("rank", _cmd_rank, help="rank series of a measure")
    p.add_argument("--set", required=True)
    p.add_argument("--measure", required=True, choices=list(_MEASURES))
    p.add_argument("--collapse", action="store_true")
    p.add_argument("--emit", default=None)

    p = add("fit-zipf", _cmd_fit_zipf, help="log-log rank-law fit")
    p.add_argument("--set", required=True)
    p.add_argument("--measure", required=True, choices=list(_MEASURES))
    p.add_argument("--kmin", type=int, default=10)

    p = add("dist", _cmd_dist, help="binned probability density of a measure")
    p.add_argument("--set", required=True)
    p.add_argument("--measure", required=True, choices=list(_MEASURES))
    p.add_argument("--binning", default="log", choices=["log", "linear"])
    p.add_argument("--collapse", action="store_true")
    p.add_argument("--emit", default=None)

    p = add("fit-pareto", _cmd_fit_pareto, help="maximum-likelihood tail exponent")
    p.add_argument("--set", required=True)
    p.add_argument("--measure", required=True, choices=list(_MEASURES))
    p.add_argument("--xmin", default="auto")

    p = add("fit-gumbel", _cmd_fit_gumbel, help="log-Gumbel fit of the citation-rate collapse")
    p.add_argument("--set", required=True)
    p.add_argument("--method", default="mle", choices=["mle", "lsq"])

    p = add("ks", _cmd_ks, help="KS check of the rate curve against a stored fit")
    p.add_argument("--set", required=True)
    p.add_argument("--fit", required=True, help="fit report JSON (from fit-gumbel)")
    p.add_argument("--significance", type=float, default=0.20)

    p = add("correlate", _cmd_correlate, help="year-pair or cross-measure correlation")
    p.add_argument("--a", default=None)
    p.add_argument("--b", default=None)
    p.add_argument("--field", default=None, choices=list(_FIELDS))
    p.add_argument("--set", default=None)
    p.add_argument("--x", default=None, choices=["n", "if", "cr"])
    p.add_argument("--y", default=None, choices=["n", "if", "cr"])

    p = add("overlap", _cmd_overlap, help="journals common to two datasets")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = add("trend", _cmd_trend, help="binned mean of one measure over another")
    p.add_argument("--set", required=True)
    p.add_argument("--x", required=True, choices=["articles", "n", "if", "cr"])
    p.add_argument("--y", required=True, choices=["articles", "n", "if", "cr"])
    p.add_argument("--bins", type=int, default=10)

    p = add("synth", _cmd_synth, help="generate a synthetic fixture dataset")
    p.add_argument("--profile", required=True, choices=[f.value for f in FixtureProfile])
    p.add_argument("--year", required=True, type=int)
    p.add_argument("--seed", type=int, default=20001000)
    p.add_argument("--out", required=True)

    p = add("report", _cmd_report, help="full analysis over every stored dataset")
    p.add_argument("--out", default=None)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args.handler(args)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FitConvergenceError as exc:
        print(f"fit did not converge: {exc}", file=sys.stderr)
        return 3
    except (CitemetricsError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
