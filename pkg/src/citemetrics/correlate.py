"""Correlation analyses: log-Pearson coefficients, year-to-year and cross-measure
correlations, binned trends.

All coefficients are the plain sample correlation

    R = sum((x - x_bar)(y - y_bar)) / sqrt(sum((x - x_bar)^2) sum((y - y_bar)^2)),

computed after an optional transform: LogLog takes logarithms of both series
(covering power-law dependence), RankRank correlates rank pairs, Identity uses
values as given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .model import RankedSet
from .rankstats import set_overlap

MIN_PAIRS = 2


class Transform(str, Enum):
    LOG_LOG = "log_log"
    RANK_RANK = "rank_rank"
    IDENTITY = "identity"


class CorrelationField(str, Enum):
    """Per-journal quantities available for year-to-year correlation."""

    RANK = "rank"
    CITATIONS = "n"
    IMPACT_FACTOR = "if"
    RATE = "cr"


@dataclass(frozen=True)
class CorrelationReport:
    r_value: float
    n_pairs: int
    transform: Transform
    subjects: tuple[str, str]
    dropped_pairs: int = 0

    def __post_init__(self):
        if abs(self.r_value) > 1 + 1e-12:
            raise ValidationError(f"|R| must be <= 1, got {self.r_value!r}")
        if self.n_pairs < MIN_PAIRS:
            raise ValidationError(f"need at least {MIN_PAIRS} pairs, got {self.n_pairs}")

    def as_dict(self) -> dict:
        return {
            "subjects": list(self.subjects),
            "transform": self.transform.value,
            "n_pairs": self.n_pairs,
            "r_value": self.r_value,
            "dropped_pairs": self.dropped_pairs,
        }


def pearson(
    xs: Sequence[float],
    ys: Sequence[float],
    transform: Transform = Transform.IDENTITY,
    subjects: tuple[str, str] = ("x", "y"),
) -> CorrelationReport:
    """Sample correlation of two aligned series under a transform.

    Under LogLog, pairs with a non-positive member are dropped and counted
    rather than aborting: truncated real tables contain occasional zeros.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError(
            f"series must be 1-d and equally long, got {x.shape} and {y.shape}"
        )
    dropped = 0
    if transform is Transform.LOG_LOG:
        keep = (x > 0) & (y > 0)
        dropped = int(x.size - keep.sum())
        x, y = np.log(x[keep]), np.log(y[keep])
    if x.size < MIN_PAIRS:
        raise ValidationError(f"need at least {MIN_PAIRS} usable pairs, have {x.size}")

    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.sum(dx * dx))
    syy = float(np.sum(dy * dy))
    if sxx == 0.0 or syy == 0.0:
        raise ValidationError("degenerate series: zero variance after transform")
    r = float(np.sum(dx * dy) / math.sqrt(sxx * syy))
    r = max(-1.0, min(1.0, r))
    return CorrelationReport(
        r_value=r,
        n_pairs=int(x.size),
        transform=transform,
        subjects=subjects,
        dropped_pairs=dropped,
    )


def _field_values(ranked: RankedSet, field_: CorrelationField) -> dict[str, float]:
    values: dict[str, float] = {}
    for pos, rec in enumerate(ranked.records, start=1):
        if field_ is CorrelationField.RANK:
            values[rec.journal_id] = float(pos)
        elif field_ is CorrelationField.CITATIONS:
            values[rec.journal_id] = float(rec.citations)
        elif field_ is CorrelationField.IMPACT_FACTOR:
            values[rec.journal_id] = float(rec.impact_factor)
        else:
            if rec.articles > 0:
                values[rec.journal_id] = rec.citations / rec.articles
    return values


def _label(ranked: RankedSet, field_name: str) -> str:
    return f"{ranked.discipline.value}:{ranked.basis.value}:{ranked.year}:{field_name}"


def dynamic_correlation(
    year_a: RankedSet, year_b: RankedSet, field_: CorrelationField
) -> CorrelationReport:
    """Correlation of one field across two years, over the common journals.

    Ranks correlate as rank pairs; values correlate on log scale.
    """
    if year_a.basis is not year_b.basis or year_a.discipline is not year_b.discipline:
        raise ValidationError("dynamic correlation requires matching discipline and basis")
    common, count = set_overlap(year_a, year_b)
    if count < MIN_PAIRS:
        raise ValidationError(f"overlap of {count} journals is too small to correlate")
    va = _field_values(year_a, field_)
    vb = _field_values(year_b, field_)
    ids = [j for j in common if j in va and j in vb]
    xs = [va[j] for j in ids]
    ys = [vb[j] for j in ids]
    transform = (
        Transform.RANK_RANK if field_ is CorrelationField.RANK else Transform.LOG_LOG
    )
    report = pearson(
        xs,
        ys,
        transform=transform,
        subjects=(_label(year_a, field_.value), _label(year_b, field_.value)),
    )
    return report


def cross_measure_correlation(
    ranked: RankedSet, measure_x: CorrelationField, measure_y: CorrelationField
) -> CorrelationReport:
    """Correlation between two measures within one set, on log scale."""
    if measure_x is CorrelationField.RANK or measure_y is CorrelationField.RANK:
        raise ValidationError("cross-measure correlation is between value measures")
    vx = _field_values(ranked, measure_x)
    vy = _field_values(ranked, measure_y)
    ids = [j for j in vx if j in vy]
    if len(ids) < MIN_PAIRS:
        raise ValidationError("fewer than 2 journals have both measures")
    xs = [vx[j] for j in ids]
    ys = [vy[j] for j in ids]
    return pearson(
        xs,
        ys,
        transform=Transform.LOG_LOG,
        subjects=(_label(ranked, measure_x.value), _label(ranked, measure_y.value)),
    )


def binned_trend(
    xs: Sequence[float],
    ys: Sequence[float],
    bin_edges: Sequence[float] | None = None,
    n_bins: int = 10,
) -> list[tuple[float, float, float]]:
    """Mean of y over x-bins with standard errors; empty bins omitted.

    Default bins are ``n_bins`` equal-width intervals over the x range.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ValidationError("xs and ys must be equally long 1-d series")
    if bin_edges is None:
        lo, hi = float(x.min()), float(x.max())
        if not hi > lo:
            hi = lo + 1.0
        edges = np.linspace(lo, hi, n_bins + 1)
    else:
        edges = np.asarray(bin_edges, dtype=float)
        if edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValidationError("bin edges must be strictly increasing")

    idx = np.searchsorted(edges, x, side="right") - 1
    idx[x == edges[-1]] = edges.size - 2
    out = []
    for i in range(edges.size - 1):
        sel = y[(idx == i) & (x >= edges[0]) & (x <= edges[-1])]
        if sel.size == 0:
            continue
        center = 0.5 * (edges[i] + edges[i + 1])
        mean = float(sel.mean())
        if sel.size < 2 or np.all(sel == sel[0]):
            stderr = 0.0
        else:
            stderr = float(sel.std(ddof=1) / math.sqrt(sel.size))
        out.append((center, mean, stderr))
    return out


def correlation_matrix(
    ranked_sets: Sequence[RankedSet], field_: CorrelationField
) -> tuple[tuple[int, ...], dict[tuple[int, int], CorrelationReport | str]]:
    """All-pairs year correlation matrix for one discipline+basis.

    Returns the sorted years and a cell map keyed by (year_i, year_j).
    Diagonal cells are exact R = 1 reports; failed cells carry the error
    message instead of a report. The matrix is symmetric by construction.
    """
    if len(ranked_sets) < 2:
        raise ValidationError("need at least two years for a correlation matrix")
    by_year = {rs.year: rs for rs in ranked_sets}
    if len(by_year) != len(ranked_sets):
        raise ValidationError("duplicate years in correlation matrix input")
    years = tuple(sorted(by_year))
    cells: dict[tuple[int, int], CorrelationReport | str] = {}
    for yi in years:
        for yj in years:
            if yj < yi:
                cells[(yi, yj)] = cells[(yj, yi)]
                continue
            if yi == yj:
                rs = by_year[yi]
                cells[(yi, yj)] = CorrelationReport(
                    r_value=1.0,
                    n_pairs=len(rs),
                    transform=Transform.RANK_RANK
                    if field_ is CorrelationField.RANK
                    else Transform.LOG_LOG,
                    subjects=(_label(rs, field_.value), _label(rs, field_.value)),
                )
                continue
            try:
                cells[(yi, yj)] = dynamic_correlation(by_year[yi], by_year[yj], field_)
            except ValidationError as exc:
                cells[(yi, yj)] = str(exc)
    return years, cells
