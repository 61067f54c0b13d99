"""Core domain types: journal-year records, ranked journal sets, fit results.

All types are immutable after construction and validate their invariants in
``__post_init__``, so a constructed object can be shared freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import ValidationError

DEFAULT_CAP = 1000


class Discipline(str, Enum):
    SCI = "sci"
    SOCSCI = "socsci"


class Basis(str, Enum):
    """Ranking basis: Set I orders journals by annual citations, Set II by impact factor."""

    CITATIONS = "citations"
    IMPACT_FACTOR = "if"


class FitMethod(str, Enum):
    LOG_LOG_LEAST_SQUARES = "log_log_least_squares"
    MAXIMUM_LIKELIHOOD = "maximum_likelihood"


@dataclass(frozen=True)
class JournalYearRecord:
    """One journal in one calendar year.

    Attributes
    ----------
    journal_id : str
        Opaque non-empty key, unique within a ranked set.
    year : int
        Calendar year the counts refer to.
    citations : int
        Annual citations n: all citations received this year, >= 0.
    impact_factor : float
        Impact factor I as supplied by the source table, >= 0.
    articles : int
        Articles N published this year, >= 0.
    """

    journal_id: str
    year: int
    citations: int
    impact_factor: float
    articles: int

    def __post_init__(self):
        if not self.journal_id:
            raise ValidationError("journal_id must be a non-empty string")
        if not isinstance(self.citations, int) or self.citations < 0:
            raise ValidationError(
                f"{self.journal_id!r}: citations must be a non-negative integer, "
                f"got {self.citations!r}"
            )
        if not isinstance(self.articles, int) or self.articles < 0:
            raise ValidationError(
                f"{self.journal_id!r}: articles must be a non-negative integer, "
                f"got {self.articles!r}"
            )
        if not math.isfinite(self.impact_factor) or self.impact_factor < 0:
            raise ValidationError(
                f"{self.journal_id!r}: impact_factor must be finite and >= 0, "
                f"got {self.impact_factor!r}"
            )


def basis_value(record: JournalYearRecord, basis: Basis) -> float:
    """Value of the ranking basis field for one record."""
    if basis is Basis.CITATIONS:
        return float(record.citations)
    return float(record.impact_factor)


@dataclass(frozen=True)
class RankedSet:
    """A discipline+basis+year labelled collection, sorted by the basis field.

    Records are ordered non-increasing in the basis value; ties break by
    ascending journal_id so that ranking is deterministic. The rank of
    ``records[i]`` is ``i + 1``.
    """

    discipline: Discipline
    basis: Basis
    year: int
    records: tuple[JournalYearRecord, ...]
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.cap < 1:
            raise ValidationError(f"cap must be >= 1, got {self.cap}")
        if not self.records:
            raise ValidationError("a RankedSet cannot be empty")
        if len(self.records) > self.cap:
            raise ValidationError(
                f"{len(self.records)} records exceed cap {self.cap}"
            )
        seen = set()
        for rec in self.records:
            if rec.year != self.year:
                raise ValidationError(
                    f"{rec.journal_id!r}: record year {rec.year} != set year {self.year}"
                )
            if rec.journal_id in seen:
                raise ValidationError(f"duplicate journal_id {rec.journal_id!r}")
            seen.add(rec.journal_id)
        for prev, cur in zip(self.records, self.records[1:]):
            pv, cv = basis_value(prev, self.basis), basis_value(cur, self.basis)
            if cv > pv or (cv == pv and cur.journal_id < prev.journal_id):
                raise ValidationError(
                    f"records out of order at {cur.journal_id!r}: "
                    "must be non-increasing in basis value, ties by ascending id"
                )

    def __len__(self) -> int:
        return len(self.records)

    def rank_of(self, journal_id: str) -> int:
        """1-based rank of a journal; raises if absent."""
        for i, rec in enumerate(self.records):
            if rec.journal_id == journal_id:
                return i + 1
        raise KeyError(journal_id)

    def journal_ids(self) -> tuple[str, ...]:
        return tuple(rec.journal_id for rec in self.records)

    def basis_values(self) -> tuple[float, ...]:
        return tuple(basis_value(rec, self.basis) for rec in self.records)


@dataclass(frozen=True)
class FitResult:
    """Fitted parameters with per-parameter standard errors and provenance.

    ``params`` and ``stderr`` are parallel name->value mappings; ``fit_range``
    is the (lower, upper) interval of the independent variable actually used.
    """

    params: dict[str, float]
    stderr: dict[str, float]
    fit_range: tuple[float, float]
    method: FitMethod

    def __post_init__(self):
        lo, hi = self.fit_range
        if not lo < hi:
            raise ValidationError(f"fit_range lower must be < upper, got ({lo}, {hi})")
        if set(self.params) != set(self.stderr):
            raise ValidationError("params and stderr must carry the same parameter names")
        for name, err in self.stderr.items():
            if err < 0 or not math.isfinite(err):
                raise ValidationError(f"stderr[{name!r}] must be finite and >= 0, got {err}")


def build_ranked_set(
    records: Iterable[JournalYearRecord],
    discipline: Discipline,
    basis: Basis,
    year: int,
    cap: int = DEFAULT_CAP,
) -> RankedSet:
    """Sort, deduplicate and truncate records into a RankedSet.

    Records sort non-increasing by the basis field, ties broken by ascending
    journal_id. Exact duplicate records collapse silently; the same id with
    conflicting values is rejected. Only the top ``cap`` records are kept.
    """
    if cap < 1:
        raise ValidationError(f"cap must be >= 1, got {cap}")
    records = list(records)
    if not records:
        raise ValidationError("cannot rank an empty record list")

    by_id: dict[str, JournalYearRecord] = {}
    for rec in records:
        if rec.year != year:
            raise ValidationError(
                f"{rec.journal_id!r}: record year {rec.year} does not match set year {year}"
            )
        prior = by_id.get(rec.journal_id)
        if prior is None:
            by_id[rec.journal_id] = rec
        elif prior != rec:
            raise ValidationError(
                f"duplicate journal_id {rec.journal_id!r} with conflicting values"
            )

    ordered = sorted(
        by_id.values(), key=lambda r: (-basis_value(r, basis), r.journal_id)
    )
    return RankedSet(
        discipline=discipline,
        basis=basis,
        year=year,
        records=tuple(ordered[:cap]),
        cap=cap,
    )
