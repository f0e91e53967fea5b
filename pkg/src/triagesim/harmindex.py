"""Composite harm-index construction from the five hospitalization counts.

Four variants share one pipeline: columns are standardized (mean 0, sd 1,
n-1 convention) on a reference subsample, combined, and -- except for the
principal-component variant, which keeps its natural eigen-scale -- the
combination is restandardized on the same reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError

VARIANTS = ("equal_weight", "obrien", "binary", "pca1")

#: Column position used to orient the first principal component.
_INJURY_COL = 1


@dataclass
class OutcomeMatrix:
    """Children x five outcome counts, plus the standardization subsample."""

    counts: np.ndarray
    reference_mask: np.ndarray

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=float)
        self.reference_mask = np.asarray(self.reference_mask, dtype=bool)
        if self.counts.ndim != 2 or self.counts.shape[1] != 5:
            raise DataError("outcome matrix must be (n, 5)")
        if self.reference_mask.shape != (self.counts.shape[0],):
            raise DataError("reference_mask length must match rows")
        if (self.counts < 0).any():
            raise DataError("outcome counts must be >= 0")
        if self.reference_mask.sum() < 2:
            raise DataError("need >= 2 reference rows for standardization")


@dataclass(frozen=True)
class IndexSpec:
    variant: str = "equal_weight"
    standardization_sample: str = "control"  # "control" uses reference_mask, "full" all rows
    obrien_ridge: float = 0.0

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.standardization_sample not in ("control", "full"):
            raise ConfigError("standardization_sample must be 'control' or 'full'")


def standardize(column: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """(x - mean_ref) / sd_ref with the n-1 SD convention."""
    column = np.asarray(column, dtype=float)
    ref = column[np.asarray(reference, dtype=bool)]
    if ref.size < 2:
        raise DataError("reference subset must have >= 2 rows")
    sd = ref.std(ddof=1)
    if sd == 0:
        raise DataError("degenerate column: zero variance in the reference subset")
    return (column - ref.mean()) / sd


class IndexTransform:
    """Fitted index pipeline; reusable on new rows (e.g. a zero-count child)."""

    def __init__(self, outcomes: OutcomeMatrix, spec: IndexSpec):
        self.spec = spec
        mask = outcomes.reference_mask
        if spec.standardization_sample == "full":
            mask = np.ones(outcomes.counts.shape[0], dtype=bool)
        raw = outcomes.counts
        if spec.variant == "binary":
            raw = (raw > 0).astype(float)
        ref = raw[mask]
        self._col_mean = ref.mean(axis=0)
        self._col_sd = ref.std(axis=0, ddof=1)
        if (self._col_sd == 0).any():
            bad = int(np.flatnonzero(self._col_sd == 0)[0])
            raise DataError(f"degenerate column {bad}: zero variance in the reference subset")
        self._binary = spec.variant == "binary"
        xs_ref = (ref - self._col_mean) / self._col_sd

        if spec.variant in ("equal_weight", "binary"):
            self._weights = np.full(5, 0.2)
            self._restandardize = True
        elif spec.variant == "obrien":
            cov = np.cov(xs_ref, rowvar=False, ddof=1)
            if spec.obrien_ridge > 0:
                cov = cov + spec.obrien_ridge * np.eye(5)
            try:
                w = np.linalg.solve(cov, np.ones(5))
            except np.linalg.LinAlgError:
                raise DataError(
                    "singular covariance for obrien weights; pass obrien_ridge=1e-8"
                ) from None
            self._weights = w / w.sum()
            self._restandardize = True
        else:  # pca1
            cov = np.cov(xs_ref, rowvar=False, ddof=1)
            eigval, eigvec = np.linalg.eigh(cov)
            v = eigvec[:, -1]
            if v[_INJURY_COL] < 0:
                v = -v
            self._weights = v
            self._restandardize = False
            self.explained_variance = eigval[::-1]

        combined_ref = xs_ref @ self._weights
        self._comb_mean = combined_ref.mean()
        self._comb_sd = combined_ref.std(ddof=1)
        if self._restandardize and self._comb_sd == 0:
            raise DataError("degenerate index: zero variance of the combined reference column")

    def apply(self, counts: np.ndarray) -> np.ndarray:
        raw = np.asarray(counts, dtype=float)
        if self._binary:
            raw = (raw > 0).astype(float)
        xs = (raw - self._col_mean) / self._col_sd
        combined = xs @ self._weights
        if self._restandardize:
            return (combined - self._comb_mean) / self._comb_sd
        return combined - self._comb_mean


def harm_index(outcomes: OutcomeMatrix, spec: IndexSpec = IndexSpec()) -> np.ndarray:
    """Index values for every row; lower is better for the child."""
    return IndexTransform(outcomes, spec).apply(outcomes.counts)


def harm_floor_value(outcomes: OutcomeMatrix, spec: IndexSpec = IndexSpec()) -> float:
    """Index value of a child with zero events on all five outcomes: the
    lowest attainable value under the fitted standardization."""
    return float(IndexTransform(outcomes, spec).apply(np.zeros((1, 5)))[0])


def cronbach_alpha(outcomes) -> float:
    """k/(k-1) * (1 - sum(var_i)/var_total) over standardized columns."""
    counts = outcomes.counts if isinstance(outcomes, OutcomeMatrix) else np.asarray(outcomes, float)
    if counts.ndim != 2 or counts.shape[1] < 2:
        raise DataError("need a matrix with >= 2 columns")
    sd = counts.std(axis=0, ddof=1)
    if (sd == 0).any():
        raise DataError("zero-variance column; alpha undefined")
    xs = (counts - counts.mean(axis=0)) / sd
    k = xs.shape[1]
    total_var = xs.sum(axis=1).var(ddof=1)
    if total_var == 0:
        raise DataError("zero total variance; alpha undefined")
    return float(k / (k - 1) * (1 - k / total_var))


def top_percentile_flag(index: np.ndarray, q: float, tie_order: np.ndarray | None = None) -> np.ndarray:
    """Flag the ceil(q*N) largest index values over the pooled sample.

    Ties are broken by ``tie_order`` (defaults to row position), so the flag
    count is exact regardless of duplicates.
    """
    if not 0.0 < q < 1.0:
        raise ConfigError("q must be in (0, 1)")
    index = np.asarray(index, dtype=float)
    n = index.size
    k = int(np.ceil(q * n))
    if tie_order is None:
        tie_order = np.arange(n)
    order = np.lexsort((np.asarray(tie_order), -index))
    flags = np.zeros(n, dtype=bool)
    flags[order[:k]] = True
    return flags
