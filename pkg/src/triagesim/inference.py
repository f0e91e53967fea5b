"""Estimation machinery: cluster-robust OLS, randomization inference,
balance/first-stage/IV, disparity interactions, spillovers, power,
compliance bounds, and the four targeting tests.

Conventions fixed across the module: CR1 small-sample factor
G/(G-1) * (N-1)/(N-K) on the clustered sandwich, a t reference distribution
with G-1 degrees of freedom, and randomization-control indicators (one per
sibling-group size > 1 among individually-assigned children) included
wherever the design calls for them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import stats

from .errors import ConfigError, DataError, EstimationError

_RANK_TOL = 1e-9


@dataclass(frozen=True)
class TermStats:
    coefficient: float
    se: float
    t: float
    p: float


@dataclass(frozen=True)
class RegressionSpec:
    outcome: str
    focal: str | tuple[str, ...]
    controls: tuple[str, ...] = ()
    cluster: str = "household_id"
    sample_filter: str | None = None  # pandas query string

    def focal_terms(self) -> tuple[str, ...]:
        return (self.focal,) if isinstance(self.focal, str) else tuple(self.focal)


@dataclass
class RegressionResult:
    estimates: dict[str, TermStats]
    n_obs: int
    n_clusters: int
    dropped: tuple[str, ...] = ()
    permutation_p: float | None = None
    joint_tests: dict[str, float] | None = None
    derived: dict[str, float] | None = None
    influence: dict | None = None  # term -> (cluster ids, per-cluster scores)
    vcov: np.ndarray | None = field(default=None, repr=False)
    term_names: tuple[str, ...] = field(default=(), repr=False)


def randomization_control_columns(data: pd.DataFrame) -> tuple[pd.DataFrame, tuple[str, ...]]:
    """Attach indicator columns for each sibling-group size > 1 among
    individually-assigned children; returns (frame, column names)."""
    if "assigned_individually" not in data.columns:
        return data, ()
    names = []
    out = data
    sizes = np.sort(data.loc[data["assigned_individually"], "sibling_count"].unique())
    add = {}
    for s in sizes:
        if s <= 1:
            continue
        col = f"rc_size_{int(s)}"
        vals = (data["assigned_individually"] & (data["sibling_count"] == s)).astype(float)
        if vals.sum() > 0:
            add[col] = vals
            names.append(col)
    if add:
        out = data.assign(**add)
    return out, tuple(names)


def _build_design(df: pd.DataFrame, spec: RegressionSpec) -> tuple[np.ndarray, list[str], tuple[str, ...]]:
    """[const | focal | controls] with collinear controls dropped."""
    focal = spec.focal_terms()
    for col in (spec.outcome, *focal, *spec.controls, spec.cluster):
        if col not in df.columns:
            raise DataError(f"missing column: {col}")
    n = len(df)
    cols = [np.ones(n)]
    names = ["const"]
    for term in focal:
        cols.append(df[term].to_numpy(dtype=float))
        names.append(term)
    X = np.column_stack(cols)
    if np.linalg.matrix_rank(X, tol=_RANK_TOL * n) < X.shape[1]:
        raise EstimationError(f"focal term(s) {focal} rank deficient")
    dropped = []
    for term in spec.controls:
        c = df[term].to_numpy(dtype=float)
        beta, *_ = np.linalg.lstsq(X, c, rcond=None)
        resid = c - X @ beta
        scale = np.linalg.norm(c) + 1.0
        if np.linalg.norm(resid) / scale < 1e-8:
            dropped.append(term)
            continue
        X = np.column_stack([X, c])
        names.append(term)
    return X, names, tuple(dropped)


def _cluster_sums(values: np.ndarray, codes: np.ndarray, n_groups: int) -> np.ndarray:
    out = np.zeros((n_groups,) + values.shape[1:])
    np.add.at(out, codes, values)
    return out


def ols_cluster(data: pd.DataFrame, spec: RegressionSpec,
                influence_terms: tuple[str, ...] = ()) -> RegressionResult:
    """OLS point estimates with CR1 household-clustered standard errors and
    t(G-1) p-values."""
    df = data.query(spec.sample_filter) if spec.sample_filter else data
    if len(df) == 0:
        raise EstimationError("empty sample after filtering")
    X, names, dropped = _build_design(df, spec)
    y = df[spec.outcome].to_numpy(dtype=float)
    clusters, codes = np.unique(df[spec.cluster].to_numpy(), return_inverse=True)
    G = clusters.size
    if G < 2:
        raise EstimationError("need at least two clusters")
    n, k = X.shape
    if n <= k:
        raise EstimationError("more parameters than observations")
    XtX = X.T @ X
    beta = np.linalg.solve(XtX, X.T @ y)
    resid = y - X @ beta
    sums = _cluster_sums(X * resid[:, None], codes, G)
    meat = sums.T @ sums
    cr1 = (G / (G - 1)) * ((n - 1) / (n - k))
    bread = np.linalg.inv(XtX)
    V = bread @ meat @ bread * cr1
    se = np.sqrt(np.maximum(np.diag(V), 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        tstat = np.where(se > 0, beta / se, np.where(beta == 0, 0.0, np.inf * np.sign(beta)))
    pval = np.where(np.isinf(tstat), 0.0, 2 * stats.t.sf(np.abs(tstat), G - 1))
    estimates = {nm: TermStats(float(b), float(s), float(t_), float(p_))
                 for nm, b, s, t_, p_ in zip(names, beta, se, tstat, pval)}
    result = RegressionResult(estimates=estimates, n_obs=n, n_clusters=G, dropped=dropped)
    if influence_terms:
        infl = {}
        scores = sums @ bread.T  # per-cluster influence on each coefficient
        for term in influence_terms:
            idx = names.index(term)
            infl[term] = (clusters, scores[:, idx])
        result.influence = infl
    result.joint_tests = {}
    result.joint_tests["vcov"] = V  # full matrix for downstream Wald tests
    result.joint_tests["terms"] = names
    return result


def wald_joint_test(result: RegressionResult, terms: tuple[str, ...]) -> dict[str, float]:
    """Cluster-robust joint F test that the named coefficients are all zero."""
    names = result.joint_tests["terms"]
    V = result.joint_tests["vcov"]
    idx = [names.index(t) for t in terms]
    beta = np.array([result.estimates[t].coefficient for t in terms])
    Vsub = V[np.ix_(idx, idx)]
    q = len(idx)
    W = float(beta @ np.linalg.solve(Vsub, beta))
    F = W / q
    dof = result.n_clusters - 1
    return {"F": F, "p": float(stats.f.sf(F, q, dof)), "df1": q, "df2": dof}


# ---------------------------------------------------------------------------
# Fast FWL path shared by the permutation test and the subgroup scan: the
# randomization controls span stratum cells, so projecting them out is
# within-cell demeaning.

def _stratum_codes(df: pd.DataFrame) -> np.ndarray:
    if "assigned_individually" not in df.columns:
        return np.zeros(len(df), dtype=np.int64)
    size = df["sibling_count"].to_numpy()
    indiv = df["assigned_individually"].to_numpy(dtype=bool)
    cell = np.where(indiv & (size > 1), size, 0)
    return np.unique(cell, return_inverse=True)[1]


def _demean_by(values: np.ndarray, codes: np.ndarray, n_cells: int) -> np.ndarray:
    sums = np.bincount(codes, weights=values, minlength=n_cells)
    counts = np.bincount(codes, minlength=n_cells)
    means = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
    return values - means[codes]


def _fwl_cluster_stat(y_t: np.ndarray, d: np.ndarray, codes: np.ndarray, n_cells: int,
                      hcodes: np.ndarray, n_h: int, k_full: int) -> tuple[float, float]:
    """(coefficient, t) of d in y ~ d + stratum cells, CR1-clustered."""
    d_t = _demean_by(d.astype(float), codes, n_cells)
    dd = float(d_t @ d_t)
    if dd <= 0:
        raise EstimationError("treatment indicator collinear with strata")
    coef = float(d_t @ y_t) / dd
    e = y_t - coef * d_t
    cl = np.bincount(hcodes, weights=d_t * e, minlength=n_h)
    n = y_t.size
    G = n_h
    cr1 = (G / (G - 1)) * ((n - 1) / (n - k_full))
    var = cr1 * float(cl @ cl) / dd**2
    se = np.sqrt(max(var, 0.0))
    t = coef / se if se > 0 else np.inf * np.sign(coef) if coef else 0.0
    return coef, t


def permutation_test(data: pd.DataFrame, spec: RegressionSpec, n_perm: int,
                     seed: int, statistic: str = "t") -> float:
    """Randomization-inference p-value: re-randomize household treatment
    statuses within randomization-control strata and recompute the focal
    statistic; two-sided p = (1 + #{|stat*| >= |stat|}) / (1 + n_perm)."""
    if n_perm < 99:
        raise ConfigError("n_perm must be >= 99")
    if statistic not in ("t", "coef"):
        raise ConfigError("statistic must be 't' or 'coef'")
    focal = spec.focal_terms()
    if len(focal) != 1:
        raise ConfigError("permutation test needs a single focal term")
    df = data.query(spec.sample_filter) if spec.sample_filter else data
    y = df[spec.outcome].to_numpy(dtype=float)
    d = df[focal[0]].to_numpy(dtype=float)
    codes = _stratum_codes(df)
    n_cells = int(codes.max()) + 1
    hh, hcodes = np.unique(df[spec.cluster].to_numpy(), return_inverse=True)
    n_h = hh.size
    if n_h < 2:
        raise EstimationError("need at least two clusters")
    k_full = 1 + 1 + max(n_cells - 1, 0)

    y_t = _demean_by(y, codes, n_cells)
    coef0, t0 = _fwl_cluster_stat(y_t, d, codes, n_cells, hcodes, n_h, k_full)
    obs = abs(t0 if statistic == "t" else coef0)

    # household-level status and stratum (household = permutation unit)
    hh_status = np.zeros(n_h)
    np.maximum.at(hh_status, hcodes, d)
    hh_stratum = np.zeros(n_h, dtype=np.int64)
    hh_stratum[hcodes] = codes
    strata_households = [np.flatnonzero(hh_stratum == s) for s in range(n_cells)]
    for s, idx in enumerate(strata_households):
        if idx.size == 1:
            warnings.warn(f"permutation stratum {s} has a single household; skipped")

    rng = np.random.default_rng(seed)
    exceed = 0
    for _ in range(n_perm):
        perm_status = hh_status.copy()
        for idx in strata_households:
            if idx.size > 1:
                perm_status[idx] = perm_status[rng.permutation(idx)]
        d_star = perm_status[hcodes]
        coef_s, t_s = _fwl_cluster_stat(y_t, d_star, codes, n_cells, hcodes, n_h, k_full)
        stat = abs(t_s if statistic == "t" else coef_s)
        if stat >= obs - 1e-12:
            exceed += 1
    return (1 + exceed) / (1 + n_perm)


DEFAULT_BALANCE_COVARIATES = (
    "female", "black", "hispanic", "snap", "sibling_count", "score",
    "prior_harm_index", "any_prior_visit",
)


def balance_f_test(data: pd.DataFrame, covariates: tuple[str, ...] = DEFAULT_BALANCE_COVARIATES,
                   cluster: str = "household_id") -> dict[str, float]:
    """Regress treatment on pre-determined covariates plus randomization
    controls; cluster-robust joint F on the covariates only."""
    df, rc = randomization_control_columns(data)
    work = df.copy()
    for c in covariates:
        if work[c].dtype == bool:
            work[c] = work[c].astype(float)
    spec = RegressionSpec(outcome="treated_num", focal=covariates, controls=rc, cluster=cluster)
    work["treated_num"] = work["treated"].astype(float)
    res = ols_cluster(work, spec)
    return wald_joint_test(res, covariates)


def first_stage(data: pd.DataFrame, interaction_with_score: bool = False) -> RegressionResult:
    """Regression of score_recorded on treatment (plus randomization
    controls); optionally interacted with the risk score."""
    df, rc = randomization_control_columns(data)
    work = df.assign(score_recorded_num=df["score_recorded"].astype(float),
                     treated_num=df["treated"].astype(float))
    if interaction_with_score:
        work = work.assign(score_x_treated=work["treated_num"] * work["score"])
        spec = RegressionSpec(outcome="score_recorded_num",
                              focal=("treated_num", "score", "score_x_treated"),
                              controls=rc)
    else:
        spec = RegressionSpec(outcome="score_recorded_num", focal="treated_num", controls=rc)
    return ols_cluster(work, spec)


def iv_wald(itt: float, first_stage_coef: float) -> float:
    """Wald/2SLS estimate: intent-to-treat effect scaled by the first stage."""
    if first_stage_coef == 0:
        raise EstimationError("first stage is zero; IV undefined")
    return itt / first_stage_coef


def disparity_model(data: pd.DataFrame, group_flag: str, outcome: str = "harm_index") -> RegressionResult:
    """Interacted model {Type, treatment, treatment x Type}; the derived
    'effect on disparity (%)' is 100 * interaction / Type."""
    df, rc = randomization_control_columns(data)
    grp = df[group_flag].astype(bool)
    tr = df["treated"].astype(bool)
    for t_val in (False, True):
        for g_val in (False, True):
            if not ((tr == t_val) & (grp == g_val)).any():
                raise DataError(f"empty cell: treated={t_val}, {group_flag}={g_val}")
    work = df.assign(type_flag=grp.astype(float), treated_num=tr.astype(float))
    work = work.assign(treated_x_type=work["treated_num"] * work["type_flag"])
    spec = RegressionSpec(outcome=outcome, focal=("type_flag", "treated_num", "treated_x_type"),
                          controls=rc)
    res = ols_cluster(work, spec, influence_terms=("treated_x_type",))
    type_coef = res.estimates["type_flag"].coefficient
    inter = res.estimates["treated_x_type"]
    res.derived = {
        "effect_on_disparity_pct": 100.0 * inter.coefficient / type_coef if type_coef else np.nan,
        "p_disparity_change": inter.p,
    }
    return res


def joint_disparity_chi2(results: list[RegressionResult]) -> float:
    """Wald chi-squared that all interaction terms are zero, with the
    cross-model covariance estimated from stacked per-cluster influence
    scores (seemingly-unrelated system on the common sample)."""
    if len(results) < 2:
        raise EstimationError("need >= 2 interaction estimates")
    thetas = []
    score_maps = []
    for res in results:
        if not res.influence or "treated_x_type" not in res.influence:
            raise EstimationError("results must carry interaction influence scores")
        thetas.append(res.estimates["treated_x_type"].coefficient)
        ids, scores = res.influence["treated_x_type"]
        score_maps.append(dict(zip(ids, scores)))
    common = set(score_maps[0])
    for m in score_maps[1:]:
        common &= set(m)
    if len(common) < len(results) + 1:
        raise EstimationError("covariance not estimable: too few common clusters")
    common = sorted(common)
    S = np.array([[m[c] for m in score_maps] for c in common])
    V = S.T @ S
    theta = np.asarray(thetas)
    W = float(theta @ np.linalg.solve(V, theta))
    return float(stats.chi2.sf(W, len(results)))


def spillover_test(data: pd.DataFrame, outcome: str = "harm_index") -> RegressionResult:
    """Within-day contamination test: outcome on treatment, the jackknife
    (own-referral-excluded) share of same-day referrals treated, and their
    interaction. Referrals alone on their day are dropped with a warning."""
    if "referral_date_index" not in data.columns:
        raise DataError("missing column: referral_date_index")
    refs = data.groupby("referral_id").agg(
        day=("referral_date_index", "first"), tr=("treated", "max"))
    day_tot = refs.groupby("day")["tr"].transform("sum")
    day_n = refs.groupby("day")["tr"].transform("size")
    peer = (day_tot - refs["tr"]) / (day_n - 1)
    lonely = int((day_n == 1).sum())
    if lonely:
        warnings.warn(f"{lonely} referrals alone on their day; rows dropped (peer share undefined)")
    df = data.join(peer.rename("peer_share"), on="referral_id")
    df = df[df["peer_share"].notna()].copy()
    df, rc = randomization_control_columns(df)
    df["treated_num"] = df["treated"].astype(float)
    df["treated_x_peer"] = df["treated_num"] * df["peer_share"]
    spec = RegressionSpec(outcome=outcome, focal=("treated_num", "peer_share", "treated_x_peer"),
                          controls=rc)
    return ols_cluster(df, spec)


def power_calc(mean_c: float, mean_t: float, sd: float, clusters_per_arm: int,
               cluster_size: float, icc: float, cv: float, alpha: float) -> float:
    """Two-sample normal-approximation power under cluster randomization.

    Design effect 1 + ((cv^2 + 1) * cluster_size - 1) * icc, two-sided alpha.
    """
    if sd <= 0 or clusters_per_arm <= 0 or cluster_size <= 0:
        raise ConfigError("sd, clusters_per_arm, cluster_size must be positive")
    if not 0.0 <= icc < 1.0:
        raise ConfigError("icc must be in [0, 1)")
    if not 0.0 < alpha < 1.0:
        raise ConfigError("alpha must be in (0, 1)")
    deff = 1.0 + ((cv**2 + 1.0) * cluster_size - 1.0) * icc
    n_eff = clusters_per_arm * cluster_size / deff
    se = sd * np.sqrt(2.0 / n_eff)
    z_crit = stats.norm.ppf(1 - alpha / 2)
    lam = (mean_t - mean_c) / se
    return float(stats.norm.cdf(lam - z_crit) + stats.norm.cdf(-lam - z_crit))


def power_sim(mean_c: float, mean_t: float, sd: float, n_per_arm: int, alpha: float,
              n_trials: int, seed: int) -> float:
    """Simulation check of the unclustered two-sample power (z test)."""
    rng = np.random.default_rng(seed)
    z_crit = stats.norm.ppf(1 - alpha / 2)
    rejections = 0
    for _ in range(n_trials):
        a = rng.normal(mean_c, sd, n_per_arm)
        b = rng.normal(mean_t, sd, n_per_arm)
        z = (b.mean() - a.mean()) / np.sqrt(a.var(ddof=1) / n_per_arm + b.var(ddof=1) / n_per_arm)
        rejections += abs(z) > z_crit
    return rejections / n_trials


@dataclass(frozen=True)
class ComplianceBounds:
    lower: float
    upper: float
    main: float
    uninformative: bool


def compliance_bounds(data: pd.DataFrame, switched_flag: str = "switched",
                      outcome: str = "harm_index") -> ComplianceBounds:
    """Re-estimate the treatment effect with status-switchers' index set to
    the sample minimum (lower) and to the 99th percentile (upper)."""
    if switched_flag not in data.columns:
        raise DataError(f"missing column: {switched_flag}")
    df, rc = randomization_control_columns(data)
    df = df.assign(treated_num=df["treated"].astype(float))
    spec = RegressionSpec(outcome=outcome, focal="treated_num", controls=rc)
    main = ols_cluster(df, spec).estimates["treated_num"].coefficient
    sw = df[switched_flag].to_numpy(dtype=bool)
    if not sw.any():
        return ComplianceBounds(main, main, main, uninformative=False)
    y = df[outcome].to_numpy(dtype=float)
    lo_y, hi_y = y.copy(), y.copy()
    lo_y[sw] = y.min()
    hi_y[sw] = np.quantile(y, 0.99)
    lower = ols_cluster(df.assign(**{outcome: lo_y}), spec).estimates["treated_num"].coefficient
    upper = ols_cluster(df.assign(**{outcome: hi_y}), spec).estimates["treated_num"].coefficient
    return ComplianceBounds(lower, upper, main, uninformative=bool(sw.all()))


DEFAULT_PREDICTION_FEATURES = (
    "prior_high_priority", "prior_injury", "prior_avoidable_er",
    "prior_maltreat_icd", "prior_intentional", "any_prior_visit",
    "female", "black", "hispanic", "snap", "motherless", "sibling_count",
    "referral_date_index",
)


def loo_predicted_harm(data: pd.DataFrame, features: tuple[str, ...] = DEFAULT_PREDICTION_FEATURES,
                       outcome: str = "harm_index") -> np.ndarray:
    """Leave-one-out linear predictions of the harm index from
    pre-determined features, via the exact hat-matrix downdate
    yhat_(-i) = (yhat_i - h_ii y_i) / (1 - h_ii)."""
    missing = [f for f in features if f not in data.columns]
    if missing:
        raise DataError(f"missing feature column(s): {missing}")
    n = len(data)
    if n <= len(features) + 1:
        raise EstimationError("need n > number of features + 1")
    cols = [np.ones(n)]
    kept = []
    X = np.ones((n, 1))
    for f in features:
        c = data[f].to_numpy(dtype=float)
        beta, *_ = np.linalg.lstsq(X, c, rcond=None)
        if np.linalg.norm(c - X @ beta) / (np.linalg.norm(c) + 1.0) < 1e-8:
            warnings.warn(f"feature {f} collinear; dropped")
            continue
        X = np.column_stack([X, c])
        kept.append(f)
    y = data[outcome].to_numpy(dtype=float)
    XtX_inv = np.linalg.inv(X.T @ X)
    beta = XtX_inv @ (X.T @ y)
    yhat = X @ beta
    h = np.einsum("ij,jk,ik->i", X, XtX_inv, X)
    h = np.minimum(h, 1 - 1e-12)
    return (yhat - h * y) / (1.0 - h)


def targeting_tests(data: pd.DataFrame) -> dict[str, RegressionResult]:
    """The four targeting tests.

    1. treatment effect on the harm index among screened-out children;
    2. treatment effect on any injury among screened-in children;
    3. prior harm index on {treatment, screen-in, interaction} within the
       top score quartile (16-20);
    4. leave-one-out predicted harm on the same interacted model, full
       sample.
    """
    for col in ("harm_index", "prior_harm_index"):
        if col not in data.columns:
            raise DataError(f"missing column: {col} (attach index columns first)")
    df, rc = randomization_control_columns(data)
    df = df.assign(treated_num=df["treated"].astype(float),
                   screened_num=df["screened_in"].astype(float))
    df = df.assign(treated_x_screened=df["treated_num"] * df["screened_num"],
                   injury_any=(df["injury"] > 0).astype(float))
    out = {}
    out["screened_out_harm"] = ols_cluster(
        df, RegressionSpec(outcome="harm_index", focal="treated_num", controls=rc,
                           sample_filter="~screened_in"))
    out["injury_screened_in"] = ols_cluster(
        df, RegressionSpec(outcome="injury_any", focal="treated_num", controls=rc,
                           sample_filter="screened_in"))
    out["prior_harm_top_quartile"] = ols_cluster(
        df, RegressionSpec(outcome="prior_harm_index",
                           focal=("treated_num", "screened_num", "treated_x_screened"),
                           controls=rc, sample_filter="score >= 16"))
    pred = loo_predicted_harm(df)
    out["predicted_harm"] = ols_cluster(
        df.assign(predicted_harm=pred),
        RegressionSpec(outcome="predicted_harm",
                       focal=("treated_num", "screened_num", "treated_x_screened"),
                       controls=rc))
    return out


@dataclass
class ScanResult:
    slope: float
    p: float
    points: np.ndarray  # (n_groups, 3): size, targeting effect, overall effect


def subgroup_targeting_scan(data: pd.DataFrame, n_groups: int = 1000,
                            min_size: int = 100, seed: int = 0) -> ScanResult:
    """Random-subgroup scan relating the treatment effect on screened-out
    harm (targeting) to the overall harm effect across random subsets."""
    n = len(data)
    if n < min_size:
        raise DataError(f"sample smaller than min_size={min_size}")
    y = data["harm_index"].to_numpy(dtype=float)
    d = data["treated"].to_numpy(dtype=float)
    so = ~data["screened_in"].to_numpy(dtype=bool)
    codes = _stratum_codes(data)
    n_cells = int(codes.max()) + 1
    rng = np.random.default_rng(seed)

    def fwl_effect(idx: np.ndarray) -> float:
        cc = codes[idx]
        dd = _demean_by(d[idx], cc, n_cells)
        yy = _demean_by(y[idx], cc, n_cells)
        denom = dd @ dd
        if denom <= 0:
            return np.nan
        return float(dd @ yy / denom)

    points = np.empty((n_groups, 3))
    for g in range(n_groups):
        size = int(rng.integers(min_size, n + 1))
        idx = rng.choice(n, size=size, replace=False)
        x_eff = fwl_effect(idx[so[idx]])
        y_eff = fwl_effect(idx)
        points[g] = (size, x_eff, y_eff)
    points = points[~np.isnan(points).any(axis=1)]
    x, yv = points[:, 1], points[:, 2]
    if x.std(ddof=1) == 0:
        raise DataError("zero variance in targeting effects across subgroups")
    slope, intercept = np.polyfit(x, yv, 1)
    resid = yv - (slope * x + intercept)
    se = np.sqrt(resid @ resid / (len(x) - 2) / ((x - x.mean()) @ (x - x.mean())))
    t = slope / se
    p = float(2 * stats.t.sf(abs(t), len(x) - 2))
    return ScanResult(slope=float(slope), p=p, points=points)
