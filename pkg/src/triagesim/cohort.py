"""Seed-deterministic synthetic referral cohorts.

The generator produces child-level records whose control-arm moments match a
configurable set of targets (outcome means, screen-in rate, treated share,
score discrimination, index internal consistency) and whose treatment effect
is injected through the decision process rather than as an additive shift on
outcomes.

Generative structure, per child:

* ``z_hist``: a household-correlated "history" latent. The ventile risk
  score is a rank-binned transform of ``z_hist``, so the score summarizes
  history and nothing else.
* ``z_now``: an independent household-correlated "current situation" latent
  not visible to the scoring model.
* severity ``lam``: a gamma variate obtained by rank-PIT mapping of
  ``w * z_hist + sqrt(1 - w^2) * z_now`` (plus group-level shifts). All five
  outcome counts are Poisson with mean ``mu_j * lam``, so they share the
  severity factor and are positively correlated.
* decisions: workers observe severity plus noise. Control teams rank the
  noisy signal globally; teams with tool access rank a less noisy signal
  *within* score bins at the control arm's score-conditional screen-in
  rates, which reallocates screen-ins toward truly severe children while
  leaving the score gradient of screen-ins unchanged.
* injected effect: children in the tool arm whose screen-in decision differs
  from what the control-noise signal would have produced get their severity
  multiplied by a factor ``f < 1``. ``f`` is solved per cohort so that the
  expected intent-to-treat effect on the harm index equals
  ``itt_effect_sd`` exactly given the realized latents.

Randomization reproduces the documented assignment quirk: households without
a listed mother referred on/after the cutoff day are assigned at the child
level, with mixed households resolved to treated, so P(all control) =
(1 - p)^k for a sibling group of size k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import special

from .errors import ConfigError, DataError

OUTCOME_NAMES = ("high_priority", "injury", "avoidable_er", "maltreat_icd", "intentional")

#: Default ventile mass: 19 uniform bins with the top bin inflated to 6%.
DEFAULT_SCORE_PMF = tuple([0.94 / 19] * 19 + [0.06])

#: Removal probability by score, exp(a + b * s) clipped to [0, 1]. The two
#: constants are calibrated so the rank (Mann-Whitney) AUC of score against
#: removal is 0.760 and the overall removal rate is 0.030.
_REMOVAL_A = -5.93976734
_REMOVAL_B = 0.1818116
DEFAULT_REMOVAL_PROB = tuple(
    float(min(1.0, math.exp(_REMOVAL_A + _REMOVAL_B * s))) for s in range(1, 21)
)

#: Severity mixing variance giving Cronbach alpha 0.81 for the default
#: outcome means with no extra per-outcome dispersion.
DEFAULT_SEVERITY_VARIANCE = 12.526145

DEFAULT_CONTROL_MEANS = (0.660, 0.210, 0.168, 0.013, 0.020)

#: Follow-up window bookkeeping (days). Outcome means in the config refer to
#: the default window that starts 30 days after randomization.
_SEG_DAYS = (30.0, 30.0, 305.0)  # days 0-30, 30-60, 60+
_DEFAULT_WINDOW_DAYS = _SEG_DAYS[1] + _SEG_DAYS[2]


@dataclass(frozen=True)
class GroupParams:
    """Per-group generator knobs.

    ``latent_shift`` moves the group's history latent (raising both risk
    score and severity). ``screen_bias`` is an additive distortion on the
    control-team decision signal; ``treated_bias_reduction`` is the fraction
    of that distortion removed when the tool is available.
    ``treat_interaction_sd`` injects an extra treated-arm harm-index shift
    for the group, in index SD units.
    """

    share: float
    latent_shift: float = 0.0
    screen_bias: float = 0.0
    treated_bias_reduction: float = 1.0
    treat_interaction_sd: float = 0.0


def default_disparity_params() -> dict[str, GroupParams]:
    # Latent shifts calibrated so control-arm harm-index gaps are about
    # +0.37 (black), +0.22 (hispanic), +0.10 (female), +0.14 (snap), and the
    # control screen-in gap for black children is about +0.20.
    return {
        "black": GroupParams(share=0.04, latent_shift=0.925, screen_bias=1.138),
        "hispanic": GroupParams(share=0.17, latent_shift=0.672),
        "female": GroupParams(share=0.51, latent_shift=0.368),
        "snap": GroupParams(share=0.64, latent_shift=0.545),
    }


GROUP_NAMES = ("black", "hispanic", "female", "snap")


@dataclass
class CohortConfig:
    """All generator parameters. Same config (incl. seed) => identical cohort."""

    n_children: int = 3431
    n_households: int | None = None
    treatment_share: float = 0.55
    screen_in_rate: float = 0.30
    score_pmf: tuple[float, ...] = DEFAULT_SCORE_PMF
    removal_prob_by_score: tuple[float, ...] = DEFAULT_REMOVAL_PROB
    control_outcome_means: tuple[float, ...] = DEFAULT_CONTROL_MEANS
    outcome_dispersion: tuple[float, ...] = (0.0, 0.0, 0.0, 0.0, 0.0)
    itt_effect_sd: float = -0.061
    first_stage: float = 0.73
    disparity_params: dict[str, GroupParams] = field(default_factory=default_disparity_params)
    seed: int = 20201101

    # Mechanics beyond the published calibration targets.
    severity_variance: float = DEFAULT_SEVERITY_VARIANCE
    history_weight: float = 0.55          # w: share of severity signed by history
    household_icc: float = 0.5            # within-household latent correlation
    mean_household_size: float = 2.24
    max_household_size: int = 10
    decision_noise_sd: float = 3.0        # control-team noise on perceived severity
    decision_noise_factor: float = 12.0   # tool divides the noise draw by this
    motherless_share: float = 0.20
    quirk_enabled: bool = True
    quirk_cutoff_day: int = 120
    n_days: int = 500
    status_switch_share: float = 0.018    # children recorded control inside treated households
    control_recorded_rate: float = 0.005
    prior_outcome_scale: float = 0.5
    re_referral_mean: float = 2.16
    outcome_window: int = 30              # one of {0, 30, 60}

    def validate(self) -> None:
        if self.n_children < 0:
            raise ConfigError("n_children must be >= 0")
        for name in ("treatment_share", "screen_in_rate", "first_stage",
                     "control_recorded_rate", "motherless_share", "status_switch_share"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {v}")
        pmf = np.asarray(self.score_pmf, dtype=float)
        if pmf.shape != (20,):
            raise ConfigError("score_pmf must have 20 entries")
        if abs(pmf.sum() - 1.0) > 1e-12:
            raise ConfigError(f"score_pmf must sum to 1 (got {pmf.sum()!r})")
        if (pmf < 0).any():
            raise ConfigError("score_pmf entries must be >= 0")
        rem = np.asarray(self.removal_prob_by_score, dtype=float)
        if rem.shape != (20,) or (rem < 0).any() or (rem > 1).any():
            raise ConfigError("removal_prob_by_score must be 20 probabilities in [0, 1]")
        means = np.asarray(self.control_outcome_means, dtype=float)
        if means.shape != (5,) or (means < 0).any():
            raise ConfigError("control_outcome_means must be 5 non-negative values")
        disp = np.asarray(self.outcome_dispersion, dtype=float)
        if disp.shape != (5,) or (disp < 0).any():
            raise ConfigError("outcome_dispersion must be 5 non-negative values")
        if self.severity_variance <= 0:
            raise ConfigError("severity_variance must be > 0")
        if not 0.0 < self.history_weight < 1.0:
            raise ConfigError("history_weight must be in (0, 1)")
        if not 0.0 <= self.household_icc < 1.0:
            raise ConfigError("household_icc must be in [0, 1)")
        if self.mean_household_size < 1.0:
            raise ConfigError("mean_household_size must be >= 1")
        if self.decision_noise_sd <= 0:
            raise ConfigError("decision_noise_sd must be > 0")
        if self.decision_noise_factor < 1.0:
            raise ConfigError("decision_noise_factor must be >= 1")
        if self.outcome_window not in (0, 30, 60):
            raise ConfigError("outcome_window must be one of {0, 30, 60}")
        if self.n_days <= self.quirk_cutoff_day and self.quirk_enabled:
            raise ConfigError("quirk_cutoff_day must fall inside n_days")
        for name, gp in self.disparity_params.items():
            if not 0.0 <= gp.share <= 1.0:
                raise ConfigError(f"disparity_params[{name}].share must be in [0, 1]")
        if self.itt_effect_sd != 0.0 and self.decision_noise_factor == 1.0:
            raise ConfigError(
                "itt_effect_sd: a nonzero injected effect needs decision_noise_factor > 1 "
                "(no decisions change, so the effect has no carrier)"
            )


@dataclass
class ChildRecord:
    """One child-referral unit."""

    child_id: int
    household_id: int
    referral_id: int
    referral_date_index: int
    black: bool
    hispanic: bool
    female: bool
    snap: bool
    motherless: bool
    assigned_individually: bool
    sibling_count: int
    score: int
    treated: bool
    switched: bool
    score_recorded: bool
    screened_in: bool
    removed: bool
    re_referrals: int
    outcomes: tuple[int, ...]
    prior_outcomes: tuple[int, ...]
    outcomes_first30: tuple[int, ...]
    outcomes_days30_60: tuple[int, ...]
    outcomes_after60: tuple[int, ...]


def outcome_scales(config: CohortConfig) -> tuple[np.ndarray, float, float]:
    """Analytic control-arm column SDs, index SD before restandardization,
    and the harm-index shift per unit of severity removed from one child.

    Counts are Poisson(mu_j * lam * e_j) with Var(lam) = v and the e_j an
    independent unit-mean gamma with variance d_j, so
    Var(x_j) = mu_j + mu_j^2 * ((1 + v)(1 + d_j) - 1) and
    Cov(x_j, x_k) = mu_j * mu_k * v.
    """
    mu = np.asarray(config.control_outcome_means, dtype=float)
    disp = np.asarray(config.outcome_dispersion, dtype=float)
    v = config.severity_variance
    var = mu + mu**2 * ((1 + v) * (1 + disp) - 1)
    s = np.sqrt(var)
    rho_sum = 0.0
    for j in range(5):
        for k in range(j + 1, 5):
            rho_sum += mu[j] * mu[k] * v / (s[j] * s[k])
    sd_index = math.sqrt((5 + 2 * rho_sum) / 25)
    unit_shift = float(np.sum(mu / s) / (5 * sd_index))
    return s, sd_index, unit_shift


def _rank_pit(x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Map values to exact Uniform(0,1) draws that preserve the ranking."""
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=np.int64)
    ranks[order] = np.arange(x.size)
    return (ranks + rng.random(x.size)) / x.size


def _ventile_scores(x: np.ndarray, pmf: np.ndarray) -> np.ndarray:
    """Assign scores 1..20 by rank so realized bin shares match pmf exactly
    (largest-remainder apportionment of the n slots)."""
    n = x.size
    order = np.argsort(x, kind="stable")
    quota = pmf * n
    counts = np.floor(quota).astype(np.int64)
    short = n - counts.sum()
    bump = np.argsort(-(quota - counts), kind="stable")[:short]
    counts[bump] += 1
    scores = np.empty(n, dtype=np.int64)
    scores[order] = np.repeat(np.arange(1, 21), counts)
    return scores


def _household_sizes(n_children: int, mean_size: float, max_size: int,
                     rng: np.random.Generator) -> np.ndarray:
    """Truncated-geometric household sizes summing exactly to n_children."""
    if n_children == 0:
        return np.zeros(0, dtype=np.int64)
    p = 1.0 / mean_size
    sizes = []
    total = 0
    while total < n_children:
        s = int(min(rng.geometric(p), max_size, n_children - total))
        sizes.append(s)
        total += s
    return np.asarray(sizes, dtype=np.int64)


def _top_k_mask(values: np.ndarray, candidates: np.ndarray, k: int) -> np.ndarray:
    """Boolean mask flagging the k largest ``values`` among ``candidates``."""
    mask = np.zeros(values.size, dtype=bool)
    if k <= 0 or candidates.size == 0:
        return mask
    k = min(k, candidates.size)
    chosen = candidates[np.argsort(-values[candidates], kind="stable")[:k]]
    mask[chosen] = True
    return mask


def _assign_treatment_arrays(hh_of: np.ndarray, motherless_h: np.ndarray,
                             day_h: np.ndarray, share: float, quirk_enabled: bool,
                             cutoff_day: int, u_household: np.ndarray,
                             u_child: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Household treatment statuses plus the per-child quirk flag.

    Draws are passed in so toggling the quirk only changes quirk households.
    """
    n_households = motherless_h.size
    base = u_household < share
    quirk_h = quirk_enabled & motherless_h & (day_h >= cutoff_day)
    child_draw = u_child < share
    any_treated = np.zeros(n_households, dtype=bool)
    np.logical_or.at(any_treated, hh_of, child_draw)
    treated_h = np.where(quirk_h, any_treated, base)
    return treated_h, quirk_h[hh_of]


def _simulate(config: CohortConfig) -> dict[str, np.ndarray]:
    config.validate()
    n = config.n_children
    rng = np.random.default_rng(config.seed)
    mean_size = config.mean_household_size
    if config.n_households:
        mean_size = max(1.0, n / config.n_households)
    sizes = _household_sizes(n, mean_size, config.max_household_size, rng)
    n_hh = sizes.size
    hh_of = np.repeat(np.arange(n_hh), sizes)

    groups = config.disparity_params
    flags = {}
    for name in GROUP_NAMES:
        gp = groups.get(name, GroupParams(share=0.0))
        if name == "female":
            flags[name] = rng.random(n) < gp.share
        else:
            flags[name] = (rng.random(n_hh) < gp.share)[hh_of]
    motherless_h = rng.random(n_hh) < config.motherless_share
    day_h = rng.integers(0, config.n_days, n_hh)

    # Latents: household factors for history and current components.
    icc = config.household_icc
    a_h = rng.standard_normal(n_hh)
    c_h = rng.standard_normal(n_hh)
    b_i = rng.standard_normal(n)
    d_i = rng.standard_normal(n)
    shift = np.zeros(n)
    bias = np.zeros(n)
    bias_keep = np.zeros(n)  # residual bias under tool access
    for name in GROUP_NAMES:
        gp = groups.get(name)
        if gp is None:
            continue
        f = flags[name].astype(float)
        shift += gp.latent_shift * f
        bias += gp.screen_bias * f
        bias_keep += gp.screen_bias * (1.0 - gp.treated_bias_reduction) * f
    z_hist = math.sqrt(icc) * a_h[hh_of] + math.sqrt(1 - icc) * b_i + shift
    z_now = math.sqrt(icc) * c_h[hh_of] + math.sqrt(1 - icc) * d_i
    w = config.history_weight
    z_sev = w * z_hist + math.sqrt(1 - w * w) * z_now

    k_shape = 1.0 / config.severity_variance
    lam = special.gammaincinv(k_shape, _rank_pit(z_sev, rng)) / k_shape
    score = _ventile_scores(z_hist, np.asarray(config.score_pmf, dtype=float))

    # Treatment assignment (household level, with the documented quirk).
    u_hh = rng.random(n_hh)
    u_child = rng.random(n)
    treated_h, quirk_child = _assign_treatment_arrays(
        hh_of, motherless_h, day_h, config.treatment_share,
        config.quirk_enabled, config.quirk_cutoff_day, u_hh, u_child)
    exposure = treated_h[hh_of]

    # Decisions. Control ranks a noisy severity signal globally; treated
    # teams rank a cleaner signal within score bins at the control arm's
    # score-conditional screen-in rates.
    eta = rng.standard_normal(n) * config.decision_noise_sd
    m_control = z_sev + bias + eta
    m_treated = z_sev + bias_keep + eta / config.decision_noise_factor
    rate = config.screen_in_rate
    screened = np.zeros(n, dtype=bool)
    ctrl_idx = np.flatnonzero(~exposure)
    k_ctrl = int(math.ceil(rate * ctrl_idx.size))
    screened |= _top_k_mask(m_control, ctrl_idx, k_ctrl)
    if k_ctrl > 0:
        tau_ctrl = np.sort(m_control[ctrl_idx])[::-1][k_ctrl - 1]
    else:
        tau_ctrl = np.inf
    for s in range(1, 21):
        in_bin_ctrl = (~exposure) & (score == s)
        bin_rate = screened[in_bin_ctrl].mean() if in_bin_ctrl.any() else rate
        tr_idx = np.flatnonzero(exposure & (score == s))
        screened |= _top_k_mask(m_treated, tr_idx, int(round(bin_rate * tr_idx.size)))
    changed = exposure & (screened != (m_control >= tau_ctrl))

    # Status switchers: children recorded control inside exposure-treated
    # households (re-composed families), limited to one per household.
    eligible = exposure & (sizes[hh_of] >= 2) & ~quirk_child
    n_switch = int(round(config.status_switch_share * n))
    switched = np.zeros(n, dtype=bool)
    if n_switch > 0 and eligible.any():
        perm = rng.permutation(np.flatnonzero(eligible))
        first = np.unique(hh_of[perm], return_index=True)[1]
        picks = perm[np.sort(first)][:n_switch]
        switched[picks] = True
    treated = exposure & ~switched

    # Solve the severity multiplier so the expected recorded-arm contrast on
    # the harm index equals itt_effect_sd given the realized latents.
    f_mult = 1.0
    if config.itt_effect_sd != 0.0:
        _, _, unit_shift = outcome_scales(config)
        n_t = max(int(treated.sum()), 1)
        n_c = max(n - int(treated.sum()), 1)
        s_t = lam[treated & changed].sum() / n_t
        s_c = lam[~treated & changed].sum() / n_c
        denom = unit_shift * (s_t - s_c)
        if denom <= 0:
            raise ConfigError(
                "itt_effect_sd: no decision changes carry the effect for this "
                "(config, seed); increase decision_noise_factor or n_children"
            )
        f_mult = 1.0 + config.itt_effect_sd / denom
        if f_mult < 0:
            raise ConfigError(
                f"itt_effect_sd={config.itt_effect_sd} exceeds the effect the decision "
                f"channel can carry (max {-denom:.4f} for this config and seed)"
            )
    lam_eff = lam * np.where(exposure & changed, f_mult, 1.0)

    # Optional per-group treated-arm interaction injections, in SD units.
    for name in GROUP_NAMES:
        gp = groups.get(name)
        if gp is None or gp.treat_interaction_sd == 0.0:
            continue
        _, _, unit_shift = outcome_scales(config)
        fl = flags[name]
        n_t = max(int(treated.sum()), 1)
        n_c = max(n - int(treated.sum()), 1)
        # the multiplier hits exposure-treated children; recorded-control
        # switchers therefore appear in the subtracted term
        contrast = (lam_eff[treated & fl].sum() / n_t
                    - lam_eff[~treated & exposure & fl].sum() / n_c)
        if contrast <= 0:
            raise ConfigError(f"disparity_params[{name}].treat_interaction_sd not attainable")
        g_mult = 1.0 + gp.treat_interaction_sd / (unit_shift * contrast)
        if g_mult < 0:
            raise ConfigError(f"disparity_params[{name}].treat_interaction_sd too large")
        lam_eff = lam_eff * np.where(exposure & fl, g_mult, 1.0)

    # Outcome counts in three follow-up segments sharing the severity draw.
    mu = np.asarray(config.control_outcome_means, dtype=float)
    disp = np.asarray(config.outcome_dispersion, dtype=float)
    extra = np.ones((n, 5))
    for j in range(5):
        if disp[j] > 0:
            extra[:, j] = rng.gamma(1.0 / disp[j], disp[j], size=n)
    seg_counts = []
    for seg_days in _SEG_DAYS:
        seg_mu = mu * (seg_days / _DEFAULT_WINDOW_DAYS)
        seg_counts.append(rng.poisson(lam_eff[:, None] * seg_mu[None, :] * extra))
    prior = rng.poisson(lam[:, None] * (mu * config.prior_outcome_scale)[None, :])

    removal = np.asarray(config.removal_prob_by_score, dtype=float)
    removed = rng.random(n) < removal[score - 1]
    re_ref = rng.poisson(config.re_referral_mean * (0.5 + 0.5 * lam))

    recorded = np.where(treated, rng.random(n) < config.first_stage,
                        rng.random(n) < config.control_recorded_rate)

    return {
        "household_id": hh_of,
        "referral_id": hh_of,
        "referral_date_index": day_h[hh_of],
        "sibling_count": sizes[hh_of],
        "motherless": motherless_h[hh_of],
        "assigned_individually": quirk_child,
        "black": flags["black"], "hispanic": flags["hispanic"],
        "female": flags["female"], "snap": flags["snap"],
        "score": score,
        "treated": treated,
        "switched": switched,
        "score_recorded": recorded,
        "screened_in": screened,
        "removed": removed,
        "re_referrals": re_ref,
        "seg0": seg_counts[0], "seg1": seg_counts[1], "seg2": seg_counts[2],
        "prior": prior,
    }


def _window_counts(arrays: dict[str, np.ndarray], window: int) -> np.ndarray:
    if window == 30:
        return arrays["seg1"] + arrays["seg2"]
    if window == 60:
        return arrays["seg2"]
    if window == 0:
        return arrays["seg0"] + arrays["seg1"] + arrays["seg2"]
    raise ConfigError("outcome_window must be one of {0, 30, 60}")


def generate_cohort(config: CohortConfig) -> list[ChildRecord]:
    """Generate the cohort. Identical config (incl. seed) => identical output."""
    arrays = _simulate(config)
    n = config.n_children
    active = _window_counts(arrays, config.outcome_window)
    records = []
    for i in range(n):
        records.append(ChildRecord(
            child_id=i,
            household_id=int(arrays["household_id"][i]),
            referral_id=int(arrays["referral_id"][i]),
            referral_date_index=int(arrays["referral_date_index"][i]),
            black=bool(arrays["black"][i]),
            hispanic=bool(arrays["hispanic"][i]),
            female=bool(arrays["female"][i]),
            snap=bool(arrays["snap"][i]),
            motherless=bool(arrays["motherless"][i]),
            assigned_individually=bool(arrays["assigned_individually"][i]),
            sibling_count=int(arrays["sibling_count"][i]),
            score=int(arrays["score"][i]),
            treated=bool(arrays["treated"][i]),
            switched=bool(arrays["switched"][i]),
            score_recorded=bool(arrays["score_recorded"][i]),
            screened_in=bool(arrays["screened_in"][i]),
            removed=bool(arrays["removed"][i]),
            re_referrals=int(arrays["re_referrals"][i]),
            outcomes=tuple(int(v) for v in active[i]),
            prior_outcomes=tuple(int(v) for v in arrays["prior"][i]),
            outcomes_first30=tuple(int(v) for v in arrays["seg0"][i]),
            outcomes_days30_60=tuple(int(v) for v in arrays["seg1"][i]),
            outcomes_after60=tuple(int(v) for v in arrays["seg2"][i]),
        ))
    return records


def assign_treatment(records: list[ChildRecord], treatment_share: float,
                     quirk_enabled: bool, seed: int = 0,
                     cutoff_day: int = 120) -> list[ChildRecord]:
    """Re-draw treatment assignment over an existing cohort.

    Household-level Bernoulli(share); when the quirk is on, children in
    motherless households referred on/after the cutoff day draw individually
    and any mixed household resolves to treated. Returns new records; the
    ``switched`` flag is cleared (switch events belong to the generator).
    """
    if not 0.0 <= treatment_share <= 1.0:
        raise ConfigError("treatment_share must be in [0, 1]")
    if not records:
        return []
    rng = np.random.default_rng(seed)
    hh_ids = np.asarray([r.household_id for r in records])
    uniq, hh_of = np.unique(hh_ids, return_inverse=True)
    n_hh = uniq.size
    motherless_h = np.zeros(n_hh, dtype=bool)
    day_h = np.zeros(n_hh, dtype=np.int64)
    for r, idx in zip(records, hh_of):
        motherless_h[idx] = r.motherless
        day_h[idx] = r.referral_date_index
    u_hh = rng.random(n_hh)
    u_child = rng.random(len(records))
    treated_h, quirk_child = _assign_treatment_arrays(
        hh_of, motherless_h, day_h, treatment_share, quirk_enabled,
        cutoff_day, u_hh, u_child)
    out = []
    for i, r in enumerate(records):
        out.append(replace(r, treated=bool(treated_h[hh_of[i]]),
                           assigned_individually=bool(quirk_child[i]),
                           switched=False))
    return out


def score_auc(records) -> float:
    """Area under the ROC curve of score against removal, by the rank
    (Mann-Whitney) identity with the midrank tie correction."""
    if hasattr(records, "columns"):
        score = np.asarray(records["score"], dtype=float)
        removed = np.asarray(records["removed"], dtype=bool)
    else:
        score = np.asarray([r.score for r in records], dtype=float)
        removed = np.asarray([r.removed for r in records], dtype=bool)
    n_pos = int(removed.sum())
    n_neg = removed.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("AUC undefined: need both removed and non-removed children")
    from scipy.stats import rankdata

    ranks = rankdata(score)
    return float((ranks[removed].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))
