"""Design-stage power of a replication study, before any replication data.

Four methods, differing in what is assumed about the true effect (the
design prior) and in how the replication will be analyzed (the analysis
prior):

====== ============ ============== =========================================
method design prior analysis prior success event
====== ============ ============== =========================================
CP     point        flat           replication significant at two-sided
                                   level alpha, original direction
PP     normal       flat           same event, averaged over the evidence
FBP    normal       normal         pooled Bayesian analysis significant at
                                   alpha_tilde = alpha^2/2
CBP    point        normal         same pooled event, point design prior
====== ============ ============== =========================================

``alpha_tilde`` is the level at which a pooled analysis of original and
replication matches the two-trials rule of two independent results at
level ``alpha``.

Everything is unitless: ``zo`` is the original z-statistic and
``c = nr / no`` the replication-to-original sample-size ratio.  An
optional shrinkage factor ``s`` discounts the original estimate, so all
formulas see ``(1 - s) * zo``.  By default only success in the original
direction counts; ``both_tails=True`` adds the opposite-direction
rejection term.
"""
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .normal import std_normal_cdf, std_normal_quantile

METHODS_FIXED = ("CP", "PP", "FBP", "CBP")
METHODS_INTERIM = ("CPi", "IPPi", "PPi")

# (design prior, analysis prior) per method; a flat design prior only
# arises at interim, where the observed stage-1 data replace it
PRIOR_COMBINATIONS = {
    "CP": ("point", "flat"),
    "PP": ("normal", "flat"),
    "FBP": ("normal", "normal"),
    "CBP": ("point", "normal"),
    "CPi": ("point", "flat"),
    "IPPi": ("normal", "flat"),
    "PPi": ("flat", "flat"),
}


@dataclass(frozen=True)
class DesignConfig:
    """Analysis settings shared by all power computations.

    Parameters
    ----------
    alpha : float
        Two-sided significance level of the replication analysis.
    shrinkage : float
        Fraction s in [0, 1) by which the original z-statistic is
        discounted before it enters any formula.
    both_tails : bool
        If True, also count rejections opposite to the original
        direction (exact two-sided rejection probability).
    """

    alpha: float = 0.05
    shrinkage: float = 0.0
    both_tails: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if not 0.0 <= self.shrinkage < 1.0:
            raise ValueError("shrinkage must lie in [0, 1)")

    @property
    def alpha_tilde(self):
        """Pooled-analysis level equivalent to the two-trials rule."""
        return self.alpha * self.alpha / 2.0

    @property
    def z_alpha(self):
        """alpha/2 quantile of the standard normal (negative)."""
        return std_normal_quantile(self.alpha / 2.0)

    @property
    def z_alpha_tilde(self):
        """alpha_tilde/2 quantile of the standard normal (negative)."""
        return std_normal_quantile(self.alpha_tilde / 2.0)


DEFAULT_CONFIG = DesignConfig()


@dataclass(frozen=True)
class FixedDesign:
    """A planned replication: original z-statistic and relative size."""

    zo: float
    c: float

    def __post_init__(self):
        if not np.isfinite(self.zo):
            raise ValueError("zo must be finite")
        if not (np.isfinite(self.c) and self.c > 0.0):
            raise ValueError("c must be positive")


@dataclass(frozen=True)
class PowerResult:
    """A power value together with its least upper bound over sample size.

    ``supremum`` is the least upper bound of the method's power over the
    remaining-sample-size axis (all other inputs held fixed on their
    shrunken scale); ``feasible_100`` says whether power arbitrarily
    close to 1 is attainable.
    """

    method: str
    power: float
    supremum: float
    feasible_100: bool


def shrunken_zo(zo, config):
    """Original z-statistic after the configured shrinkage discount."""
    return (1.0 - config.shrinkage) * zo


def _method_parts(method, zd, c, za, zat):
    """Split the Phi argument into its data part and its quantile part.

    The data part collects every term carrying a z-statistic; the
    mirror-image rejection (other direction) flips its sign while the
    quantile part is unchanged.
    """
    c = np.asarray(c, dtype=float)
    if method == "CP":
        return np.sqrt(c) * zd, za * np.ones_like(c)
    if method == "PP":
        return np.sqrt(c / (c + 1.0)) * zd, np.sqrt(1.0 / (c + 1.0)) * za
    if method == "FBP":
        return np.sqrt((c + 1.0) / c) * zd, np.sqrt(1.0 / c) * zat
    if method == "CBP":
        return (c + 1.0) / np.sqrt(c) * zd, np.sqrt((c + 1.0) / c) * zat
    raise ValueError(f"unknown fixed-design method {method!r}")


def _tail_power(t_part, z_part, both_tails):
    power = std_normal_cdf(t_part + z_part)
    if both_tails:
        power = power + std_normal_cdf(-t_part + z_part)
    return power


def design_power(method, zo, c, config=DEFAULT_CONFIG):
    """Power of one fixed-design method, vectorized over ``c``.

    Parameters
    ----------
    method : {"CP", "PP", "FBP", "CBP"}
    zo : float
        Original z-statistic (unshrunken).
    c : float or array
        Relative sample size nr / no, positive.
    config : DesignConfig

    Returns
    -------
    float or ndarray
    """
    carr = np.asarray(c, dtype=float)
    if np.any(~np.isfinite(carr)) or np.any(carr <= 0.0):
        raise ValueError("c must be positive and finite")
    zd = shrunken_zo(zo, config)
    t, z = _method_parts(method, zd, carr, config.z_alpha,
                         config.z_alpha_tilde)
    out = _tail_power(t, z, config.both_tails)
    return float(out) if np.ndim(c) == 0 else out


def _polished_max(curve, grid):
    """max of curve over a log grid, refined around the best point"""
    logs = np.log(grid)
    vals = curve(grid)
    i = int(np.argmax(vals))
    best = float(vals[i])
    a = logs[max(i - 1, 0)]
    b = logs[min(i + 1, len(grid) - 1)]
    if b > a:
        res = optimize.minimize_scalar(
            lambda t: -float(curve(np.exp(np.array([t])))[0]),
            bounds=(a, b), method="bounded")
        best = max(best, float(-res.fun))
    return best


def _numeric_supremum(curve, limits=(), lo=1e-12, hi=1e12):
    grid = np.geomspace(lo, hi, 481)
    best = _polished_max(curve, grid)
    return min(1.0, max([best, *limits]))


def _design_supremum(method, zd, config):
    """Least upper bound of design_power over c in (0, inf)."""
    alpha = config.alpha
    za = config.z_alpha
    zat = config.z_alpha_tilde
    if config.both_tails:
        def curve(c):
            t, z = _method_parts(method, zd, c, za, zat)
            return _tail_power(t, z, True)
        if method == "CP":
            limits = (1.0 if zd != 0.0 else alpha,)
        elif method == "PP":
            limits = (1.0,)      # both-tail rejection -> 1 as c grows
        elif method == "FBP":
            limits = (1.0,)
        else:
            limits = (1.0 if zd != 0.0 else config.alpha_tilde,)
        return _numeric_supremum(curve, limits)
    if method == "CP":
        return 1.0 if zd > 0.0 else alpha / 2.0
    if method == "PP":
        return float(max(std_normal_cdf(zd), alpha / 2.0))
    if method == "FBP":
        # beyond the pooled threshold the c -> 0 limit is 1
        return 1.0 if zd + zat > 0.0 else float(std_normal_cdf(zd))
    if method == "CBP":
        if zd > 0.0:
            return 1.0
        if zd == 0.0:
            return config.alpha_tilde / 2.0

        def curve(c):
            t, z = _method_parts("CBP", zd, c, za, zat)
            return _tail_power(t, z, False)
        return _numeric_supremum(curve)
    raise ValueError(f"unknown fixed-design method {method!r}")


def _result(method, power, supremum):
    power = float(power)
    supremum = float(max(supremum, power))
    return PowerResult(method, power, supremum, supremum >= 1.0 - 1e-12)


def conditional_power(design, config=DEFAULT_CONFIG):
    """CP: probability of replication success if the true effect equals
    the (shrunken) original estimate."""
    power = design_power("CP", design.zo, design.c, config)
    sup = _design_supremum("CP", shrunken_zo(design.zo, config), config)
    return _result("CP", power, sup)


def predictive_power(design, config=DEFAULT_CONFIG):
    """PP: replication success probability averaged over the original
    study's evidence about the effect."""
    power = design_power("PP", design.zo, design.c, config)
    sup = _design_supremum("PP", shrunken_zo(design.zo, config), config)
    return _result("PP", power, sup)


def fully_bayesian_power(design, config=DEFAULT_CONFIG):
    """FBP: success of the pooled Bayesian analysis at level alpha_tilde,
    averaged over the original study's evidence."""
    power = design_power("FBP", design.zo, design.c, config)
    sup = _design_supremum("FBP", shrunken_zo(design.zo, config), config)
    return _result("FBP", power, sup)


def conditional_bayesian_power(design, config=DEFAULT_CONFIG):
    """CBP: success of the pooled Bayesian analysis if the true effect
    equals the (shrunken) original estimate."""
    power = design_power("CBP", design.zo, design.c, config)
    sup = _design_supremum("CBP", shrunken_zo(design.zo, config), config)
    return _result("CBP", power, sup)


@dataclass(frozen=True)
class CrossingPoint:
    """Relative sample size where two power curves cross; ``feasible``
    is False when the crossing falls at c <= 0."""

    c: float
    feasible: bool


def cp_pp_intersection(zo, config=DEFAULT_CONFIG):
    """Relative sample size where CP and PP cross (both equal 1/2).

    Requires a positive shrunken original z-statistic; the curves do
    not cross otherwise.
    """
    zd = shrunken_zo(zo, config)
    if zd <= 0.0:
        raise ValueError("CP and PP only cross for a positive original z")
    return float((config.z_alpha / zd) ** 2)


def fbp_cbp_intersection(zo, config=DEFAULT_CONFIG):
    """Crossing of FBP and CBP (both equal 1/2 there).

    The crossing lies at positive c only when the original is not yet
    significant at the pooled level alpha_tilde; otherwise the returned
    point is flagged infeasible.
    """
    zd = shrunken_zo(zo, config)
    if zd <= 0.0:
        raise ValueError("FBP and CBP only cross for a positive original z")
    c = float((config.z_alpha_tilde / zd) ** 2 - 1.0)
    return CrossingPoint(c, c > 0.0)


@dataclass(frozen=True)
class PowerMinimum:
    """Location and value of an interior power minimum."""

    c: float
    power: float


def fbp_minimum(zo, config=DEFAULT_CONFIG):
    """Interior minimum of FBP over c.

    Exists only when the original is already significant at the pooled
    level alpha_tilde (then FBP falls from 1 at c -> 0 before rising
    back towards its large-c bound).
    """
    zd = shrunken_zo(zo, config)
    zat = config.z_alpha_tilde
    if zd + zat <= 0.0:
        raise ValueError(
            "FBP has an interior minimum only when the original is "
            "significant at the pooled level alpha_tilde")
    c = float(zd * zd / (zat * zat) - 1.0)
    power = float(std_normal_cdf(np.sqrt(zd * zd - zat * zat)))
    return PowerMinimum(c, power)


# short aliases matching the method tags
cp = conditional_power
pp = predictive_power
fbp = fully_bayesian_power
cbp = conditional_bayesian_power
