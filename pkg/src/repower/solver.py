"""Invert power curves for the relative sample size, and futility rules.

``solve_c`` finds the smallest relative sample size ``c`` at which a
chosen method reaches a target power.  Because several of the curves
are not monotone (FBP and CBP can dip before rising, interim curves can
start high and fall), the solver scans a logarithmic grid for the first
upward or downward crossing and refines it by bisection, so it always
returns the smallest crossing.  If the target exceeds the least upper
bound of the curve, ``InfeasibleTarget`` is raised carrying that bound.
"""
from dataclasses import dataclass, replace

import numpy as np

from . import design, interim
from .design import DEFAULT_CONFIG, shrunken_zo
from .interim import interim_power

C_CAP = 1e9
_TOL = 1e-8


class InfeasibleTarget(ValueError):
    """Target power above the least upper bound of the curve."""

    def __init__(self, target, supremum):
        self.target_power = float(target)
        self.supremum = float(supremum)
        super().__init__(
            f"target power {self.target_power:.6g} exceeds the attainable "
            f"supremum {self.supremum:.6g}")


@dataclass(frozen=True)
class SolveRequest:
    """What to solve for.

    Exactly one sizing axis applies: fixed-design methods vary ``c``
    directly; interim methods either hold the interim fraction ``f``
    fixed while ``c`` varies, or hold ``c_stage1 = ni / no`` fixed so
    that growing ``c`` means adding remaining observations.
    """

    method: str
    target_power: float
    zo: float = None
    zi: float = None
    f: float = None
    c_stage1: float = None
    c_lower: float = 0.0
    config: design.DesignConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if not 0.0 < self.target_power < 1.0:
            raise ValueError("target power must lie strictly in (0, 1)")
        if self.c_lower < 0.0 or not np.isfinite(self.c_lower):
            raise ValueError("c_lower must be finite and nonnegative")
        if self.method in design.METHODS_FIXED:
            if self.zo is None:
                raise ValueError(f"{self.method} requires zo")
            if (self.zi is not None or self.f is not None
                    or self.c_stage1 is not None):
                raise ValueError(
                    f"{self.method} takes no interim arguments")
        elif self.method in design.METHODS_INTERIM:
            if self.zi is None:
                raise ValueError(f"{self.method} requires zi")
            if self.method != "PPi" and self.zo is None:
                raise ValueError(f"{self.method} requires zo")
            if (self.f is None) == (self.c_stage1 is None):
                raise ValueError(
                    "interim solving needs exactly one of f or c_stage1")
            if self.f is not None and not 0.0 < self.f < 1.0:
                raise ValueError("f must lie strictly in (0, 1)")
            if self.method == "PPi" and self.f is not None:
                raise ValueError(
                    "PPi at a fixed interim fraction does not vary with "
                    "c; fix c_stage1 instead")
            if self.c_stage1 is not None and not self.c_stage1 > 0.0:
                raise ValueError("c_stage1 must be positive")
        else:
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class SolveResult:
    """Smallest c meeting the target, with the achieved power.

    ``f`` is the interim fraction at the solution (None for fixed
    designs); ``warning`` flags solutions on a falling branch of the
    curve, where adding observations lowers power again.
    """

    c: float
    power: float
    f: float = None
    warning: str = None


def _curve(request):
    """Power as a function of c, plus the domain lower bound."""
    cfg = request.config
    if request.method in design.METHODS_FIXED:
        def fn(c):
            return design.design_power(request.method, request.zo, c, cfg)
        return fn, max(request.c_lower, 0.0)
    if request.f is not None:
        def fn(c):
            return interim_power(request.method, request.zo, request.zi,
                                 c, request.f, cfg)
        return fn, max(request.c_lower, 0.0)
    k = request.c_stage1

    def fn(c):
        return interim_power(request.method, request.zo, request.zi,
                             c, k / np.asarray(c, dtype=float), cfg)
    return fn, max(request.c_lower, k)


def _supremum(request):
    cfg = request.config
    zd = shrunken_zo(request.zo, cfg) if request.zo is not None else 0.0
    if request.method in design.METHODS_FIXED:
        return design._design_supremum(request.method, zd, cfg)
    if request.c_stage1 is not None:
        return interim._interim_supremum(request.method, zd, request.zi,
                                         request.c_stage1, cfg)
    # fixed interim fraction: scan over c with analytic saturation checks
    if request.method == "CPi" and (zd > 0.0
                                    or (cfg.both_tails and zd != 0.0)):
        return 1.0
    fn, _lo = _curve(request)
    limits = ()
    if request.method == "IPPi":
        # original's weight vanishes as c grows at fixed f
        limits = (interim_power("PPi", None, request.zi, 1.0, request.f,
                                cfg),)
    return design._numeric_supremum(fn, limits)


def _bisect(fn, a, b, target):
    """First crossing inside (a, b); fn(a) < target <= fn(b) on entry.

    Returns the right endpoint of the shrunken bracket so the achieved
    power never falls below the target.
    """
    for _ in range(200):
        if (b - a) <= 1e-14 * max(1.0, b):
            break
        mid = np.sqrt(a * b) if a > 0.0 else 0.5 * (a + b)
        if float(fn(mid)) >= target:
            b = mid
        else:
            a = mid
    return b


def _bisect_down(fn, a, b, target):
    """Downward crossing inside (a, b); fn(a) >= target > fn(b).

    Returns the left endpoint of the shrunken bracket so the achieved
    power never falls below the target.
    """
    for _ in range(200):
        if (b - a) <= 1e-14 * max(1.0, b):
            break
        mid = np.sqrt(a * b) if a > 0.0 else 0.5 * (a + b)
        if float(fn(mid)) >= target:
            a = mid
        else:
            b = mid
    return a


def solve_c(request):
    """Smallest relative sample size reaching the target power.

    Returns
    -------
    SolveResult

    Raises
    ------
    InfeasibleTarget
        If no c up to 1e9 reaches the target; carries the least upper
        bound of the curve as ``supremum``.
    """
    fn, lo = _curve(request)
    target = request.target_power
    grid = _scan_grid(request, lo)
    vals = np.asarray(fn(grid), dtype=float)
    warning = None
    if vals[0] >= target:
        # the curve already meets the target at the lower bound; the
        # smallest exact crossing, if any, is where it first drops below
        below = np.nonzero(vals < target)[0]
        if below.size == 0:
            c = float(grid[0])
            warning = ("every size down to the lower bound meets the "
                       "target; returning the bound itself")
        else:
            j = int(below[0])
            c = float(_bisect_down(fn, float(grid[j - 1]),
                                   float(grid[j]), target))
    else:
        hit = np.nonzero(vals >= target)[0]
        if hit.size == 0:
            raise InfeasibleTarget(target, _supremum(request))
        i = int(hit[0])
        c = float(_bisect(fn, float(grid[i - 1]), float(grid[i]), target))
    power = float(fn(c))
    if power < target - _TOL:
        raise InfeasibleTarget(target, _supremum(request))
    ahead = float(fn(min(c * 1.001 + 1e-12, C_CAP)))
    if warning is None and ahead < power - 1e-12:
        warning = ("solution lies on a falling branch: slightly larger "
                   "designs have lower power")
    f = request.f
    if request.c_stage1 is not None:
        f = request.c_stage1 / c
    return SolveResult(c=c, power=power, f=f, warning=warning)


def _scan_grid(request, lo):
    """Log grid over the sizing axis, denser than any known dip width."""
    start = max(lo, 1e-9)
    if request.c_stage1 is not None:
        # keep c strictly above the already-observed stage
        top = max(C_CAP - request.c_stage1, 1.0)
        offsets = np.geomspace(1e-9, top, 1200)
        return request.c_stage1 + offsets
    grid = np.geomspace(start, C_CAP, 1200)
    if lo > 0.0 and lo < grid[0]:
        grid = np.concatenate(([lo], grid))
    return grid


@dataclass(frozen=True)
class FutilityRule:
    """Stop the replication at interim when power drops below a boundary."""

    method: str = "IPPi"
    boundary: float = 0.30

    def __post_init__(self):
        if self.method not in ("IPPi", "PPi"):
            raise ValueError("futility rules use IPPi or PPi")
        if not 0.0 < self.boundary < 1.0:
            raise ValueError("boundary must lie strictly in (0, 1)")


@dataclass(frozen=True)
class FutilityDecision:
    """Outcome of applying a futility rule at one interim look."""

    method: str
    power: float
    boundary: float
    stop: bool


def futility_decision(fixed, state, rule=FutilityRule(),
                      config=DEFAULT_CONFIG):
    """Apply a futility rule: stop when interim power < boundary.

    The comparison is strict, so a power exactly on the boundary
    continues.
    """
    zo = None if rule.method == "PPi" else fixed.zo
    power = interim_power(rule.method, zo, state.zi, fixed.c, state.f,
                          config)
    return FutilityDecision(method=rule.method, power=float(power),
                            boundary=rule.boundary,
                            stop=bool(power < rule.boundary))


def solve_with_config(request, **overrides):
    """Convenience: re-solve the same request with config fields changed."""
    cfg = replace(request.config, **overrides)
    return solve_c(replace(request, config=cfg))
