"""Sample-size inversion and futility rules."""
import numpy as np
import pytest

from repower import (DesignConfig, FixedDesign, FutilityRule,
                     InfeasibleTarget, InterimState, SolveRequest,
                     design_power, futility_decision, interim_power,
                     p_to_z, solve_c, std_normal_cdf)

CFG = DesignConfig(alpha=0.05)


def _power_at(request, c):
    if request.method in ("CP", "PP", "FBP", "CBP"):
        return design_power(request.method, request.zo, c, request.config)
    f = request.f if request.f is not None else request.c_stage1 / c
    return interim_power(request.method, request.zo, request.zi, c, f,
                         request.config)


def test_cp_closed_form_cases():
    # target 0.5 with zo = -z_alpha collapses to c = 1
    res = solve_c(SolveRequest(method="CP", target_power=0.5,
                               zo=p_to_z(0.05, +1), config=CFG))
    assert res.c == pytest.approx(1.0, abs=1e-8)
    # c = ((quantile(0.9) - z_alpha) / zo)^2, mpmath: 1.33355642
    res = solve_c(SolveRequest(method="CP", target_power=0.9, zo=2.8070,
                               config=CFG))
    assert res.c == pytest.approx(1.3335564165, rel=1e-8)
    assert res.power == pytest.approx(0.9, abs=1e-8)
    assert res.warning is None and res.f is None


def test_round_trip_fixed_methods():
    zo = 2.31
    for method in ("CP", "PP", "FBP", "CBP"):
        for target in (0.2, 0.5, 0.8, 0.9):
            req = SolveRequest(method=method, target_power=target,
                               zo=zo, config=CFG)
            res = solve_c(req)
            assert abs(_power_at(req, res.c) - target) <= 1e-8


def test_round_trip_interim_methods():
    # at a fixed interim fraction IPPi tops out at the PPi value of the
    # same (zi, f), so its targets must sit below that ceiling
    for method, kwargs, targets in (
            ("CPi", dict(zo=2.5, zi=-0.3, c_stage1=0.8),
             (0.3, 0.6, 0.85)),
            ("IPPi", dict(zo=2.5, zi=-0.3, c_stage1=0.8),
             (0.3, 0.6, 0.85)),
            ("PPi", dict(zi=1.5, c_stage1=1.2), (0.3, 0.6, 0.85)),
            ("CPi", dict(zo=2.5, zi=-0.3, f=0.35), (0.3, 0.6, 0.85)),
            ("IPPi", dict(zo=2.5, zi=0.4, f=0.35), (0.1, 0.25, 0.4))):
        for target in targets:
            req = SolveRequest(method=method, target_power=target,
                               config=CFG, **kwargs)
            res = solve_c(req)
            assert abs(_power_at(req, res.c) - target) <= 1e-8, (
                method, kwargs, target)
            if "c_stage1" in kwargs:
                assert res.f == pytest.approx(kwargs["c_stage1"] / res.c)
                assert res.c > kwargs["c_stage1"]


def test_infeasible_carries_supremum():
    zo = p_to_z(0.05, +1)
    with pytest.raises(InfeasibleTarget) as exc:
        solve_c(SolveRequest(method="PP", target_power=0.9751, zo=zo,
                             config=CFG))
    assert exc.value.supremum == pytest.approx(0.975, abs=1e-9)
    assert exc.value.target_power == 0.9751
    assert "0.975" in str(exc.value)
    # PPi cannot beat the interim evidence alone
    with pytest.raises(InfeasibleTarget) as exc:
        solve_c(SolveRequest(method="PPi", target_power=0.9, zi=0.5,
                             c_stage1=2.0, config=CFG))
    assert exc.value.supremum == pytest.approx(
        float(std_normal_cdf(0.5)), rel=1e-9)


def test_falling_branch_and_plateau():
    zo = 4.46518391558482        # po = 8e-6 < alpha_tilde
    res = solve_c(SolveRequest(method="FBP", target_power=0.999, zo=zo,
                               config=CFG))
    assert res.power == pytest.approx(0.999, abs=1e-8)
    assert res.c < 0.9144        # left of the interior minimum
    assert "falling" in res.warning
    # same target constrained past the dip: rising branch, no warning
    res2 = solve_c(SolveRequest(method="FBP", target_power=0.999, zo=zo,
                                c_lower=1.0, config=CFG))
    assert res2.c > res.c and res2.warning is None
    assert res2.power == pytest.approx(0.999, abs=1e-8)
    # target below the global minimum is met everywhere: bound returned
    res3 = solve_c(SolveRequest(method="FBP", target_power=0.99, zo=zo,
                                config=CFG))
    assert res3.c == pytest.approx(1e-9)
    assert "lower bound" in res3.warning


def test_smallest_crossing_is_returned():
    # CPi with a significant interim starts at 1, dips below 0.98 and
    # recovers; the solver must return the first (falling) crossing
    req = SolveRequest(method="CPi", target_power=0.98, zo=2.0, zi=2.5,
                       c_stage1=0.8, config=CFG)
    res = solve_c(req)
    assert res.power == pytest.approx(0.98, abs=1e-8)
    assert "falling" in res.warning
    later = _power_at(req, res.c * 1.5)
    assert later < 0.98


def test_request_validation():
    with pytest.raises(ValueError):
        SolveRequest(method="CP", target_power=1.0, zo=2.0)
    with pytest.raises(ValueError):
        SolveRequest(method="CP", target_power=0.8)
    with pytest.raises(ValueError):
        SolveRequest(method="CP", target_power=0.8, zo=2.0, zi=1.0)
    with pytest.raises(ValueError):
        SolveRequest(method="CPi", target_power=0.8, zo=2.0, zi=1.0)
    with pytest.raises(ValueError):
        SolveRequest(method="CPi", target_power=0.8, zo=2.0, zi=1.0,
                     f=0.3, c_stage1=0.5)
    with pytest.raises(ValueError):
        SolveRequest(method="PPi", target_power=0.8, zi=1.0, f=0.3)
    with pytest.raises(ValueError):
        SolveRequest(method="IPPi", target_power=0.8, zo=2.0, zi=1.0,
                     f=1.2)
    with pytest.raises(ValueError):
        SolveRequest(method="NPi", target_power=0.8, zo=2.0)


def test_futility_rule_validation():
    FutilityRule(method="PPi", boundary=0.1)
    with pytest.raises(ValueError):
        FutilityRule(method="CPi", boundary=0.3)
    with pytest.raises(ValueError):
        FutilityRule(method="IPPi", boundary=0.0)


def test_futility_decisions(by_study):
    from repower import derive
    # continued studies with known interim powers
    shah = derive(by_study["Shah"])
    ramirez = derive(by_study["Ramirez"])
    fixed = FixedDesign(zo=shah.zo, c=shah.c)
    state = InterimState(zi=shah.zi, f=shah.f)
    dec = futility_decision(fixed, state, FutilityRule("IPPi", 0.30), CFG)
    assert dec.stop and dec.power < 0.01
    fixed = FixedDesign(zo=ramirez.zo, c=ramirez.c)
    state = InterimState(zi=ramirez.zi, f=ramirez.f)
    dec = futility_decision(fixed, state, FutilityRule("IPPi", 0.30), CFG)
    assert not dec.stop
    assert dec.power == pytest.approx(0.614, abs=0.005)
    dec = futility_decision(fixed, state, FutilityRule("PPi", 0.30), CFG)
    assert dec.stop
    assert dec.power == pytest.approx(0.042, abs=0.005)
    # boundary comparison is strict
    dec_eq = futility_decision(fixed, state,
                               FutilityRule("PPi", dec.power), CFG)
    assert not dec_eq.stop
