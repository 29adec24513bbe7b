"""Sizing a replication: how large must it be for a target power?

Inverts each power curve for the smallest relative sample size c
reaching the target, and shows the two honest failure modes: targets
above a method's ceiling are infeasible, and for non-monotone curves
the smallest solution can sit on a falling branch.
"""
from repower import (DesignConfig, InfeasibleTarget, SolveRequest,
                     p_to_z, solve_c)

config = DesignConfig(alpha=0.05)
zo = p_to_z(0.005, +1)

print(f"original zo = {zo:.4f}; target power 0.9")
for method in ("CP", "PP", "FBP", "CBP"):
    req = SolveRequest(method=method, target_power=0.9, zo=zo,
                       config=config)
    try:
        res = solve_c(req)
    except InfeasibleTarget as exc:
        print(f"{method:<4} infeasible: ceiling {exc.supremum:.4f}")
        continue
    note = f"  [{res.warning}]" if res.warning else ""
    print(f"{method:<4} c = {res.c:10.4f}  power = {res.power:.6f}{note}")

print("\nPP cannot beat 1 - po/2:")
req = SolveRequest(method="PP", target_power=0.999, zo=zo, config=config)
try:
    solve_c(req)
except InfeasibleTarget as exc:
    print(f"  target 0.999 refused, supremum {exc.supremum:.6f}")

print("\nmid-study: zi = 1.2 with interim data worth 0.8 of the "
      "original,\ngrow the total until IPPi reaches 0.8")
req = SolveRequest(method="IPPi", target_power=0.8, zo=zo, zi=1.2,
                   c_stage1=0.8, config=config)
res = solve_c(req)
print(f"  c = {res.c:.4f} (interim fraction f = {res.f:.4f})")
