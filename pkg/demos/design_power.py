"""Design-stage power of a replication as the study grows.

Walks the four power notions (CP, PP, FBP, CBP) across relative sample
sizes for a convincingly significant original study, then locates the
analytic landmarks: the CP/PP and FBP/CBP crossings at 50% and, for an
overwhelmingly significant original, the interior minimum of FBP.
"""
import numpy as np

from repower import (DesignConfig, FixedDesign, cp_pp_intersection,
                     design_power, fbp_cbp_intersection, fbp_minimum,
                     p_to_z)

config = DesignConfig(alpha=0.05)
zo = p_to_z(0.005, +1)
print(f"original study: two-sided p = 0.005, zo = {zo:.4f}")
print(f"pooled-analysis level alpha_tilde = {config.alpha_tilde:.5f}\n")

grid = np.array([0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0])
rows = {m: design_power(m, zo, grid, config)
        for m in ("CP", "PP", "FBP", "CBP")}
print("power by relative sample size c = nr / no")
print("   c     CP      PP      FBP     CBP")
for i, c in enumerate(grid):
    vals = "  ".join(f"{rows[m][i]:.4f}" for m in rows)
    print(f"{c:5.2f}  {vals}")

cross = cp_pp_intersection(zo, config)
print(f"\nCP and PP cross 50% at c = {cross:.4f}")
fc = fbp_cbp_intersection(zo, config)
print(f"FBP and CBP cross 50% at c = {fc.c:.4f} (feasible: {fc.feasible})")

# a study already significant at the pooled level: FBP starts at 1,
# dips, and recovers towards 1 - po/2 while CBP has no 50% crossing
strong = p_to_z(8e-6, +1)
mn = fbp_minimum(strong, config)
print(f"\nvery strong original (p = 8e-6, zo = {strong:.4f}):")
print(f"  FBP dips to {mn.power:.4f} at c = {mn.c:.4f} before recovering")
print(f"  FBP/CBP crossing feasible: "
      f"{fbp_cbp_intersection(strong, config).feasible}")
