"""Interim power as a function of the data still to be collected.

Contrasts a significant interim (p = 0.04) with a completely equivocal
one (p = 0.5): with significance in hand all three interim powers start
near 1 for a tiny remainder, dip, and approach method-specific ceilings;
without it PPi can never exceed 75% no matter how much data follows.
"""
import numpy as np

from repower import (DesignConfig, ippi_limit, p_to_z, ppi_minimum,
                     remaining_n_curve, weight_dominance_threshold)

config = DesignConfig(alpha=0.05)
zo = p_to_z(0.005, +1)
c_stage1 = 0.75          # interim data worth 3/4 of the original study
nj = np.array([0.05, 0.25, 1.0, 4.0, 16.0, 1e4])

for pi in (0.04, 0.5):
    zi = p_to_z(pi, +1)
    curve = remaining_n_curve(zo, zi, c_stage1, nj, config)
    print(f"interim p = {pi}, zi = {zi:.4f}")
    print(" nj/no     CPi     IPPi    PPi")
    for x, a, b, d in zip(nj, curve.cpi, curve.ippi, curve.ppi):
        print(f"{x:8.2f}  {a:.4f}  {b:.4f}  {d:.4f}")
    limit = ippi_limit(zo, zi, c_stage1, config)
    print(f"IPPi ceiling {limit:.4f}, PPi ceiling {1 - pi / 2:.4f}")
    if zi > -config.z_alpha:
        mn = ppi_minimum(zi, config)
        print(f"PPi never drops below {mn:.4f}")
    print()

c = 4.0
print(f"with c = {c}, the original outweighs the interim up to "
      f"f = {weight_dominance_threshold('CPi', c):.4f} in CPi and "
      f"f = {weight_dominance_threshold('IPPi', c):.4f} in IPPi")
