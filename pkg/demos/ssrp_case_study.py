"""Two-stage replication project replay on the bundled 21-study dataset.

Each replication ran a first stage worth roughly the original sample
size and continued to a larger second stage only if the interim result
looked promising.  The demo derives the unitless inputs from the raw
effects, reprints the interim powers for the ten continued studies,
shows the design-stage powers under shrinkage for all 21, and replays a
futility rule against the known final outcomes.
"""
from repower import (FutilityRule, derive, futility_replay, load_csv,
                     reproduce_design_powers, reproduce_interim_powers)

records = load_csv()
continued = [r for r in records if r.continued]
print(f"{len(records)} studies, {len(continued)} continued to stage 2\n")

report = reproduce_interim_powers(records)
print("interim power (percent) for the continued studies")
print(f"{'study':<30} {'CPi':>6} {'IPPi':>6} {'PPi':>6}")
for row in report.rows:
    print(f"{row.study:<30} {row.cpi:6.1f} {row.ippi:6.1f} {row.ppi:6.1f}")
print(f"largest deviation from the published table: "
      f"{report.max_abs_diff_pp:.3f} percentage points\n")

design = reproduce_design_powers(records, shrinkage=0.25)
print("design-stage power at the stage-1 size, shrinkage 0.25:")
print(f"  CP >= PP for all studies:   {design.cp_ge_pp_all}")
print(f"  CBP >= FBP for all studies: {design.cbp_ge_fbp_all}")
print(f"  FBP - PP changes sign:      {design.fbp_pp_sign_varies}\n")

for method in ("IPPi", "PPi"):
    rule = FutilityRule(method=method, boundary=0.30)
    replay = futility_replay(records, rule)
    print(f"futility rule {method} < 0.30: stops "
          f"{replay.n_failed_stopped} of {replay.n_failed} eventual "
          f"failures, {replay.n_replicated_stopped} of "
          f"{replay.n_continued - replay.n_failed} eventual successes")

shah = next(r for r in records if r.study.startswith("Shah"))
d = derive(shah)
print(f"\nexample derivation ({shah.study}): zo = {d.zo:.3f}, "
      f"zi = {d.zi:.3f}, c = {d.c:.2f}, f = {d.f:.2f}")
