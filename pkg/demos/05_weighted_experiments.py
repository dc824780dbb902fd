"""Weighted-inequality experiments end to end.

Runs a small Carleson Fefferman-Stein battery (ratio of the weighted
operator norm against the three-fold maximal control), then the sharpness
probe contrasting two against three compositions of M on shrinking bumps.
"""

from mmfs import ExperimentSpec, run_experiment, sharpness_probe

spec = ExperimentSpec(kind="FS_CARLESON", p=2.0, k=3, levels=8, trials=24, seed=0)
records = run_experiment(spec)
print("FS ratios for the Carleson operator against M^3 (24 weights):")
by_family = {}
for rec in records:
    fam = rec.params["family"]
    by_family.setdefault(fam, []).append(rec.ratio)
for fam, ratios in by_family.items():
    print(f"  {fam:16s}: max {max(ratios):.4f}  mean {sum(ratios) / len(ratios):.4f}")
print(f"  suite max: {max(r.ratio for r in records):.4f}  (uniform across weight families)")

print("\nsharpness probe at p = 2 (bump weights, eps = 2^-3 .. 2^-9):")
trend = sharpness_probe(2.0, 2, 3, [2.0 ** (-j) for j in range(3, 10)], levels=9, budget=60)
print("  eps        ratio vs M^2   ratio vs M^3")
for eps, lo, hi in zip(trend.eps, trend.ratios_low, trend.ratios_high):
    print(f"  {eps:8.6f}   {lo:10.4f}   {hi:10.4f}")
print(f"  M^2 growth factor: {trend.growth_low:.3f} (climbing: the control is too weak)")
print(f"  M^3 max/min      : {trend.spread_high:.3f} (stable: the control is sufficient)")
