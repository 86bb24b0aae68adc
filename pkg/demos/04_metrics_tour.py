"""
Reading a radiation pattern like a scorecard
============================================

A pattern is a hemisphere of numbers; the metrics reduce it to a few
that matter: where the main lobe went (target deviation), how much
power leaks sideways (side-lobe level and accumulation), and how sharp
the beam is (half-power beamwidth). This script walks through the
report for the fault-free reference surface.
"""

import mssim as ms

geometry = ms.MetasurfaceGeometry.from_frequency(15, 15, 4e-3, 25e9)
target = ms.SteeringTarget(45.0, 45.0)
palette = ms.default_palette()
coding = ms.generate_coding(geometry, target, palette)
grid = ms.ReflectionGrid.from_coding(coding, palette)
pattern = ms.evaluate_pattern(grid, ms.AngularGrid.survey())

# refine="all" polishes every lobe peak off-grid with the exact field
report = ms.analyze_pattern(pattern, target,
                            field_fn=ms.field_fn_for(grid), refine="all")

# ------------------------------------------------------------- the headline
print(f"main lobe:        ({report.main_direction[0]:.2f}, "
      f"{report.main_direction[1]:.2f}) deg")
print(f"target deviation: {report.td_deg:.2f} deg "
      "(how far the beam landed from where it was aimed)")
print(f"level at target:  {report.d_target_db:.2f} dB")
print(f"level at beam:    {report.d_actual_db:.2f} dB (0 by self-normalization)")

# --------------------------------------------------------------- the lobes
# The hemisphere splits into lobes by watershed on |E|; lobe 0 is the main.
print(f"\n{report.n_lobes} lobes found; the five strongest:")
for lobe in sorted(report.lobes, key=lambda l: l.peak_magnitude, reverse=True)[:5]:
    print(f"  ({lobe.peak_theta_deg:6.2f}, {lobe.peak_phi_deg:6.2f}) deg   "
          f"peak {lobe.peak_magnitude:7.2f}   power {lobe.power:.4f}")

# ------------------------------------------------------------ side leakage
print(f"\nside-lobe level (nearest): {report.sll_db:.2f} dB")
print(f"side-lobe level (largest): {report.sll_max_db:.2f} dB")
print(f"side-lobe accumulation:    {report.sla_db:.2f} dB "
      "(all side power vs main power)")

# -------------------------------------------------------------- beam width
print(f"half-power beamwidth: {report.hpbw_deg:.2f} deg "
      "(mean of the theta and phi cuts)")

# ------------------------------------------------------------------ export
print("\nCSV row (the per-trial schema):")
print("  " + ms.METRICS_CSV_HEADER)
print("  GOLD,0.0,0," + ",".join(report.csv_fields()))
print("\nthe same report from the shell: mssim golden")
