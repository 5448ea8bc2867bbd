"""Scan the Brillouin zone for band touchings in the three regimes.

The nearest-neighbor-only lattice keeps four non-defective touchings pinned
to the X points for any Peierls phase and nearest-neighbor nonreciprocity.
Switching on the diagonal hoppings at gamma = 0 or pi/2 moves them to the
M or zone-center momenta and surrounds them with defective exceptional
points at the crossings of the Re/Im discriminant zero curves.
"""

import numpy as np

from nhdeg import (ModelParams, dispersion, find_degeneracies,
                   scan_discriminant, write_vector_field_csv, zero_curves)

REGIMES = {
    "nearest-neighbor (X touchings)": ModelParams(gamma=0.5, gx=0.5, gy=0.3),
    "diagonal hopping, gamma=0 (M touchings)":
        ModelParams(t1=0.75, ga=0.5, gb=0.3, gamma=0.0),
    "diagonal hopping, gamma=pi/2 (zone-center touchings)":
        ModelParams(t1=0.75, ga=0.5, gb=0.3, gamma=np.pi / 2),
    "gapped (no touchings)": ModelParams(t1=0.75, ga=0.5, gb=0.3, gamma=0.5),
}

for label, p in REGIMES.items():
    res = find_degeneracies(p, 301, 301)
    print(f"\n{label}")
    for q in res.points:
        print(f"  ({q.kx:+.6f}, {q.ky:+.6f})  {q.kind:12s} "
              f"|eta| = {q.eta_residual:.1e}  overlap = {q.coalescence_overlap:.3f}")
    if not res.points:
        print("  none")

# the discriminant field and its zero curves for the gamma = 0 regime
p = REGIMES["diagonal hopping, gamma=0 (M touchings)"]
field = scan_discriminant(p, 301, 301)
re_curves = zero_curves(field, "Re_eta")
im_curves = zero_curves(field, "Im_eta")
print(f"\nRe eta = 0: {len(re_curves.polylines)} polylines; "
      f"Im eta = 0: {len(im_curves.polylines)} polylines")
write_vector_field_csv("discriminant_field.csv", field)
print("field exported to discriminant_field.csv (kx, ky, re_eta, im_eta)")

# band energies along a momentum cut through an X point
p1 = REGIMES["nearest-neighbor (X touchings)"]
print("\nbands along ky = kx (through the X touching):")
for k in np.linspace(np.pi / 2 - 0.2, np.pi / 2 + 0.2, 5):
    plus, minus = dispersion(p1, k, k)
    print(f"  k = {k:+.3f}: eps+ = {plus:+.4f}  eps- = {minus:+.4f}")
