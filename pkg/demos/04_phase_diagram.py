"""Map the insulating phases against the staggered potential.

The two X-point sectors close their gaps at v = -+ 2 t1 (cosh ga + cosh gb);
between the boundaries the gapped system is a topological insulator with
chiral edge modes, outside it is a trivial band insulator.
"""

import numpy as np

from nhdeg import ModelParams, phase_boundaries, phase_classify

base = ModelParams(t1=0.75, ga=0.5, gb=0.3, gamma=0.5)
v1, v2 = phase_boundaries(base)
print(f"boundaries at t1=0.75, ga=0.5, gb=0.3: v1 = {v1:.4f}, v2 = {v2:.4f}")

print("\nsweep of the staggered potential:")
for v in np.linspace(-5, 5, 21):
    label = phase_classify(base.replace(v=float(v)))
    print(f"  v = {v:+.2f}  {label}")

print("\nboundary curves over the nonreciprocity (ga = gb = g):")
print("  g      v1        v2")
for g in np.linspace(0.0, 1.0, 6):
    vb1, vb2 = phase_boundaries(base.replace(ga=float(g), gb=float(g)))
    print(f"  {g:.1f}  {vb1:+.4f}  {vb2:+.4f}")

# exactly on a boundary the corresponding X sector becomes degenerate
from nhdeg import discriminant_function
p_at_v2 = base.replace(v=v2)
eta_x2 = discriminant_function(p_at_v2, np.pi / 2, -np.pi / 2)
print(f"\nat v = v2 the X2 discriminant closes: |eta(X2)| = {abs(eta_x2):.2e}")
