"""Parallel transport for the contact connection around the equator of S^2.

The transport map between fibres of Hopf x E_(1,2) sends contact planes to
contact planes and keeps the co-orientation.  Fewer RK4 steps than the
scenario default keep this quick.
"""

import numpy as np

from contactbundles import bundles as bd
from contactbundles.scenarios import hopf_associated, transport_start

assoc = hopf_associated([1.0, 2.0], 0)
x0 = transport_start(assoc, assoc.fiber.manifold.sample(1, 0).points[0])
loop = bd.great_circle(assoc.pi(x0), np.array([0.0, 1.0, 0.0]))
rep = bd.transport_report(assoc, loop, x0, steps=200)
print(f"base point error at the end of the loop: {rep.base_error:.1e}")
print(f"largest angle off the target contact plane: {rep.max_hyperplane_angle:.1e}")
print(f"co-orientation before / after: {rep.coorientation_values[0]:.3f} / "
      f"{rep.coorientation_values[1]:.3f}")
print(f"fibre point moved by holonomy: {np.linalg.norm(rep.endpoint - x0):.3f}")
