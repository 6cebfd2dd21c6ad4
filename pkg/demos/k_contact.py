"""K-contact metrics on torus bundles with ellipsoid fibres.

For T^2 bundles over S^2 with fibre E_a the moment image is the segment
{t >= 0, a_1 t_1 + a_2 t_2 = 2}; for the diagonal circle it is a point.  When the connection is fat on it, alpha_M is
contact, its Reeb field is vertical and Killing for the assembled compatible
metric, and the horizontal part of that metric changes along the fibre.
"""

import numpy as np

from contactbundles import kcontact as kc
from contactbundles.models import fiber_product_bundle, half_flat_torus_bundle, hopf_bundle

for label, bundle, a in (("Hopf x E_(1,1)", hopf_bundle(), [1.0, 1.0]),
                         ("T^2 x E_(1,2)", fiber_product_bundle(), [1.0, 2.0]),
                         ("half-flat T^2 x E_(1,2)", half_flat_torus_bundle(), [1.0, 2.0])):
    Y = kc.build_yamazaki_scenario(bundle, a, samples=10, seed=0, raise_on_fail=False)
    print(label)
    print("-" * 50)
    lo, hi = Y.moment_samples.min(axis=0), Y.moment_samples.max(axis=0)
    print(f"  moment image: from {np.round(lo, 4)} to {np.round(hi, 4)}")
    print(f"  fat on the simplex: {Y.fatness.passed}   alpha_M contact: {Y.contact.passed}")
    if not Y.contact.passed:
        print(f"  witness fibre point: {np.round(Y.assoc.split(Y.contact.witness)[1], 3)}")
        print()
        continue
    X = kc.total_samples(Y.assoc, 6, 1, kc.fiber_samples(Y.fiber.manifold, 6, 2))
    kr, _ = kc.killing_residual(Y.metric, X[:2])
    print(f"  Reeb vertical: {kc.reeb_verticality(Y.assoc, X):.1e}   |L_R g| = {kr:.1e}")
    p = Y.assoc.split(X[0])[0]
    d, i, j = kc.fiber_dependence(Y.assoc, Y.metric, p, kc.fiber_samples(Y.fiber.manifold, 6, 3))
    print(f"  horizontal metric block: largest change along the fibre = {d:.3f}")
    print()
