"""Fatness of the Hopf connection and contactness of the associated bundle.

The Hopf circle bundle S^3 -> S^2 carries the connection A = sum(x dy - y dx).
Its curvature pairs nondegenerately with every nonzero covector, so the
associated bundle with fibre (S^3, alpha_std) is contact.  The flat product
S^2 x S^1 is the counterpart where both properties fail together.
"""

import numpy as np

from contactbundles import bundles as bd
from contactbundles import kcontact as kc
from contactbundles.models import flat_circle_bundle, hopf_bundle
from contactbundles.scenarios import flat_associated, hopf_associated

H = hopf_bundle()
p = H.total.sample(1, 0).points[0]
print("Hopf bundle")
print("-" * 50)
print("curvature on a horizontal orthonormal frame:")
print(np.round(bd.curvature_matrix(H, p)[:, :, 0], 12))

S = H.total.sample(100, 1)
for mu in (1.0, -2.0, 0.0):
    rep = bd.fatness_check(H, [[mu]], S)
    print(f"  mu = {mu:5.1f}: fat = {rep.passed!s:5}  min relative det = {rep.min_relative_det:.3f}")

F = flat_circle_bundle()
rep = bd.fatness_check(F, [[1.0]], F.total.sample(100, 1))
print(f"flat S^2 x S^1, mu = 1: fat = {rep.passed}  (relative det {rep.min_relative_det:.1e})")
print()

print("Associated bundles")
print("-" * 50)
for label, assoc in (("Hopf x S^3", hopf_associated([1.0, 1.0], 0)),
                     ("Hopf x E_(1,2)", hopf_associated([1.0, 2.0], 0)),
                     ("flat x S^3", flat_associated(0))):
    X = kc.total_samples(assoc, 100, 2)
    rep = bd.verify_contact_associated(assoc, X, raise_on_fail=False)
    print(f"{label:16s} contact = {rep.passed!s:5}  relative |Pf| floor = "
          f"{rep.min_relative_pfaffian:.2e}  sigma identity error = {rep.sigma_identity_error:.1e}")
