"""Contact cross-sections for SU(2) acting on S^3 and S^5.

With mu = e_3^* the isotropy algebra is spanned by X_3 and its complement m by
X_1, X_2.  R = Psi^-1(S) is cut out by the m-components of the moment map; it
has dimension dim M - 2 and alpha restricts to a contact form on it.
"""

from contactbundles import crosssection as cs
from contactbundles.contact import verify_contact
from contactbundles.geomcore import sphere
from contactbundles.liealg import su2_action
from contactbundles.models import standard_form

for n in (2, 3):
    M = sphere(2 * n - 1)
    C = verify_contact(M, standard_form(n), M.sample(20, 0))
    act = su2_action(M, n)
    sl = cs.build_slice(act.group, [0.0, 0.0, 1.0])
    pts = cs.find_cross_section(C, act, sl, 10, 0)
    rep = cs.verify_cross_section_contact(pts, sl, C, act)
    worst = max(max(r.a, r.b, r.c) for r in (cs.verify_splitting(p.point, sl, C, act)
                                             for p in pts))
    print(f"SU(2) on {M.name}: dim R = {rep.dim_R}, relative Pfaffian floor "
          f"{rep.min_relative_pfaffian:.3f}, worst splitting residual {worst:.1e}")
