"""Every irreducible family of C(B_q^{2n}) passes the same relation checks.

Run:  python demos/irreps.py [n]
"""

import sys

from qball.representation import build_irrep, list_irreps
from qball.verify import check_ball_relations, check_cuntz_krieger, draw_thetas

n = int(sys.argv[1]) if len(sys.argv) > 1 else 3
q = 0.5
thetas = draw_thetas(n, seed=0)

print(f"n={n}: {len(list_irreps(n))} families")
for fam in list_irreps(n):
    theta = thetas.get(fam.name, 0.0)
    rep = build_irrep(fam.member(theta), n, q, 6)
    reports = check_cuntz_krieger(rep) + check_ball_relations(rep)
    worst = max(r.residual for r in reports)
    where = f"theta={theta:.4f}" if fam.is_circle else "point"
    print(
        f"  {fam.name:<9} {where:<15} dim={rep.dim:<5} checks={len(reports):<3} "
        f"worst residual={worst:.1e} all pass={all(r.passed for r in reports)}"
    )
