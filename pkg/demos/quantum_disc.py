"""The quantum disc: one loop, one exit, and a weighted shift.

Run:  python demos/quantum_disc.py
"""

import numpy as np

from qball.graphs import SHORT_LABELS

from qball.polar import CornerContext, modulus, phase_in_corner
from qball.representation import PiRep, build_irrep
from qball.verify import residual

q, cutoff = 0.5, 6
rep = build_irrep(PiRep(), 1, q, cutoff)
z = rep.x[0]
print(f"basis ({rep.dim} vectors):", rep.labels(SHORT_LABELS[1]))

# z moves zeta_i to sqrt(1 - q^(i+1)) zeta_(i+1)
weights = [z[i + 1, i].real for i in range(rep.dim - 1)]
print("shift weights  :", np.round(weights, 6))
print("sqrt(1-q^(i+1)):", np.round([np.sqrt(1 - q ** (i + 1)) for i in range(rep.dim - 1)], 6))

# z*z - q zz* = (1-q) 1 away from the truncation edge
lhs = z.conj().T @ z - q * z @ z.conj().T
print("disc relation residual on interior(2):", residual(lhs - (1 - q) * rep.identity(), rep.interior(2)))

# |z| is diagonal and the phase of z is the unilateral shift S
print("|z| diagonal:", np.round(modulus(z).diagonal().real, 6))
u = phase_in_corner(z, CornerContext(np.ones(rep.dim, bool), rep.interior(1)))
print("phase(z) - S residual on interior(1):", residual(u - rep.S(1), rep.interior(1)))
