"""Partial metrics over a finite frame read as Omega-valued equality, and back."""

import numpy as np

from qmetric.lattice import random_frame
from qmetric.omega import check_omega_laws, check_partial_axioms, from_omega_set, random_partial_space, to_omega_set

rng = np.random.default_rng(0)
agree = exact = 0
for i in range(100):
    frame = random_frame(rng)
    sp = random_partial_space(frame, rng, 4, ("closed", "raw", "asym")[i % 3])
    o = to_omega_set(sp)
    exact += bool((from_omega_set(o).dist == sp.dist).all())
    d, e = check_partial_axioms(sp), check_omega_laws(o)
    agree += d["symmetry"].passed == e["symmetry"].passed and d["subadditivity"].passed == e["transitivity"].passed
print(f"exact round trips: {exact}/100, law verdicts transported: {agree}/100")
