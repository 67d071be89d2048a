"""Six value quantales side by side: order, addition, way-above and the law suite."""

from qmetric import DDF, Errors, ExtReal, TruthValues, UnitTruncated
from qmetric.ddf import DistanceDistribution, boxplus
from qmetric.laws import check_quantale_laws
from qmetric.lattice import powerset_frame

ext = ExtReal()
print("ExtReal: 5 -. 3 =", ext.truncated_sub(5.0, 3.0), "| 0.5 >> 0.2:", ext.way_above(0.5, 0.2),
      "| 0.2 >> 0.2:", ext.way_above(0.2, 0.2))
err = Errors()
print("Errors (reversed order): 0.7 (+) 0.6 =", round(err.add(0.7, 0.6), 12), "| 0.9 <= 0.3:", err.leq(0.9, 0.3))

F = DistanceDistribution.from_steps([(1.0, 1.0)])
print("Distance distributions: jump at 1 [+] jump at 1 =", boxplus(F, F))

for q in (TruthValues(), ext, UnitTruncated(), err, DDF(), powerset_frame(3)):
    rep = check_quantale_laws(q, budget=500, seed=0)
    print(f"{q.name:10s} {len(rep.checks)} laws, {'all pass' if rep.passed else rep.failures()}")
