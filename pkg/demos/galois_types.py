"""Galois types in two toy classes: discrete truth-valued sets and labelled points on a line."""

from qmetric.galois import check_AP, check_tameness, distance_table, type_distance_report, types_over
from qmetric.toys import discrete_truth_class, line_class

disc = discrete_truth_class(3)
print(disc, "| AP:", check_AP(disc).passed)
for t in types_over(disc, "D2"):
    print("  ", t)
print("  distances:", distance_table(disc, "D2"))
print("  strongly 1-tame at eps = inf:", check_tameness(disc, 1, float("inf")).passed)
print("  0-tame at eps = 0:", check_tameness(disc, 0, 0.0, 0.0).passed, "(the empty restriction forgets too much)")

line = line_class()
ts = types_over(line, "L{}")
p, q = ts[0], ts[2]
r = type_distance_report(line, p, q)
print(line, "| new-point types over the empty structure:", len(ts))
print(f"  d({p}, {q}) = {r.value}, attained in {r.witness.apex.name} among {r.cocones} co-cones")

broken = line_class(drop=[(0, 1, 2)])
rep = check_AP(broken)
print(broken, "| AP:", rep.passed, "| first bad span:", rep["amalgamation"].witnesses[0])
