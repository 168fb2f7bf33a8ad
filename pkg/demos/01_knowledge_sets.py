"""
Knowledge sets and probability intervals
========================================

A die with faces 1..6 whose mean is known to be 4.5, nothing else.
"""

import numpy as np

from credalscore import Frame, LinearConstraint, RandVar, from_constraints, prob_bounds

faces = Frame(tuple(str(i) for i in range(1, 7)))
x = RandVar(faces, np.arange(1, 7))
k = from_constraints(faces, [LinearConstraint.expectation(x, "==", 4.5)])

# extreme points of the set: mixtures of two faces straddling the mean
for v in k.vertices():
    print(np.round(v.p, 4))

# each face gets an interval rather than a number
for i, name in enumerate(faces.atoms):
    lo, hi = prob_bounds(k, faces.atom(i))
    print(f"P({name}) in [{lo:.3f}, {hi:.3f}]")

high = faces.event(["5", "6"])
print("P(5 or 6) in [%.3f, %.3f]" % prob_bounds(k, high))
