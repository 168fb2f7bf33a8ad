"""
Belief functions as knowledge sets
==================================

A mass function becomes the set of distributions lying above its belief
function.  Dempster's rule and plain intersection then disagree sharply
when the two sources nearly contradict each other.
"""

import numpy as np

from credalscore import (Frame, MassFunction, bel, belief_to_credal, compare_updating,
                         plausibility, prob_bounds)

suspects = Frame(("a", "b", "c"))
a, b, c = (suspects.atom(i) for i in range(3))

m = MassFunction(suspects, {a: 0.5, a | b: 0.3, suspects.full(): 0.2})
k = belief_to_credal(m)
for i, name in enumerate(suspects.atoms):
    e = suspects.atom(i)
    print(f"{name}: Bel={bel(m, e):.2f} Pl={plausibility(m, e):.2f} interval={prob_bounds(k, e)}")
print(len(k.vertices()), "extreme points")

# two witnesses who agree only on an unlikely suspect
m1 = MassFunction(suspects, {a: 0.99, b: 0.01})
m2 = MassFunction(suspects, {c: 0.99, b: 0.01})
rep = compare_updating(m1, m2)
print(f"conflict {rep.kappa:.4f}")
print("Dempster:", {tuple(e.names()): round(v, 6)
                    for e, v in zip(rep.dempster_mass.focal_events(), rep.dempster_mass.masses.values())})
print("intersection empty:", rep.inconsistent)
