"""
Two ways to learn
=================

New evidence about the same unknown distribution shrinks the knowledge
set by intersection.  Observing an event instead conditions each member.
"""

import numpy as np

from credalscore import (Frame, LinearConstraint, condition_set, from_constraints, intersect,
                         is_empty, prob_bounds)
from credalscore.errors import NullEventError

weather = Frame(("sun", "cloud", "rain"))
sun, rain = weather.event("sun"), weather.event("rain")

k1 = from_constraints(weather, [LinearConstraint.prob_bound(sun, ">=", 0.3)])
k2 = from_constraints(weather, [LinearConstraint.prob_bound(rain, ">=", 0.2),
                                LinearConstraint.prob_bound(sun, "<=", 0.6)])
both = intersect(k1, k2)
for i, name in enumerate(weather.atoms):
    e = weather.atom(i)
    print(f"{name:6s} {prob_bounds(k1, e)} -> {np.round(prob_bounds(both, e), 3)}")

# contradictory reports leave nothing behind
k3 = from_constraints(weather, [LinearConstraint.prob_bound(sun, "<=", 0.1)])
print("k1 and k3 consistent?", not is_empty(intersect(k1, k3)))

# observing "not rain" conditions every member of the updated set
dry = ~rain
post = condition_set(both, dry)
for v in post.vertices():
    print({name: round(float(x), 4) for name, x in zip(v.frame.atoms, v.p)})

# the vacuous part of a set can make an observation possibly null
try:
    condition_set(k1, rain)
except NullEventError as exc:
    print("refused:", exc)
print(condition_set(k1, rain, allow_boundary=True).vertices())
