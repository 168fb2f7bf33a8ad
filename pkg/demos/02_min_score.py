"""
Choosing one distribution from a knowledge set
==============================================

Under the log score the least committal member of the set wins, which is
the maximum-entropy distribution.  The quadratic score picks a different
member.  Both come with an LP certificate showing the choice is optimal
against every distribution in the set.
"""

import numpy as np

from credalscore import (Frame, LinearConstraint, RandVar, from_constraints, game_bounds,
                         log_score, min_score_estimate, quadratic_score)

faces = Frame(tuple(str(i) for i in range(1, 7)))
x = RandVar(faces, np.arange(1, 7))
k = from_constraints(faces, [LinearConstraint.expectation(x, "==", 4.5)])

for rule in (log_score(), quadratic_score()):
    est = min_score_estimate(k, rule)
    gb = game_bounds(k, rule)
    print(rule.kind)
    print("  estimate", np.round(est.q.p, 5))
    print(f"  H = {est.h_value:.8f}   certificate gap = {est.certificate_gap:.1e}")
    print(f"  value bounds [{gb.lower:.8f}, {gb.upper:.8f}]")

# the log-score answer has the exponential-family form exp(lambda * x)
q = min_score_estimate(k, log_score()).q.p
print("successive log-ratios:", np.round(np.diff(np.log(q)), 6))
