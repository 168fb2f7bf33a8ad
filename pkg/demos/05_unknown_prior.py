"""
A prior for a test of unknown base rate
=======================================

A binary test fires with probability q when the condition holds and r
when it does not.  With nothing known about the base rate p, the chosen
prior is the one that makes the test least useful in expectation.
"""

import numpy as np

from credalscore import (BinaryChannel, best_prior, eq3_solve, log_score, posterior_transfer_gap,
                         prior_study)
from credalscore.infosys import binary_joint_array, conditional_score_array, uninformative_prior

q, r = 0.9, 0.4
ch = BinaryChannel(q, r)

# objective over p, for one observation
grid = np.linspace(0.01, 0.99, 99)
vals = [conditional_score_array(binary_joint_array(p, ch), log_score()) for p in grid]
print("grid minimum near p =", grid[int(np.argmin(vals))])
print("root of the stationarity condition:", eq3_solve(q, r))
print("r / (q + r) for comparison:", uninformative_prior(q, r))

# more observations move the prior
for row in prior_study(q, r, [1, 2, 3, 5, 10]):
    print(f"N={row.n_obs:2d}  p*={row.prior:.8f}")

# updating the N=1 prior on one positive result and predicting the next
# result is not the same as solving for the N=2 prior directly
rep = posterior_transfer_gap(ch)
print(f"transfer {rep.predictive_transfer:.6f} vs joint {rep.predictive_joint:.6f}")

# symmetric tests stay at one half
print([round(best_prior(BinaryChannel(0.8, 0.2, n)), 10) for n in (1, 4, 9)])
