"""
Derivative-ratio distortion in one dimension
============================================

Compose n copies of the contraction f(x) = x/2 + x²/8 on [0, 1] and watch the
measured sup |log(F_n'(x) / F_n'(y))| sit under the budget C·L = 2 at every n.
The interval-image ratio form is shown at the end.
"""

import numpy as np

from bdp.distortion import interval_ratio_1d, run_1d
from bdp.scenarios import ScenarioSpec, build_sequence

for n in (1, 5, 25, 100, 500):
    seq, interval, budget = build_sequence(ScenarioSpec("1d-quadratic-contraction", n=n))
    rep = run_1d(seq, interval, 500, budget)
    print(
        f"n = {n:4d}  sup|log ratio| = {rep.empirical:.12f}"
        f"  budget C·L = {rep.theoretical_log_K:.1f}  [{rep.verdict}]"
    )

# ratio of interval images: left half vs right half of [0,1]
seq, interval, budget = build_sequence(ScenarioSpec("1d-quadratic-contraction", n=50))
rep = interval_ratio_1d(seq, interval, (0.0, 0.5), (0.5, 1.0), 200, budget)
lo, hi = np.exp(-rep.theoretical_log_K), np.exp(rep.theoretical_log_K)
print(f"\nimage ratio {rep.extras['ratio']:.6f} inside [{lo:.4f}, {hi:.1f}]  [{rep.verdict}]")
