"""
Word-driven alternation and the Fibonacci trace map
===================================================

A mechanical word with the golden-ratio slope schedules two 1D contractions;
the distortion budget covers whichever map the word picks.  The trace map
(x, y, z) ↦ (2xy − z, x, y) only has grid-sampled seminorms, so its verdict is
honest: hypothesis-unverified, never a claimed bound.
"""

import numpy as np

from bdp.distortion import run_1d, run_curve
from bdp.scenarios import (
    ScenarioSpec,
    SturmianParams,
    build_sequence,
    fibonacci_trace_map,
    sturmian_word,
    trace_map_invariant,
)

word = sturmian_word(SturmianParams(slope=2.0 - (1.0 + np.sqrt(5.0)) / 2.0, length=21))
print("fibonacci word:", "".join(map(str, word)))

seq, interval, budget = build_sequence(ScenarioSpec("sturmian-two-maps", n=21))
rep = run_1d(seq, interval, 400, budget)
print(f"sturmian run: sup|log ratio| = {rep.empirical:.6f} ≤ {rep.theoretical_log_K:.3f}  [{rep.verdict}]")

# the trace map preserves G(x,y,z) = x² + y² + z² − 2xyz − 1 along orbits
m = fibonacci_trace_map()
p = np.array([0.5, 0.5, 0.5])
g0 = trace_map_invariant(p)
drift = 0.0
for _ in range(30):
    p = m.func(p)
    drift = max(drift, abs(trace_map_invariant(p) - g0))
print(f"invariant drift over 30 steps: {drift:.2e}")

seq, gamma0, budget = build_sequence(ScenarioSpec("fibonacci-trace-map", n=4))
rep = run_curve(seq, gamma0, 32, 64, budget)
print(f"trace-map run: verdict = {rep.verdict} (seminorms are sampled, not proven)")
