"""The balanced three-slit run: one slit grows, two are erased in sync.

The balancing solver splits the erasure rate between the two old slits
so their tips stay mirror images of each other.  Along the run the
marked point y can only move outward -- this is the quantitative heart
of the squeezing-function theorem, watched step by step.
"""

import math

from slitmap import AnnulusGeometry, DrivingFunction
from slitmap import key_monotonicity_experiment, solve_balancing_schedule

geom = AnnulusGeometry(0.2)
T = 0.1
y0 = 0.5
xi_minus0 = 2 * math.pi / 3
xi_plus0 = 2 * math.pi - xi_minus0
driving = DrivingFunction.constant(math.pi, T)

schedule = solve_balancing_schedule(xi_plus0, xi_minus0, driving, y0,
                                    geom, T, 1e-3)
lams = [(schedule.a_values[i + 1] - schedule.a_values[i])
        / (schedule.s_grid[i + 1] - schedule.s_grid[i])
        for i in range(len(schedule.s_grid) - 1)]
print("symmetric case: lambda stays at 1/2")
print("  min lambda", min(lams), " max lambda", max(lams))
print("  a(T) =", schedule.a_values[-1], " (T/2 =", T / 2, ")")

y_T, cert = key_monotonicity_experiment(driving, xi_plus0, xi_minus0, y0,
                                        geom, T, 1e-3)
print("y_T =", y_T, "> y0 =", y0)
defect = max(abs((2 * math.pi - st.xi_plus) - st.xi_minus) for st in cert.states)
print("max symmetry defect along the run:", defect)

steps = [math.log(b.y_tau / a.y_tau) for a, b in zip(cert.states, cert.states[1:])]
print("smallest per-step log-increment:", min(steps), "(never negative)")

# an off-center growing slit still balances, with lambda != 1/2
driving2 = DrivingFunction.constant(2.8, T)
schedule2 = solve_balancing_schedule(xi_plus0, xi_minus0, driving2, y0,
                                     geom, T, 1e-3)
lams2 = [(schedule2.a_values[i + 1] - schedule2.a_values[i])
         / (schedule2.s_grid[i + 1] - schedule2.s_grid[i])
         for i in range(len(schedule2.s_grid) - 1)]
print("asymmetric driving: lambda in [%.4f, %.4f]" % (min(lams2), max(lams2)))
