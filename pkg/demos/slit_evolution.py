"""Single-slit growth runs and the sign law of the marked point."""

# %%
import math

from slitmap import AnnulusGeometry, DrivingFunction, KernelPoint, kernel_P
from slitmap import evolve_inner_slit, evolve_outer_slit

geom = AnnulusGeometry(0.2)

# %%  grow a slit from the unit circle; track two interior points
driving = DrivingFunction.constant(0.0, 0.05)
traj = evolve_outer_slit(driving, [0.5 + 0.3j, -0.6], geom, 5e-4)
print("outer slit, T = 0.05")
print("  r_T =", traj.final.r_t, " (= r0 * e^T:", geom.r * math.exp(0.05), ")")
for lab, w in traj.final.tracked_points:
    print(" ", lab, "->", w, " |.| =", abs(w))

# %%  grow from the inner circle at angle pi: the marked point moves out
driving = DrivingFunction.constant(math.pi, 0.1)
traj = evolve_inner_slit(driving, 0.5, [], geom, 1e-4)
print("inner slit at angle pi:   y: 0.5 ->", traj.final.y_t)
p = kernel_P(KernelPoint(geom.r, 0.5, math.pi))
print("  kernel_P at the start:", p, "(positive, so y grows)")

driving = DrivingFunction.constant(0.0, 0.1)
traj = evolve_inner_slit(driving, 0.5, [], geom, 1e-4)
print("inner slit at angle 0:    y: 0.5 ->", traj.final.y_t)
p = kernel_P(KernelPoint(geom.r, 0.5, 0.0))
print("  kernel_P at the start:", p, "(negative, so y shrinks)")

# %%  the trajectory is exportable
import io

buf = io.StringIO()
traj.write_csv(buf)
print("trajectory CSV head:")
print("\n".join(buf.getvalue().splitlines()[:4]))
