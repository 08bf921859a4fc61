"""Closed-form squeezing values, the refuted conjecture, product bounds."""

import math
import warnings

from slitmap import (ProductQuery, SqueezeQuery, annulus_times_disk_bound,
                     conjectured_dgz, product_lower_bound, squeeze_annulus,
                     squeeze_s1_s2)

q = SqueezeQuery(0.1, 0.5)
print("annulus r=0.1, |z|=0.5")
print("  squeezing value:", squeeze_annulus(q))
print("  one-sided pair: ", squeeze_s1_s2(q))
print("  conjectured:    ", conjectured_dgz(q))
print("  gap:            ", squeeze_annulus(q) - conjectured_dgz(q))

# the gap crosses zero nowhere in the conjecture's range for this r
r = 0.1
sq = math.sqrt(r)
print("sign of (theorem - conjecture) on |z| in (sqrt(r), 1):")
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    for k in range(8):
        zm = sq + (1 - sq) * (k + 0.5) / 8
        qq = SqueezeQuery(r, zm)
        print(f"  |z|={zm:.3f}  diff={squeeze_annulus(qq) - conjectured_dgz(qq):+.5f}")

# the global minimum sits at |z| = sqrt(r)
q_min = SqueezeQuery(0.16, 0.4)
print("at |z| = sqrt(r):", squeeze_annulus(q_min), "= sqrt(r) =", math.sqrt(0.16))

print("product bound for factors (0.5, 0.2):",
      product_lower_bound(ProductQuery((0.5, 0.2))),
      " (29^-1/2 =", 29 ** -0.5, ")")
print("annulus x disk at r=0.25, |z1|=0.5:",
      annulus_times_disk_bound(0.25, 0.5))
