"""Walk through the slit-disk map: where each boundary circle lands."""

import cmath
import math

import numpy as np

from slitmap import AnnulusGeometry, crowdy_map, slit_geometry, boundary_image

geom = AnnulusGeometry(0.2)
y = 0.5

print("annulus r =", geom.r, " modulus p =", geom.modulus)
print("interior point y =", y, "maps to", crowdy_map(y + 1e-12, y, geom))

# outer circle -> unit circle
mb = boundary_image(y, geom, n_samples=256, circle="outer")
mods = np.array([abs(v) for _, v in mb.samples])
print("outer image moduli: min %.15f max %.15f" % (mods.min(), mods.max()))

# inner circle -> the slit arc, covered twice
mb = boundary_image(y, geom, n_samples=256, circle="inner")
mods = np.array([abs(v) for _, v in mb.samples])
print("inner image moduli: min %.15f max %.15f (slit radius)" % (mods.min(), mods.max()))

dom = slit_geometry(y, geom)
print("slit radius      ", dom.slit_radius)
print("arc endpoints    ", dom.arc_start, dom.arc_end)
print("preimage angles  ", dom.preimage_start, dom.preimage_end)
print("preimage sum     ", dom.preimage_start + dom.preimage_end, " (2 pi =", 2 * math.pi, ")")

# a complex-valued interior point works the same way
y2 = 0.45 * cmath.exp(0.7j)
dom2 = slit_geometry(y2, geom)
print("complex y: slit radius", dom2.slit_radius, "vs |y| =", abs(y2))
