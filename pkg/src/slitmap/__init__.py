"""Numerical toolkit for slit maps of an annulus and squeezing bounds.

Layers, bottom up: geometry (domain descriptions, truncation control),
prime (the annulus prime function and its functional identities),
kernels (circle kernel and the slit-evolution kernels P, J, Q, with
theta-product and elliptic-function cross-check routes), conformal
(the slit-disk map and slit geometry extraction), loewner (single- and
three-slit evolutions with the balancing schedule), squeezing
(closed-form values and product-domain bounds).  The cli module wraps
everything for scripted use.
"""

from .errors import (ConvergenceError, DomainError, EvolutionError,
                     GeometryError, SingularityError, SlitmapError)
from .geometry import AnnulusGeometry, TruncationControl, default_truncation
from .prime import eval_prime, prime_identity_period, prime_identity_reflect
from .kernels import (KernelPoint, dP_dtheta, kernel_H, kernel_J, kernel_P,
                      kernel_P_via_theta, kernel_Q, theta_A, villat,
                      villat_directed, weierstrass_p)
from .conformal import (MappedBoundary, SlitDiskDomain, boundary_image,
                        crowdy_map, invert_annulus, preimage_of_zero,
                        rotate_to_positive, slit_geometry)
from .loewner import (DrivingFunction, LoewnerState, MultiSlitSchedule,
                      MultiSlitState, Trajectory, evolve_inner_slit,
                      evolve_outer_slit, evolve_three_slit,
                      key_monotonicity_experiment, solve_balancing_schedule)
from .squeezing import (ProductQuery, SqueezeQuery, annulus_times_disk_bound,
                        conjectured_dgz, product_lower_bound, squeeze_annulus,
                        squeeze_s1_s2, squeeze_tilde)

__version__ = "0.1.0"

__all__ = [
    "AnnulusGeometry", "TruncationControl", "default_truncation",
    "SlitmapError", "DomainError", "GeometryError", "SingularityError",
    "ConvergenceError", "EvolutionError",
    "eval_prime", "prime_identity_reflect", "prime_identity_period",
    "KernelPoint", "villat", "villat_directed", "kernel_P", "kernel_J",
    "kernel_Q", "kernel_H", "theta_A", "kernel_P_via_theta",
    "weierstrass_p", "dP_dtheta",
    "SlitDiskDomain", "MappedBoundary", "crowdy_map", "boundary_image",
    "slit_geometry", "invert_annulus", "rotate_to_positive",
    "preimage_of_zero",
    "DrivingFunction", "LoewnerState", "MultiSlitState", "MultiSlitSchedule",
    "Trajectory", "evolve_outer_slit", "evolve_inner_slit",
    "evolve_three_slit", "solve_balancing_schedule",
    "key_monotonicity_experiment",
    "SqueezeQuery", "ProductQuery", "squeeze_annulus", "squeeze_tilde",
    "squeeze_s1_s2", "conjectured_dgz", "product_lower_bound",
    "annulus_times_disk_bound",
]
