"""Conformal map of an annulus onto a circularly slit disk.

The map is a ratio of prime-function evaluations,

    f(z, y) = w(z, y) / (|y| * w(z, 1/conj(y))),

which sends the annulus A_r one-to-one onto the unit disk minus a
concentric circular arc of radius |y|, with y going to 0, the unit
circle going to the unit circle, and the inner circle covering the slit
arc twice.  The slit endpoints are located where the image argument
along the inner circle reverses direction.
"""

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, DomainError, SingularityError
from .geometry import AnnulusGeometry, TruncationControl
from .prime import _raw_prime

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SlitDiskDomain:
    """Unit disk minus a proper arc of the circle of radius slit_radius.

    arc_start/arc_end are the angles of the slit endpoints; preimage_start
    and preimage_end are the angles on the inner circle that map to them.
    """

    slit_radius: float
    arc_start: float
    arc_end: float
    preimage_start: float
    preimage_end: float

    def __post_init__(self):
        if not (0.0 < self.slit_radius < 1.0):
            raise DomainError(f"slit radius must lie in (0,1), got {self.slit_radius}")
        if abs((self.arc_start - self.arc_end) % TWO_PI) < 1e-15:
            raise DomainError("slit arc must be a proper arc (distinct endpoints)")


@dataclass(frozen=True)
class MappedBoundary:
    """Image samples of one boundary circle: (source angle, image value)."""

    samples: tuple

    def __post_init__(self):
        angles = [a for a, _ in self.samples]
        if any(not (0.0 <= a < TWO_PI) for a in angles):
            raise DomainError("source angles must lie in [0, 2 pi)")
        if any(b <= a for a, b in zip(angles, angles[1:])):
            raise DomainError("source angles must be strictly increasing")


def _check_y(y, geom):
    ay = abs(y)
    if not (geom.r < ay < 1.0):
        raise DomainError(f"mapped point must satisfy r < |y| < 1, got |y| = {ay:g}")


def _map_value(z, y, r, trunc):
    den = abs(y) * _raw_prime(z, 1.0 / np.conj(y), r, trunc)
    if abs(den) < 1e-300:
        raise SingularityError(f"map denominator vanishes at z = {z}")
    return _raw_prime(z, y, r, trunc) / den


def crowdy_map(z, y, geom: AnnulusGeometry, trunc: TruncationControl = None):
    """Value of the slit-disk map at z, for interior point y of A_r."""
    if trunc is None:
        trunc = TruncationControl()
    _check_y(y, geom)
    if z == 0:
        raise DomainError("map is evaluated on the closed annulus; z = 0 is outside")
    az = abs(z)
    if not (geom.r * (1.0 - 1e-9) <= az <= 1.0 + 1e-9):
        raise DomainError(f"|z| = {az:g} outside the closed annulus [{geom.r}, 1]")
    return _map_value(z, y, geom.r, trunc)


def boundary_image(y, geom: AnnulusGeometry, trunc: TruncationControl = None,
                   n_samples=512, circle="inner"):
    """Sample the image of one boundary circle; returns a MappedBoundary."""
    if trunc is None:
        trunc = TruncationControl()
    _check_y(y, geom)
    if circle not in ("inner", "outer"):
        raise DomainError(f"circle must be 'inner' or 'outer', got {circle!r}")
    rad = geom.r if circle == "inner" else 1.0
    thetas = TWO_PI * np.arange(n_samples) / n_samples
    vals = [_map_value(rad * cmath.exp(1j * t), y, geom.r, trunc) for t in thetas]
    return MappedBoundary(tuple(zip(thetas.tolist(), vals)))


def _refine_turning_point(h_fn, t_lo, t_mid, t_hi, maximize):
    """Refine an argument-reversal point.

    Golden-section search on the argument alone stalls near 1e-8 (the
    objective is flat to machine noise there), so a secant pass on the
    centered-difference slope finishes the job.
    """
    sign = -1.0 if maximize else 1.0
    res = minimize_scalar(lambda t: sign * h_fn(t), bracket=(t_lo, t_mid, t_hi),
                          method="golden", options={"xtol": 1e-13})
    t0 = float(res.x)

    delta = 1e-6

    def slope(t):
        return (h_fn(t + delta) - h_fn(t - delta)) / (2.0 * delta)

    span = abs(t_hi - t_lo)
    ta, tb = t0, t0 + 1e-7
    ga, gb = slope(ta), slope(tb)
    for _ in range(12):
        if gb == ga:
            break
        t_next = tb - gb * (tb - ta) / (gb - ga)
        if abs(t_next - t0) > span:
            return t0
        ta, ga = tb, gb
        tb, gb = t_next, slope(t_next)
        if abs(tb - ta) < 1e-12:
            break
    return tb


def slit_geometry(y, geom: AnnulusGeometry, trunc: TruncationControl = None,
                  n_samples=512):
    """Locate the slit arc of the image domain.

    Samples the inner-circle image, checks its modulus is constant
    (non-constant modulus means the truncation was too coarse for this
    geometry), and finds the two angles where the image argument
    reverses direction: those are the preimages of the slit endpoints,
    refined by golden-section search.
    """
    if trunc is None:
        trunc = TruncationControl()
    _check_y(y, geom)
    if n_samples < 64:
        raise DomainError(f"need n_samples >= 64, got {n_samples}")
    r = geom.r
    thetas = TWO_PI * np.arange(n_samples) / n_samples
    vals = np.array([_map_value(r * cmath.exp(1j * t), y, r, trunc) for t in thetas])
    moduli = np.abs(vals)
    slit_radius = float(np.mean(moduli))
    if np.max(np.abs(moduli - abs(y))) > 1e-8:
        raise ConvergenceError(
            "inner-circle image modulus deviates from |y| by more than 1e-8; "
            "tighten the truncation control")

    # The image runs along the arc and back: net winding 0, with exactly
    # two direction reversals of the (unwrapped) argument.
    h = np.unwrap(np.angle(vals))
    dh = np.diff(h)
    flips = [k for k in range(1, len(dh)) if dh[k - 1] * dh[k] < 0.0]
    if len(flips) != 2:
        raise ConvergenceError(
            f"expected 2 argument reversals along the inner circle, found {len(flips)}; "
            "increase n_samples")

    def local_arg(t, anchor):
        v = _map_value(r * cmath.exp(1j * t), y, r, trunc)
        return anchor + cmath.phase(v * cmath.exp(-1j * anchor))

    turning = []
    for k in flips:
        t_lo, t_mid, t_hi = thetas[k - 1], thetas[k], thetas[k + 1]
        anchor = h[k]
        maximize = dh[k - 1] > 0.0
        t_star = _refine_turning_point(lambda t: local_arg(t, anchor),
                                       t_lo, t_mid, t_hi, maximize)
        turning.append(t_star % TWO_PI)

    pre_start, pre_end = sorted(turning)
    p_start = _map_value(r * cmath.exp(1j * pre_start), y, r, trunc)
    p_end = _map_value(r * cmath.exp(1j * pre_end), y, r, trunc)

    if abs(complex(y).imag) == 0.0 and complex(y).real > 0.0:
        defect = abs((TWO_PI - pre_end) - pre_start)
        if defect > 1e-6:
            log.warning("conjugate-symmetry defect %.2e for real y", defect)

    return SlitDiskDomain(
        slit_radius=slit_radius,
        arc_start=cmath.phase(p_start) % TWO_PI,
        arc_end=cmath.phase(p_end) % TWO_PI,
        preimage_start=pre_start,
        preimage_end=pre_end,
    )


def invert_annulus(z, geom: AnnulusGeometry):
    """Swap the two boundary circles: z -> r/z."""
    if z == 0:
        raise DomainError("inversion is undefined at z = 0")
    return geom.r / z


def rotate_to_positive(value):
    """Unit rotation factor turning value into a positive real."""
    if value == 0:
        raise DomainError("cannot normalize a zero value")
    return cmath.exp(-1j * cmath.phase(value))


def preimage_of_zero(y_target, geom: AnnulusGeometry, trunc: TruncationControl = None,
                     w0=None):
    """Solve f(w, y_target) = 0 on the real segment by damped Newton.

    For real y the map is real on (r, 1), so the complex-step derivative
    Im f(w + ih)/h is exact to machine precision.  Newton starts at
    y_target by default (the root itself, making this a residual check);
    a different real start exercises the actual iteration.
    """
    if trunc is None:
        trunc = TruncationControl()
    y_target = float(y_target)
    if not (geom.r < y_target < 1.0):
        raise DomainError(f"need r < y_target < 1, got {y_target}")
    r = geom.r
    w = y_target if w0 is None else float(w0)
    h = 1e-20

    def f(x):
        return _map_value(x, y_target, r, trunc)

    fw = f(w).real
    for _ in range(50):
        if abs(fw) < 1e-13:
            return w
        deriv = f(w + 1j * h).imag / h
        if deriv == 0.0:
            raise ConvergenceError("Newton derivative vanished")
        step = fw / deriv
        # damp: halve until the residual drops and the iterate stays inside
        for _ in range(60):
            w_new = w - step
            if geom.r < w_new < 1.0:
                f_new = f(w_new).real
                if abs(f_new) < abs(fw):
                    break
            step *= 0.5
        else:
            raise ConvergenceError("Newton damping failed to reduce the residual")
        w, fw = w_new, f_new
    raise ConvergenceError("Newton did not converge in 50 iterations")
