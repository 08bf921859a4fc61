"""Kernel functions driving the slit evolutions on an annulus.

The circle kernel

    K_r(z) = lim_{N->inf} sum_{n=-N}^{N} (r^(2n) + z) / (r^(2n) - z)

is a symmetric (principal-value) bilateral limit.  Summing the terms in
(n, -n) pairs turns it into an absolutely convergent series: with
q = r^(2n),

    term(n) + term(-n) = (q+z)/(q-z) + (1+qz)/(1-qz)

where the n < 0 term has been rewritten with numerator and denominator
multiplied by r^(2n) so no large powers appear.  Every bilateral sum in
this module is paired this way.

From K_r everything else follows.  For 0 < r < y < 1 and an angle theta
on the inner circle,

    P(r, y, theta) = 1 - Re K_r(r e^(i theta) / y)
    J(r, y, theta) =     Im K_r(r e^(i theta) / y)
    Q(r, y, theta, w) = 1 - K_r(r e^(i theta) / w) + i J(r, y, theta)

The slit-kernel sum sum_n (r^(2n-1) w + e^(i theta))/(r^(2n-1) w - e^(i theta))
coincides termwise with K_r at r e^(i theta)/w (divide each term through
by r^(2n-1) w), which is how P, J, Q are evaluated here; the test suite
checks them against raw bilateral partial sums of the original form.

P also has a product representation: with p = -ln r and

    A(z; p) = prod_{k>=1} (1-e^(-2kp)) (1-e^(-(2k-1)p+iz)) (1-e^(-(2k-1)p-iz)),

P(r, y, theta) = 2 Im[A'/A] at z = theta + i ln y, and its theta
derivative is -2 Im wp(z + ip) where wp is the Weierstrass function for
the period lattice (2 pi, 2ip).  Both routes are implemented; they give
independent cross-checks of P and of dP/dtheta.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, SingularityError
from .geometry import AnnulusGeometry, TruncationControl

_POLE_RTOL = 1e-14


@lru_cache(maxsize=256)
def _pows(ratio, n):
    """ratio^1 .. ratio^n, cached read-only."""
    arr = ratio ** np.arange(1, n + 1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class KernelPoint:
    """Arguments (r, y, theta) of the tracked-point kernels, 0 < r < y < 1.

    y at or below r is rejected: the kernels are only used with the
    tracked point strictly between the circles, and nothing here defines
    a continuation past y = r.
    """

    r: float
    y: float
    theta: float

    def __post_init__(self):
        if not (0.0 < self.r < 1.0):
            raise DomainError(f"need 0 < r < 1, got r={self.r}")
        if not (self.r < self.y < 1.0):
            raise DomainError(f"need r < y < 1, got r={self.r}, y={self.y}")
        object.__setattr__(self, "theta", self.theta % (2.0 * math.pi))

    @property
    def modulus(self):
        return -math.log(self.r)


def _core_villat(z, r, trunc):
    """Paired bilateral circle-kernel sum.  z away from the poles r^(2n)."""
    az = abs(z)
    if az == 0.0:
        raise DomainError("circle kernel is undefined at z = 0")
    n = trunc.terms_for(r * r, max(az, 1.0 / az))
    q = _pows(r * r, n)
    # pole guard: z near r^(2n) (n >= 0) or near r^(-2n) (as |q z - 1| small)
    if abs(z - 1.0) < _POLE_RTOL * az or np.any(np.abs(z - q) < _POLE_RTOL * az) \
            or np.any(np.abs(q * z - 1.0) < _POLE_RTOL * az * q):
        raise SingularityError(f"z = {z} too close to a kernel pole")
    pairs = (q + z) / (q - z) + (1.0 + q * z) / (1.0 - q * z)
    return complex((1.0 + z) / (1.0 - z) + np.sum(pairs))


def _core_villat_batch(zs, r, trunc):
    """Circle kernel at several points sharing one truncation length.

    One broadcasted evaluation is much cheaper than a Python-level loop
    when an integrator stage needs K_r at a handful of arguments.  The
    paired term is used in its combined form

        (q+z)/(q-z) + (1+qz)/(1-qz) = 2q (1 - z^2) / ((q-z)(1-qz))

    whose denominator factors double as the pole guard.
    """
    zs = np.asarray(zs, dtype=complex)
    az = np.abs(zs)
    if np.any(az == 0.0):
        raise DomainError("circle kernel is undefined at z = 0")
    n = trunc.terms_for(r * r, max(az.max(), (1.0 / az).max()))
    q = _pows(r * r, n)
    zc = zs[:, None]
    d1 = q - zc
    d2 = 1.0 - q * zc
    tol2 = (_POLE_RTOL * az) ** 2
    if np.any(np.abs(zs - 1.0) < _POLE_RTOL * az) \
            or np.any(d1.real ** 2 + d1.imag ** 2 < tol2[:, None]) \
            or np.any(d2.real ** 2 + d2.imag ** 2 < tol2[:, None] * (q * q)):
        raise SingularityError("kernel argument too close to a pole")
    pairs = (2.0 * q) * (1.0 - zc * zc) / (d1 * d2)
    return (1.0 + zs) / (1.0 - zs) + pairs.sum(axis=1)


def villat(z, geom: AnnulusGeometry, trunc: TruncationControl = None):
    """Circle kernel K_r(z), bilateral sum accumulated in (n, -n) pairs."""
    if trunc is None:
        trunc = TruncationControl()
    return _core_villat(z, geom.r, trunc)


def villat_directed(z, alpha, geom: AnnulusGeometry, trunc: TruncationControl = None):
    """K_r(z, alpha) = K_r(z / alpha) for a unit-modulus direction alpha."""
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise DomainError(f"direction alpha must have unit modulus, got |alpha|={abs(alpha)}")
    if trunc is None:
        trunc = TruncationControl()
    return _core_villat(z / alpha, geom.r, trunc)


def _K_tip(r, y, theta, trunc):
    """K_r at r e^(i theta) / y: P is 1 - Re, J is Im."""
    return _core_villat(r * np.exp(1j * theta) / y, r, trunc)


def _P(r, y, theta, trunc):
    return 1.0 - _K_tip(r, y, theta, trunc).real


def _J(r, y, theta, trunc):
    return _K_tip(r, y, theta, trunc).imag


def _Q(r, y, theta, w, trunc):
    return 1.0 - _core_villat(r * np.exp(1j * theta) / w, r, trunc) \
        + 1j * _J(r, y, theta, trunc)


def _I(r, y, theta, w, trunc):
    return _Q(r, y, theta, w, trunc).imag


def kernel_P(kp: KernelPoint, trunc: TruncationControl = None):
    """Logarithmic growth rate of the tracked point under slit growth at theta."""
    if trunc is None:
        trunc = TruncationControl()
    return _P(kp.r, kp.y, kp.theta, trunc)


def kernel_J(kp: KernelPoint, trunc: TruncationControl = None):
    """Rotation rate of the normalization keeping the tracked point real."""
    if trunc is None:
        trunc = TruncationControl()
    return _J(kp.r, kp.y, kp.theta, trunc)


def kernel_Q(kp: KernelPoint, w, trunc: TruncationControl = None):
    """Full complex kernel at a point w of the closed annulus.

    w must stay away from the slit-tip pole r e^(i theta); at w = y (the
    tracked point itself, y real) the value is real and equals kernel_P.
    """
    if trunc is None:
        trunc = TruncationControl()
    aw = abs(w)
    if not (kp.r * (1.0 - 1e-12) <= aw <= 1.0 + 1e-12):
        raise DomainError(f"|w| = {aw:g} outside the closed annulus [{kp.r}, 1]")
    return _Q(kp.r, kp.y, kp.theta, w, trunc)


def kernel_H(r, y, w, thetas, lam, trunc: TruncationControl = None):
    """Convex combination I(theta1) - (1-lam) I(theta2) - lam I(theta3).

    This is the angular velocity field of the constant-modulus three-slit
    flow at a boundary point w; lam allocates shrink rate between the
    second and third slits.
    """
    if trunc is None:
        trunc = TruncationControl()
    if not (0.0 <= lam <= 1.0):
        raise DomainError(f"lam must lie in [0, 1], got {lam}")
    t1, t2, t3 = thetas
    return _I(r, y, t1, w, trunc) - (1.0 - lam) * _I(r, y, t2, w, trunc) \
        - lam * _I(r, y, t3, w, trunc)


def _theta_terms(z, p, trunc):
    """Exponents e^(-(2k-1)p +/- iz) for the product, k = 1..n."""
    if p <= 0.0:
        raise DomainError(f"need p > 0, got {p}")
    z = complex(z)
    if abs(z.imag) >= p:
        raise DomainError(f"need |Im z| < p for the product form, got Im z = {z.imag}, p = {p}")
    n = trunc.terms_for(math.exp(-2.0 * p), math.exp(p + abs(z.imag)))
    k = np.arange(1, n + 1)
    base = np.exp(-(2 * k - 1) * p)
    return k, base * np.exp(1j * z), base * np.exp(-1j * z)


def theta_A(z, p, trunc: TruncationControl = None):
    """Triple product A(z; p); converges for |Im z| < p."""
    if trunc is None:
        trunc = TruncationControl()
    k, ep, em = _theta_terms(z, p, trunc)
    return complex(np.prod((1.0 - np.exp(-2.0 * k * p)) * (1.0 - ep) * (1.0 - em)))


def _theta_log_deriv(z, p, trunc):
    """d/dz log A(z; p), summed term by term."""
    _, ep, em = _theta_terms(z, p, trunc)
    return complex(np.sum(-1j * ep / (1.0 - ep) + 1j * em / (1.0 - em)))


def kernel_P_via_theta(kp: KernelPoint, trunc: TruncationControl = None):
    """P recomputed as 2 Im[A'/A](theta + i ln y); cross-check route."""
    if trunc is None:
        trunc = TruncationControl()
    z = kp.theta + 1j * math.log(kp.y)
    return 2.0 * _theta_log_deriv(z, kp.modulus, trunc).imag


def weierstrass_p(z, p, trunc: TruncationControl = None):
    """Weierstrass function for the period lattice (2 pi, 2 i p).

    Evaluated through the lattice sum with each horizontal row resummed
    exactly:

        wp(z) = -1/12 + (1/4) csc^2(z/2)
              + sum_{n>=1} [ (1/4) csc^2((z-2ipn)/2) + (1/4) csc^2((z+2ipn)/2)
                             + (1/2) / sinh^2(pn) ]

    (each row of 1/(z-w)^2 - 1/w^2 over w = 2 pi m + 2ipn collapses to a
    cosecant; the constants are the resummed -1/w^2 parts).  Rows decay
    geometrically, so this agrees with the truncated double sum but at
    machine accuracy.
    """
    if trunc is None:
        trunc = TruncationControl()
    if p <= 0.0:
        raise DomainError(f"need p > 0, got {p}")
    z = complex(z)
    n_rows = trunc.terms_for(math.exp(-2.0 * p), math.exp(abs(z.imag)))
    n = np.arange(1, n_rows + 1)
    s0 = np.sin(0.5 * z)
    s_up = np.sin(0.5 * (z - 2j * p * n))
    s_dn = np.sin(0.5 * (z + 2j * p * n))
    if abs(s0) < 1e-12 or np.any(np.abs(s_up) < 1e-12) or np.any(np.abs(s_dn) < 1e-12):
        raise SingularityError(f"z = {z} too close to a lattice point")
    rows = 0.25 / s_up ** 2 + 0.25 / s_dn ** 2 + 0.5 / np.sinh(p * n) ** 2
    return complex(-1.0 / 12.0 + 0.25 / s0 ** 2 + np.sum(rows))


def dP_dtheta(kp: KernelPoint, trunc: TruncationControl = None):
    """Exact theta derivative of kernel_P, via -2 Im wp(theta + i ln y + ip).

    The additive real constant relating the two (the kernel identity
    determines the derivative only up to a real shift under Im) drops
    out, so no constant is ever computed.
    """
    if trunc is None:
        trunc = TruncationControl()
    z = kp.theta + 1j * (math.log(kp.y) + kp.modulus)
    return -2.0 * weierstrass_p(z, kp.modulus, trunc).imag
