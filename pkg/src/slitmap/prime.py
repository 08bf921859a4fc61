"""Prime function of a concentric annulus.

The basic object is the infinite product

    w(z, y) = (z - y) * prod_{n>=1} [(z - r^(2n) y)(y - r^(2n) z)]
                                   / [(z - r^(2n) z)(y - r^(2n) y)]

whose factors tend to 1 geometrically (ratio r^2), so direct log-free
multiplication with the shared truncation rule is stable: each grouped
factor is a quotient close to 1 and there is no cancellation risk.

Two transformation laws of w are exposed as residual pairs.  The
inversion law

    conj(w(1/conj(z), 1/conj(y))) = -w(z, y) / (z y)

and the lattice-shift law

    w(z / r^2, y) = -z * w(z, y) / (r^2 y).

The shift constant was cross-checked against a 400-factor extended
precision evaluation of the raw product; -z/(r^2 y) is the constant the
product actually satisfies (it follows from the classical shift law
P(q x) = -P(x)/x of the annulus P-function with q = r^2, x = z/y).
"""

import numpy as np

from .errors import DomainError
from .geometry import AnnulusGeometry, TruncationControl


def _scale(z, y):
    az, ay = abs(z), abs(y)
    return max(az, ay, 1.0 / az, 1.0 / ay)


def _raw_prime(z, y, r, trunc):
    """Truncated product, no window checks.  z, y nonzero."""
    n = trunc.terms_for(r * r, _scale(z, y))
    q = (r * r) ** np.arange(1, n + 1)
    num = (z - q * y) * (y - q * z)
    den = (z - q * z) * (y - q * y)
    return complex((z - y) * np.prod(num / den))


def _check_args(z, y):
    if z == 0 or y == 0:
        raise DomainError("prime function is undefined at z = 0 or y = 0")


def eval_prime(z, y, geom: AnnulusGeometry, trunc: TruncationControl = None):
    """Evaluate the annulus prime function w(z, y).

    Arguments may sit modestly outside the closed annulus (the product
    converges comfortably on r^2 < |z| < 1/r); beyond a 10 percent
    slack on that window the point is rejected.
    """
    if trunc is None:
        trunc = TruncationControl()
    _check_args(z, y)
    r = geom.r
    lo, hi = 0.9 * r * r, 1.1 / r
    for name, v in (("z", z), ("y", y)):
        if not (lo <= abs(v) <= hi):
            raise DomainError(
                f"|{name}| = {abs(v):g} outside the evaluation window ({lo:g}, {hi:g})")
    return _raw_prime(z, y, r, trunc)


def prime_identity_reflect(z, y, geom: AnnulusGeometry, trunc: TruncationControl = None):
    """Residual pair for the inversion law.

    Returns (conj(w(1/conj(z), 1/conj(y))), -w(z,y)/(z y)); the two agree
    up to truncation error.
    """
    if trunc is None:
        trunc = TruncationControl()
    _check_args(z, y)
    lhs = np.conj(_raw_prime(1.0 / np.conj(z), 1.0 / np.conj(y), geom.r, trunc))
    rhs = -_raw_prime(z, y, geom.r, trunc) / (z * y)
    return complex(lhs), complex(rhs)


def prime_identity_period(z, y, geom: AnnulusGeometry, trunc: TruncationControl = None):
    """Residual pair for the lattice-shift law.

    Returns (w(z/r^2, y), -z*w(z,y)/(r^2 y)).  The left side is evaluated
    directly on the shifted argument (the product converges there; the
    public window of eval_prime does not apply to internal transforms).
    """
    if trunc is None:
        trunc = TruncationControl()
    _check_args(z, y)
    r = geom.r
    lhs = _raw_prime(z / (r * r), y, r, trunc)
    rhs = -z * _raw_prime(z, y, r, trunc) / (r * r * y)
    return complex(lhs), complex(rhs)
