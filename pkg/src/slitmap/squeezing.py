"""Closed-form squeezing values for the annulus and product domains."""

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class SqueezeQuery:
    """Point query (r, |z|) inside the annulus; r = 0 is the punctured disk."""

    r: float
    z_modulus: float

    def __post_init__(self):
        if not (0.0 <= self.r < 1.0):
            raise DomainError(f"need 0 <= r < 1, got {self.r}")
        if not (self.r < self.z_modulus < 1.0):
            raise DomainError(
                f"need r < |z| < 1, got r={self.r}, |z|={self.z_modulus}")


@dataclass(frozen=True)
class ProductQuery:
    """Per-factor squeezing values of a finite product domain."""

    factor_values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.factor_values)
        if not vals:
            raise DomainError("need at least one factor")
        if any(not (0.0 < v <= 1.0) for v in vals):
            raise DomainError("factor values must lie in (0, 1]")
        object.__setattr__(self, "factor_values", vals)


def squeeze_annulus(q: SqueezeQuery):
    """Squeezing value of the annulus at |z|: max of |z| and r/|z|."""
    if q.r == 0.0:
        return q.z_modulus
    return max(q.z_modulus, q.r / q.z_modulus)


def squeeze_tilde(q: SqueezeQuery):
    """Squeezing value of the restricted (slit-disk target) problem: |z|."""
    return q.z_modulus


def squeeze_s1_s2(q: SqueezeQuery):
    """The two one-sided values (|z|, r/|z|) whose max is squeeze_annulus."""
    return q.z_modulus, q.r / q.z_modulus


def conjectured_dgz(q: SqueezeQuery):
    """The refuted conjectural formula, for comparison plots.

    Applies the inverse of sigma(s) = log((1+s)/(1-s)), which is
    tanh(x/2), to log((1+|z|)(1-r) / ((1-|z|)(1+r))).  Stated only for
    |z| >= sqrt(r); outside that range the value is still returned but
    a warning is emitted.
    """
    if q.z_modulus < math.sqrt(q.r):
        warnings.warn(
            f"conjectured formula queried below its stated range: "
            f"|z| = {q.z_modulus} < sqrt(r) = {math.sqrt(q.r):.6g}",
            stacklevel=2)
    x = math.log((1.0 + q.z_modulus) * (1.0 - q.r)
                 / ((1.0 - q.z_modulus) * (1.0 + q.r)))
    return math.tanh(0.5 * x)


def product_lower_bound(pq: ProductQuery):
    """Lower bound (sum of inverse squares)^(-1/2) for a product domain."""
    return sum(v ** -2 for v in pq.factor_values) ** -0.5


def annulus_times_disk_bound(r, z1_modulus):
    """Lower bound for annulus x disk at (z1, 0), piecewise in |z1|.

    Equals product_lower_bound applied to (squeeze_annulus(r, |z1|), 1):
    r/sqrt(r^2+|z1|^2) when r < |z1| <= sqrt(r), and |z1|/sqrt(1+|z1|^2)
    when sqrt(r) <= |z1| < 1; the branches agree at |z1| = sqrt(r).
    """
    r = float(r)
    z1 = float(z1_modulus)
    if not (0.0 <= r < 1.0):
        raise DomainError(f"need 0 <= r < 1, got {r}")
    if not (r < z1 < 1.0):
        raise DomainError(f"need r < |z1| < 1, got {z1}")
    if z1 <= math.sqrt(r):
        return r / math.hypot(r, z1)
    return z1 / math.hypot(1.0, z1)
