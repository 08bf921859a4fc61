"""Domain descriptions shared by every module.

An annulus A_r = {r < |z| < 1} is described by its inner radius r alone;
its conformal modulus is p = -log r.  Infinite products and bilateral
sums over powers r^(2n) are cut off by a TruncationControl: evaluation
stops at the smallest n with r^(2n) * scale < tol, where scale collects
the magnitudes of the arguments (|z|, |y|, their reciprocals), capped at
max_terms.
"""

import math
import os
from dataclasses import dataclass

from .errors import DomainError, GeometryError

ENV_TRUNC_TOL = "SLITMAP_TRUNC_TOL"


@dataclass(frozen=True)
class AnnulusGeometry:
    """Annulus r < |z| < 1."""

    r: float

    def __post_init__(self):
        if not (0.0 < self.r < 1.0):
            raise GeometryError(f"inner radius must lie in (0, 1), got {self.r}")

    @property
    def modulus(self):
        """p = -log r, so that r = e^(-p)."""
        return -math.log(self.r)

    def radius_at(self, t):
        """Inner radius r_t = e^(-p + t) after Loewner time t (exact, never integrated)."""
        return math.exp(-self.modulus + t)

    def contains(self, z, slack=0.0):
        m = abs(z)
        return self.r * (1.0 - slack) <= m <= 1.0 + slack


@dataclass(frozen=True)
class TruncationControl:
    """Cutoff rule for geometrically convergent products and sums."""

    tol: float = 1e-12
    max_terms: int = 256

    def __post_init__(self):
        if not (0.0 < self.tol < 1.0):
            raise DomainError(f"truncation tol must lie in (0, 1), got {self.tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be positive, got {self.max_terms}")

    def terms_for(self, ratio, scale=1.0):
        """Smallest n with ratio^n * scale < tol, capped at max_terms.

        ratio is the per-term decay factor (r^2 for the annulus products,
        e^(-2p) for theta-style products).
        """
        if not (0.0 < ratio < 1.0):
            raise DomainError(f"decay ratio must lie in (0, 1), got {ratio}")
        if scale <= 0.0:
            raise DomainError("scale must be positive")
        n = math.log(self.tol / scale) / math.log(ratio)
        if n <= 0.0:
            return 1
        return min(int(math.ceil(n)), self.max_terms)


def default_truncation():
    """TruncationControl honoring the SLITMAP_TRUNC_TOL environment override."""
    raw = os.environ.get(ENV_TRUNC_TOL)
    if raw is None:
        return TruncationControl()
    try:
        tol = float(raw)
    except ValueError as exc:
        raise DomainError(f"{ENV_TRUNC_TOL} is not a float: {raw!r}") from exc
    return TruncationControl(tol=tol)
