"""Exception hierarchy.

Two broad families matter to callers: bad inputs (DomainError and its
subclasses) and numerical failures discovered mid-computation
(SingularityError, ConvergenceError, EvolutionError).  The CLI maps the
first family to exit code 2 and the second to exit code 4.
"""


class SlitmapError(Exception):
    """Base class for all library errors."""


class DomainError(SlitmapError):
    """An argument lies outside the mathematical domain of the operation."""


class GeometryError(DomainError):
    """Annulus parameter out of range (r must satisfy 0 < r < 1)."""


class SingularityError(SlitmapError):
    """Evaluation point too close to a pole or lattice point."""


class ConvergenceError(SlitmapError):
    """An iteration (Newton, bisection) failed to converge."""


class EvolutionError(SlitmapError):
    """A Loewner run left its admissible region (blow-up, infeasible schedule)."""
