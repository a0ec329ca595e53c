"""
This file is part of pushforward_convexity.

pushforward_convexity is free software: you can redistribute it and/or modify
it under the terms of the GNU General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

pushforward_convexity is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
GNU General Public License for more details.

You should have received a copy of the GNU General Public License
along with pushforward_convexity. If not, see <https://www.gnu.org/licenses/>.
"""

"""
Exception hierarchy shared by every analysis module.
"""
from typing import Any, List, Optional


class ConvexityError(Exception):
    """Base class for all errors raised by the package."""


class MeasureError(ConvexityError):
    """Invalid measure data (bad weight, duplicate coordinates, wrong mass)."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class DimensionMismatch(ConvexityError):
    """Objects that must share a dimension do not."""


class MissingMapping(ConvexityError):
    """An atom has no image under a finite map."""

    def __init__(self, point: Any):
        super().__init__(f"no image for point {point}")
        self.point = point


class DomainMismatch(ConvexityError):
    """Two maps have different domains or codomain dimensions."""


class ShapeMismatch(ConvexityError):
    """A coupling matrix does not match the supports of its marginals."""


class TooManyAtoms(ConvexityError):
    """Subset enumeration was asked for more atoms than the configured cap."""

    def __init__(self, n: int, cap: int):
        super().__init__(f"{n} atoms exceed the enumeration cap of {cap}")
        self.n = n
        self.cap = cap


class LimitExceeded(ConvexityError):
    """Transport map enumeration hit its limit; `partial` holds what was found."""

    def __init__(self, limit: int, partial: Optional[List[Any]] = None):
        super().__init__(f"enumeration stopped after {limit} maps")
        self.limit = limit
        self.partial = list(partial or [])


class BudgetExceeded(ConvexityError):
    """The oracle function family is larger than the configured budget."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"oracle family of size {needed} exceeds budget {budget}")
        self.needed = needed
        self.budget = budget


class NotInConstraintSet(ConvexityError):
    """A map handed to certification does not satisfy the loss's constraint."""


class OutOfDomain(ConvexityError):
    """A continuum-demo argument lies outside its domain."""


class SupportsOverlap(ConvexityError):
    """The equalizer witness demo needs disjoint supports."""


class InternalInconsistency(ConvexityError):
    """A self-check failed. This is a bug, never a property of the input."""


# Errors that mean the user input was invalid (CLI exit code 2).
INPUT_ERRORS = (MeasureError, DimensionMismatch, MissingMapping, DomainMismatch,
                ShapeMismatch, NotInConstraintSet, OutOfDomain, SupportsOverlap)

# Errors that mean a size budget was hit (CLI exit code 3).
BUDGET_ERRORS = (TooManyAtoms, LimitExceeded, BudgetExceeded)
