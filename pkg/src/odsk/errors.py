"""Exception types shared across the toolkit."""

from __future__ import annotations


class OdskError(Exception):
    """Base class for all toolkit errors."""


class AntisymmetryViolation(OdskError):
    """A relation closure is not antisymmetric.

    Carries the strongly-equivalent element classes so the caller can
    decide to quotient instead.
    """

    def __init__(self, classes: tuple[frozenset[str], ...]):
        self.classes = classes
        shown = ", ".join("{" + ",".join(sorted(c)) + "}" for c in classes)
        super().__init__(f"relation is not antisymmetric; equivalent classes: {shown}")


class BudgetExceeded(OdskError):
    """A computation hit its size or time budget.

    For dimension searches, ``lower`` and ``upper`` carry the certified
    bounds known at the time of abort.
    """

    def __init__(self, message: str, lower: int | None = None, upper: int | None = None):
        self.lower = lower
        self.upper = upper
        super().__init__(message)


class ConceptBudgetExceeded(BudgetExceeded):
    """Concept enumeration exceeded the configured concept cap."""


class UnknownAttribute(OdskError):
    """An implication references an attribute missing from the context."""


class UnsupportedKind(OdskError):
    """Requested scale kind has no construction here."""


class MissingSpec(OdskError):
    """A table column has no scaling spec."""


class UnknownValue(OdskError):
    """A cell value is not covered by the spec's value order."""


class EmptySet(OdskError):
    """Hausdorff distance of an empty subset is undefined."""


class EmptyImage(OdskError):
    """The relational image of some element is empty (relation not reflexive)."""

    def __init__(self, elements: tuple[str, ...]):
        self.elements = elements
        super().__init__(
            "empty relational image for: " + ", ".join(elements)
            + " (relation is not reflexive; consider reflexive closure)"
        )


class WrongFactorCount(OdskError):
    """Biplot coordinates need exactly two factors."""


class ParseError(OdskError):
    """An input file does not match its documented format."""
