"""Exception types shared across the library."""


class PlConvexError(Exception):
    """Base class for all library errors."""


class EmptyComplex(PlConvexError):
    """A complex with no facets was supplied where one is required."""


class FaceNotPresent(PlConvexError):
    """A referenced face is not a face of the complex."""


class VertexCollision(PlConvexError):
    """A vertex id introduced by a move is already in use."""


class NotPseudomanifold(PlConvexError):
    """A wall is not contained in exactly two facets."""


class DegenerateSpan(PlConvexError):
    """A spanning set does not span a hyperplane."""


class DegenerateCrossing(PlConvexError):
    """Off-wall coefficients of a wall relation vanish or share a sign."""


class RankDeficient(PlConvexError):
    """Vectors that should span the ambient space do not."""


class KernelTooBig(PlConvexError):
    """The kernel is more than one-dimensional."""


class NoKernel(PlConvexError):
    """The kernel is trivial where a relation was expected."""


class FacetDegenerate(PlConvexError):
    """A facet's vertex vectors are linearly dependent."""


class ZeroWeight(PlConvexError):
    """A subdivision weight is zero."""


class OmegaExcluded(PlConvexError):
    """A contraction weight lies in the exclusion set."""


class ShapeMismatch(PlConvexError):
    """Row/column layout does not match the complex."""


class ImproperColoring(PlConvexError):
    """Two adjacent vertices share a color."""


class Underdetermined(PlConvexError):
    """A linear solve does not have a unique solution."""


class Inconsistent(PlConvexError):
    """A linear solve has no solution."""


class ReplayMismatch(PlConvexError):
    """A move log cannot be replayed against the given base state."""


class ParseError(PlConvexError):
    """Malformed document input."""


class ValidationError(PlConvexError):
    """Structurally valid input violating a documented invariant."""
