"""Exception hierarchy shared by all kplump modules."""


class KplumpError(Exception):
    """Base class for all package-specific errors."""


# -- exact algebra ---------------------------------------------------------

class IrreducibleDenominator(KplumpError):
    """A denominator factor of degree >= 2 has no root in Q(i)."""


class LogTermRequired(KplumpError):
    """A nonzero residue makes the antiderivative need a logarithm."""


class PoleAtCenter(KplumpError):
    """Series expansion requested at a pole of the function."""


class ZeroDenominator(KplumpError):
    """Attempt to build a rational function with zero denominator."""


# -- curves ----------------------------------------------------------------

class MalformedGaps(KplumpError):
    """A gap sequence that does not yield a weakly decreasing partition."""


class RankDeficient(KplumpError):
    """Residue conditions did not cut out a space of the expected dimension."""


# -- theta divisor ---------------------------------------------------------

class EliminationTimeout(KplumpError):
    """Groebner elimination exceeded its step or wall-clock budget."""


class NotHypersurface(KplumpError):
    """The elimination ideal is not principal."""


class BoundViolated(KplumpError):
    """Theta degree exceeds the triangular bound."""


class LeadingTermMismatch(KplumpError):
    """Highest-degree monomial disagrees with the partition product law."""


# -- kp tau ----------------------------------------------------------------

class NoRealSolution(KplumpError):
    """The phase constraints are inconsistent."""


class ImaginaryResidue(KplumpError):
    """A coefficient kept a nonzero imaginary part after phase solving."""


class NotConjugate(KplumpError):
    """Certificate factors are not complex conjugates."""


class RecombinationMismatch(KplumpError):
    """Certificate pieces do not multiply back to the tau polynomial."""


class NonpositiveConstant(KplumpError):
    """tau(0,0,0) is not strictly positive."""


class ZeroTau(KplumpError):
    """The zero polynomial cannot produce a KP solution."""


class DecayMismatch(KplumpError):
    """Far-field decay check failed."""


# -- degeneration ----------------------------------------------------------

class DivergentLimit(KplumpError):
    """A rescaled differential still has a pole at epsilon = 0."""


class ModelMismatch(KplumpError):
    """The local planar model does not have the expected singularities."""


# -- grid / cli ------------------------------------------------------------

class DenominatorVanished(KplumpError):
    """|denominator| fell below threshold at a grid sample."""


class EmptyGrid(KplumpError):
    """A grid request with no sample points or no time slices."""
