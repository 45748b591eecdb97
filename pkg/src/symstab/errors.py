"""Exception types shared across the package."""


class SymstabError(Exception):
    """Base class for all package-specific failures."""


class DimensionError(SymstabError, ValueError):
    """Input has the wrong shape, parity, or an inconsistent dimension."""


class ParseError(SymstabError, ValueError):
    """A matrix, path, angle, or surface file could not be interpreted."""


class SymplecticityError(SymstabError, ValueError):
    """A matrix that must be symplectic fails the residual test."""


class UnsupportedNormalForm(SymstabError, ValueError):
    """Spectral structure outside the supported block catalogue.

    Raised e.g. for Jordan blocks of size three or larger on the unit
    circle.  The message names the offending eigenvalue.
    """


class NumericalConsistencyError(SymstabError, ArithmeticError):
    """An internal quantity violated its exactness contract.

    Example: the characteristic determinant on the unit circle acquired a
    non-negligible imaginary part, which signals a non-symplectic input or
    accumulated rounding far beyond expectation.
    """


class TangencyError(SymstabError, ArithmeticError):
    """A crossing could not be resolved to transversality.

    The crossing form stayed degenerate after the perturbation ladder
    (endpoint twist, then randomized interior jitter with shrinking size).
    """


class IndexUnstableError(SymstabError, ArithmeticError):
    """Crossing count failed to stabilize under grid/perturbation refinement."""


class BottViolationError(SymstabError, ArithmeticError):
    """Direct iterate index disagrees with the root-of-unity decomposition."""


class SplittingUnstableError(SymstabError, ArithmeticError):
    """One-sided index limits did not settle during epsilon halving."""


class GalerkinError(SymstabError, ArithmeticError):
    """Galerkin index/nullity did not stabilize under mode doubling."""


class HessianSingularError(SymstabError, ArithmeticError):
    """The surface Hessian could not be inverted along the orbit."""


class ResonantFormError(SymstabError, ValueError):
    """Closed-form index requested at a resonant period."""


class GaugeError(SymstabError, ArithmeticError):
    """Gauge-function Newton solve diverged (point too close to the origin
    or surface data non-convex)."""


class FlowError(SymstabError, ArithmeticError):
    """Flow integration violated an accuracy contract (energy drift,
    symplectic residual, or step-size collapse)."""


class AlphaInconsistencyError(SymstabError, ArithmeticError):
    """Floquet data changed under a Hamiltonian power-law reparametrization."""


class OrbitSearchError(SymstabError, ArithmeticError):
    """Closed-characteristic search failed to produce a usable orbit set."""


class IterationBoundError(SymstabError, ValueError):
    """Index pairs violate an unconditional iteration inequality, which
    indicates corrupted upstream data rather than a borderline surface."""
