"""Exception hierarchy for the semiflat package."""


class SemiflatError(Exception):
    """Base class for all package-specific errors."""


class SingularPolarization(SemiflatError):
    """The polarization matrix Q is not invertible or not antisymmetric."""


class NotPositive(SemiflatError):
    """A matrix required to be positive definite is not."""


class SingularPeriods(SemiflatError):
    """The stacked period matrix (T; conj T) is numerically singular."""


class UnsupportedType(SemiflatError):
    """Fiber type outside the local-model catalog."""


class UnsupportedPair(SemiflatError):
    """Fiber pair outside the supported fiber-product constructions."""


class Unsupported(SemiflatError):
    """Operation not defined for this model (e.g. classification with alpha+beta < k)."""


class DegenerateLattice(SemiflatError):
    """An imaginary pairing Im(conj(tau_i) tau_j) is non-positive at the sample point."""


class StepTooSmall(SemiflatError):
    """Finite-difference residual is dominated by rounding noise."""


class FitRejected(SemiflatError):
    """Regression residual of a decay fit exceeds the acceptance threshold."""


class NoConvergence(SemiflatError):
    """Rescaled metric coefficients fail the Cauchy criterion across decades."""


class PolePoint(SemiflatError):
    """The argument is too close to a lattice point."""


class BranchPoint(SemiflatError):
    """wp' vanishes at the argument (branch point of the cubic model)."""


class NotConvergent(SemiflatError):
    """A q-series argument lies outside the convergence policy disk."""


class OriginSingular(SemiflatError):
    """The Eguchi-Hanson closed form is singular at z = 0."""


class ScenarioError(SemiflatError):
    """Malformed scenario configuration (CLI exit code 2)."""
