"""Exception hierarchy shared by every lindspect module."""


class LindspectError(Exception):
    """Base class for all errors raised by lindspect."""


class DimensionMismatch(LindspectError, ValueError):
    """Operands have incompatible shapes."""


class InvalidModel(LindspectError, ValueError):
    """A Lindblad model failed validation (non-Hermitian H, negative rate, ...)."""


class InvalidState(LindspectError, ValueError):
    """A matrix is not a density matrix within tolerance."""


class NumericalError(LindspectError, ArithmeticError):
    """Base class for failures of a numerical procedure."""


class NonConvergence(NumericalError):
    """The eigenvalue iteration did not converge."""


class NotPSD(NumericalError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class Defective(NumericalError):
    """The Liouvillian has no complete biorthonormal eigenbasis."""


class StepTooLarge(NumericalError):
    """The fixed-step integrator drifted off the density-matrix manifold."""


class NoSteadyMode(NumericalError):
    """The reduced Lindbladian has a numerically empty null space."""


class ConditionFailed(NumericalError):
    """A constructed eigenmode failed its residual check."""


class NotStructured(LindspectError):
    """Model operators are not block diagonal in the given partition.

    Attributes:
        residual: the largest relative residual found.
        operator_index: ``None`` for the Hamiltonian, otherwise the channel index.
        report: the (unstructured) :class:`~lindspect.structure.StructureReport`.
    """

    def __init__(self, message, residual, operator_index=None, report=None):
        super().__init__(message)
        self.residual = residual
        self.operator_index = operator_index
        self.report = report
