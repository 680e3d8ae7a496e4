"""Exception hierarchy.

Validation problems (bad input, bad config) derive from ``ValidationError``;
failures of a numerical stage (meshing, linear solve) derive from
``NumericalError``.  The CLI maps the two families to exit codes 1 and 2.
"""


class ValidationError(ValueError):
    """Invalid input or configuration.  ``key`` names the offending field."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class EmptyLatticeError(ValidationError):
    """No inclusions: the lattice for the requested epsilon is empty."""


class NumericalError(RuntimeError):
    pass


class MeshError(NumericalError):
    pass


class OutsideMeshError(LookupError):
    """A point could not be located in any triangle of a mesh."""


class SolverError(NumericalError):
    pass


class ConvergenceError(SolverError):
    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class IndefiniteMatrixError(SolverError):
    pass


class StudyError(NumericalError):
    """A numerical failure inside a study row; ``epsilon`` identifies the row."""

    def __init__(self, message, epsilon=None):
        super().__init__(message)
        self.epsilon = epsilon
