"""Exception hierarchy.

Two families: ``ValidationError`` for structurally or geometrically invalid
input (bad meshes, lengths outside the admissible polytope, rejected
curvature targets), and ``NumericalError`` for failures that arise while
computing on well-formed input (flip loops, degenerate charts, solver
breakdowns).  The CLI maps the first family to exit code 1 and the second
to exit code 2.
"""


class ConesphereError(Exception):
    pass


class ValidationError(ConesphereError):
    pass


class NonManifold(ValidationError):
    pass


class WrongEuler(ValidationError):
    pass


class OrientationMismatch(ValidationError):
    pass


class UnflippableEdge(ValidationError):
    pass


class DegenerateTriangle(ValidationError):
    pass


class NotInImage(ValidationError):
    pass


class LengthOutOfRange(ValidationError):
    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


class OutOfRange(ValidationError):
    pass


class GaussBonnetExcess(ValidationError):
    pass


class TriangleLikeViolation(ValidationError):
    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class MeshFormatError(ValidationError):
    pass


class NumericalError(ConesphereError):
    pass


class NonConvexQuad(NumericalError):
    pass


class DiagonalOutOfRange(NumericalError):
    pass


class IterationCap(NumericalError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class OutsideChart(NumericalError):
    pass


class NearFlatEdge(NumericalError):
    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


class SolveError(NumericalError):
    """Solver failure; carries the partial report for diagnostics."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SingularJacobian(SolveError):
    pass


class LineSearchStall(SolveError):
    pass


class MaxIterations(SolveError):
    pass
