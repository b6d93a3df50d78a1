class DimensionMismatchError(ValueError):
    pass


class HermiticityError(ValueError):
    pass


class ParameterRangeError(ValueError):
    pass


class EigenDecompositionError(Exception):
    pass


class InvalidPovmError(Exception):
    def __init__(self, msg, report=None):
        self.report = report
        super().__init__(msg)


class SolverError(Exception):
    def __init__(self, msg, solution=None):
        self.solution = solution
        super().__init__(msg)


class InfeasibleProblemError(SolverError):
    pass


class GridSpecError(ValueError):
    pass


class IdentityCheckError(Exception):
    pass


class SdpFormatError(Exception):
    pass


class BoundViolationError(IdentityCheckError):
    pass
