"""Exception hierarchy shared by all modules.

Each class carries an ``exit_code`` so the command line front end can map
failures to process status without a lookup table.
"""


class CycleDecompError(Exception):
    exit_code = 2


class InvalidParameters(CycleDecompError):
    exit_code = 1


class InvalidPacking(CycleDecompError):
    pass


class OddDegree(CycleDecompError):
    pass


class NeighborhoodMismatch(CycleDecompError):
    pass


class InvalidOrigin(CycleDecompError):
    pass


class PreconditionViolated(CycleDecompError):
    pass


class InternalTransformFailure(CycleDecompError):
    pass


class HypothesesViolated(CycleDecompError):
    exit_code = 1


class InfeasibleCounts(CycleDecompError):
    exit_code = 1


class InfeasibleParameters(CycleDecompError):
    exit_code = 1


class Unsupported(CycleDecompError):
    exit_code = 1


class ConstructionFailed(CycleDecompError):
    pass


class NotGood(CycleDecompError):
    pass


class TooLarge(CycleDecompError):
    exit_code = 1


class EmptyInput(CycleDecompError):
    pass


class ParseError(CycleDecompError):
    exit_code = 3
