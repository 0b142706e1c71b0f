# Error hierarchy. The CLI maps each class to an exit code.


class GensicError(Exception):
    pass


class ConfigError(GensicError):
    pass


class FormatError(GensicError, ValueError):
    '''A JSON document does not follow the expected schema.'''


class DimensionMismatch(GensicError, ValueError):
    pass


class InvalidDimension(GensicError, ValueError):
    '''The requested dimension is not supported by a constructor.'''


class InvalidPovm(GensicError):

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ZeroTraceOutcome(InvalidPovm):

    def __init__(self, index):
        super().__init__(f'Outcome {index} has zero trace; drop it before '
                         f'building the measurement.')
        self.index = index


class ConstructionError(GensicError):

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotInformationallyComplete(GensicError):

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class NotMinimal(GensicError):
    pass


class SmallProbability(GensicError):

    def __init__(self, index, probability):
        super().__init__(f'Outcome {index} has probability {probability:.3e} '
                         f'for this state.')
        self.index = index
        self.probability = probability


class RankDeficientBasis(GensicError):
    pass


class HermiticityWarning(UserWarning):
    pass


class InvalidState(GensicError):
    '''A density operator is not positive or does not have unit trace.'''


class UsageError(GensicError, ValueError):
    '''Parameters inconsistent with the requested operation.'''
