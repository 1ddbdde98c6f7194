class GeonormError(Exception):
    def __init__(self, message=''):
        super().__init__(message)
        self.message = message
    def __str__(self):
        return self.message


class InvalidAngle(GeonormError, ValueError):
    pass


class DomainError(GeonormError, ValueError):
    pass


class NumericalError(GeonormError):
    pass


class AccuracyLoss(NumericalError):
    pass


class NoConvergence(NumericalError):
    def __init__(self, message='', best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class EstimationError(GeonormError):
    pass


class EmptySample(EstimationError):
    def __init__(self, message='sample is empty'):
        super().__init__(message)


class DegenerateSample(EstimationError):
    pass


class DirectionUndefined(EstimationError):
    pass


class GammaNotIdentifiable(EstimationError):
    pass


class InputError(GeonormError):
    pass


class ParseError(InputError):
    def __init__(self, message='', line=None):
        super().__init__(message)
        self.line = line
    def __str__(self):
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class OutputError(InputError):
    def __init__(self, message='', path=None):
        super().__init__(message)
        self.path = path
    def __str__(self):
        if self.path is None:
            return self.message
        return f"{self.path}: {self.message}"
