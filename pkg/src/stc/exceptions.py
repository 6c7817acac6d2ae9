"""Exception and warning types raised across the package."""


class InvalidInputError(ValueError):
    pass


class SingularDeconvolutionError(ArithmeticError):
    """Deconvolution by a prior whose spectrum vanishes with no regularization."""


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptySequenceError(FileNotFoundError):
    pass


class InvalidSpecError(ValueError):
    pass


class DegeneratePriorWarning(RuntimeWarning):
    pass


class LostConfidenceWarning(RuntimeWarning):
    pass


class ImaginaryResidueWarning(RuntimeWarning):
    pass
