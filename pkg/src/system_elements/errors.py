from typing import *


class RefinementError(Exception):
    pass


class MalformedInputError(RefinementError):
    """
    Raised for anything that cannot be read as a system, a value or a tree.
    `line` is set by the file readers, `position` by the functor parser.
    """

    def __init__(self, message: str, line: Optional[int] = None, position: Optional[int] = None):
        self.message = message
        if line is not None:
            message = 'line ' + str(line) + ': ' + message
        elif position is not None:
            message = 'position ' + str(position) + ': ' + message
        super().__init__(message)
        self.line = line
        self.position = position

    def within(self, context: str) -> 'MalformedInputError':
        """
        The same error, with `context` in front of its message; line and position are kept.
        """
        return type(self)(context + ': ' + self.message, line=self.line, position=self.position)


class FunctorSyntaxError(MalformedInputError):
    pass


class EmptyLabelSetError(MalformedInputError):
    pass


class ValueShapeError(MalformedInputError):
    pass


class UnknownLabelError(MalformedInputError):
    pass


class ProbabilitySumError(MalformedInputError):
    pass


class StateRangeError(MalformedInputError):
    pass


class MalformedTreeError(MalformedInputError):
    pass


class ConfigurationError(RefinementError):
    pass


class SizeLimitError(RefinementError):
    pass


class InternalError(RefinementError):
    pass
