#!/usr/bin/env python3

from typing import Optional


class StreamCoverError(Exception):
    """Base class of every error raised by streamcover."""


class ParseError(StreamCoverError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(message if line is None else f'line {line}: {message}')


class IdOutOfRange(ParseError):
    pass


class UnknownSetId(StreamCoverError):
    pass


class BadParams(StreamCoverError):
    pass


class NestedPass(StreamCoverError):
    pass


class NegativeBalance(StreamCoverError):
    pass


class Infeasible(StreamCoverError):
    def __init__(self, message: str = 'instance has an uncoverable element', element: Optional[int] = None):
        self.element = element
        super().__init__(message if element is None else f'{message} (element {element})')


class BudgetExceeded(StreamCoverError):
    pass


class AllGuessesFailed(StreamCoverError):
    pass


class TooLarge(StreamCoverError):
    pass


class Overflow(StreamCoverError):
    pass


class UnsupportedShape(StreamCoverError):
    pass


class EmptySample(StreamCoverError):
    pass
