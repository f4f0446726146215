# -*- coding: UTF-8 -*-
"""
tractorholonomy.exceptions
~~~~~~~~~~~~~~~~~~~~~~~~~~

Exceptions raised by the library.

Errors that stem from the input (a bad config, a family given parameters it
cannot accept, a gauge mismatch) derive from :class:`SpecError`. Errors that
stem from the numerics (step underflow, a curve leaving its chart, a
degenerate metric) derive from :class:`NumericalFailure`. The command line
interface maps both branches to distinct exit codes.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""


class TractorHolonomyException(Exception):
    def __init__(self, message):
        super().__init__(message)

    def to_json(self):
        return {"error": self.__class__.__name__, "message": str(self)}


class PackageMissingException(TractorHolonomyException):
    def __init__(self, message):
        super().__init__(message)


class TqdmException(PackageMissingException):
    def __init__(self, message):
        super().__init__(message)


# --- Input errors ---

class SpecError(TractorHolonomyException):
    def __init__(self, message):
        super().__init__(message)


class ConfigError(SpecError):
    def __init__(self, message):
        super().__init__(message)


class DomainError(SpecError):
    def __init__(self, message):
        super().__init__(message)


class DimensionError(SpecError):
    def __init__(self, message):
        super().__init__(message)


class GaugeMismatch(SpecError):
    def __init__(self, message):
        super().__init__(message)


class NotEinstein(SpecError):
    def __init__(self, message):
        super().__init__(message)


class ZeroScalar(SpecError):
    def __init__(self, message):
        super().__init__(message)


# --- Numerical failures ---

class NumericalFailure(TractorHolonomyException):
    def __init__(self, message):
        super().__init__(message)


class DegenerateMetric(NumericalFailure):
    def __init__(self, message):
        super().__init__(message)


class IntegratorFailure(NumericalFailure):
    def __init__(self, message):
        super().__init__(message)


class DomainExit(NumericalFailure):
    def __init__(self, message):
        super().__init__(message)


class TooLarge(NumericalFailure):
    def __init__(self, message):
        super().__init__(message)


# --- Verdicts that a caller may want to catch ---

class NoRecurrentField(TractorHolonomyException):
    def __init__(self, message):
        super().__init__(message)


class SigmaVanishes(TractorHolonomyException):
    def __init__(self, message):
        super().__init__(message)


class NotPrWave(TractorHolonomyException):
    def __init__(self, message):
        super().__init__(message)


class HypothesisFailed(TractorHolonomyException):
    def __init__(self, message):
        super().__init__(message)


class SearchInconclusive(TractorHolonomyException):
    def __init__(self, message, partial=None):
        """Raised when the invariant subspace search cannot decide.

        :param partial: Subspaces that were found before the search degenerated.
        """
        super().__init__(message)
        self.partial = [] if partial is None else list(partial)
