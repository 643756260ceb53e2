"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MidconvError(Exception):
    """Base class for every error raised by the package."""


class Singular(MidconvError):
    pass


class ClusterAmbiguous(MidconvError):
    pass


class BadParameter(MidconvError):
    pass


class DependentSubspaces(MidconvError):
    pass


class Inconsistent(MidconvError):
    pass


class ResonantChoice(MidconvError):
    pass


class Reducible(MidconvError):
    pass


class DegenerateNabla(MidconvError):
    pass


class NoConvergence(MidconvError):
    def __init__(self, message: str, best_residual: float = float("inf")):
        super().__init__(message)
        self.best_residual = best_residual


class DegeneratePoints(MidconvError):
    pass


class IntegrationError(MidconvError):
    pass


class SingularityTooClose(IntegrationError):
    pass


class ToleranceNotMet(IntegrationError):
    pass


class NoLambda(MidconvError):
    pass


class TheoremConditionsFail(MidconvError):
    def __init__(self, message: str, condition: str):
        super().__init__(message)
        self.condition = condition


class VerificationFail(MidconvError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
