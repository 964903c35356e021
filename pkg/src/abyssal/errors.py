"""Exception hierarchy shared across the engine."""


class AbyssalError(Exception):
    """Base class for all engine errors."""


class ParseError(AbyssalError):
    pass


class MissionSyntaxError(ParseError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        base = super().__str__()
        if self.line is not None:
            return f"line {self.line}, col {self.column}: {base}"
        return base


class ArityError(MissionSyntaxError):
    pass


class UnknownAction(MissionSyntaxError):
    pass


class IntegrityError(AbyssalError):
    """A document or patch violates a structural invariant.

    ``offender`` names the element that broke the invariant.
    """

    def __init__(self, message, offender=None):
        super().__init__(message)
        self.offender = offender


class VersionConflict(AbyssalError):
    pass


class UnknownRobot(AbyssalError):
    pass


class UnknownClass(AbyssalError):
    pass


class AmbiguousClass(AbyssalError):
    pass


class UnknownEntity(AbyssalError):
    pass


class ValidationFailed(AbyssalError):
    def __init__(self, report):
        super().__init__(f"mission failed validation: {report.summary()}")
        self.report = report


class TemplateMissing(AbyssalError):
    pass


class BindError(AbyssalError):
    pass


class BadParameter(AbyssalError):
    pass


class UnknownLeaf(AbyssalError):
    pass


class DuplicatePlan(AbyssalError):
    pass


class EmptyStack(AbyssalError):
    pass


class InvalidCommand(AbyssalError):
    pass


class NotEquipped(AbyssalError):
    pass


class LinkLost(AbyssalError):
    pass


class ScenarioError(AbyssalError):
    pass


class BadCursor(AbyssalError):
    pass


class BadMix(AbyssalError):
    pass


class CorruptLog(AbyssalError):
    pass
