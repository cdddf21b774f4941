"""Exception hierarchy.

Input problems derive from :class:`InputValidationError` (CLI exit code 2),
classification failures from :class:`ClassificationError` (exit code 3).
"""


class RiccatiError(Exception):
    pass


class InputValidationError(RiccatiError):
    pass


class BernoulliInput(InputValidationError):
    def __init__(self, msg: str = "Bernoulli system: out of scope (gamma2 is identically zero)"):
        super().__init__(msg)


class LienardInput(InputValidationError):
    def __init__(self, msg: str = "Liénard system: out of scope (k = 0)"):
        super().__init__(msg)


class DegreeViolation(InputValidationError):
    pass


class SideConditionViolated(InputValidationError):
    pass


class DegeneratePolynomial(RiccatiError):
    pass


class OutOfDomain(RiccatiError):
    pass


class InconsistentLocalType(RiccatiError):
    pass


class StepFailure(RiccatiError):
    pass


class LemmaViolation(RiccatiError):
    pass


class ClassificationError(RiccatiError):
    pass


class ImpossibleCase(ClassificationError):
    pass


class NoMatch(ClassificationError):
    pass


class AmbiguousMatch(ClassificationError):
    def __init__(self, msg: str, candidates=()):
        super().__init__(msg)
        self.candidates = tuple(candidates)


class CatalogGap(ClassificationError):
    pass
