"""Exception hierarchy shared by all modules."""


class ArtifactError(Exception):
    pass


class UnsupportedType(ArtifactError):
    pass


class SymmetrizerMismatch(ArtifactError):
    pass


class LatticeError(ArtifactError):
    pass


class NotReduced(ArtifactError):
    pass


class NotDominant(ArtifactError):
    pass


class NotRegular(ArtifactError):
    pass


class VariableContextError(ArtifactError):
    pass


class NotSubtractionFree(ArtifactError):
    pass


class NotExchangeable(ArtifactError):
    pass


class NotFound(ArtifactError):
    pass


class UnsupportedWeight(ArtifactError):
    pass


class NotDecomposable(ArtifactError):
    pass


class NotInCone(ArtifactError):
    pass


class TheoremSymViolation(ArtifactError):
    pass


class NotQuantizable(ArtifactError):
    pass


class InconclusiveWitness(ArtifactError):
    pass
