"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for all errors raised by rotalg."""


class UnknownElement(AlgebraError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CyclicCovers(AlgebraError):
    pass


class NoBounds(AlgebraError):
    pass


class NotALattice(AlgebraError):
    pass


class NoResiduum(AlgebraError):
    pass


class InconsistentTables(AlgebraError):
    """A supplied table disagrees with the one derived from the order."""


class MissingFixpointConstant(AlgebraError):
    pass


class UnclassifiedAlgebra(AlgebraError):
    pass


class NotGodel(AlgebraError):
    pass


class NotNM(AlgebraError):
    pass


class NotDirectlyIndecomposable(AlgebraError):
    pass


class ModeMismatch(AlgebraError):
    pass


class PreconditionViolated(AlgebraError):
    def __init__(self, condition, detail=""):
        self.condition = condition
        msg = f"precondition {condition} violated"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ClosureFailure(AlgebraError):
    def __init__(self, element, image):
        self.element = element
        self.image = image
        super().__init__(f"image {image} of {element} escapes the carrier")


class InconsistentDerivation(AlgebraError):
    """A law that must follow from verified hypotheses failed: an internal bug."""


class SignatureMismatch(AlgebraError):
    pass


class ConstraintInapplicable(AlgebraError):
    pass


class ParseError(AlgebraError):
    def __init__(self, msg, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)


class SchemaError(AlgebraError):
    def __init__(self, field, msg):
        self.field = field
        super().__init__(f"{field}: {msg}")
