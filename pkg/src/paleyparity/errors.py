"""Exception hierarchy. Every error carries a stable ``kind`` used by the CLI."""


class ParityError(Exception):
    """Base class for all toolkit errors."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class UsageError(ParityError):
    pass


# field construction / arithmetic
class EvenCharacteristic(ParityError):
    pass


class NotPrime(ParityError):
    pass


class NotPrimePower(ParityError):
    pass


class ReduciblePolynomial(ParityError):
    pass


class NoBuiltinPolynomial(ParityError):
    pass


class DivisionByZero(ParityError, ZeroDivisionError):
    pass


class NonResidue(ParityError):
    pass


# linear algebra and parity structures
class NoParticularSolution(ParityError):
    pass


class InvalidCover(ParityError):
    pass


class NotCoEven(ParityError):
    pass


class TooLarge(ParityError):
    pass


class BudgetExceeded(ParityError):
    pass


class DomainError(ParityError, ValueError):
    pass


# codes
class EmptySet(ParityError):
    pass


class Infeasible(ParityError):
    pass


class ConstructionFailed(ParityError):
    pass


class VerificationFailed(ParityError):
    pass
