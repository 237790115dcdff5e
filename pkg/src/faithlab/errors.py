"""Exception types shared across faithlab."""


class FaithlabError(Exception):
    """Base class for all library errors."""


class NotPrime(FaithlabError, ValueError):
    pass


class NotPrimePower(FaithlabError, ValueError):
    pass


class ReducibleModulus(FaithlabError, ValueError):
    pass


class DivisionByZero(FaithlabError, ZeroDivisionError):
    pass


class OrderCapExceeded(FaithlabError):
    pass


class BudgetExceeded(FaithlabError):
    pass


class LimitExceeded(FaithlabError):
    pass


class NotNormal(FaithlabError, ValueError):
    pass


class TrivialGroup(FaithlabError, ValueError):
    pass


class NotAbelian(FaithlabError, ValueError):
    pass


class UnknownBuilder(FaithlabError, KeyError):
    pass


class NotElementaryAbelian(FaithlabError, ValueError):
    pass


class DimTooLarge(FaithlabError):
    pass


class NotSimple(FaithlabError, ValueError):
    pass


class NotAField(FaithlabError):
    """Commutant of a verified-simple module failed the field axioms (a bug)."""


class NotSemisimple(FaithlabError, ValueError):
    pass


class OracleMismatch(FaithlabError, AssertionError):
    """Two independent computations disagreed. Always a bug."""


class SplitFailure(FaithlabError):
    pass


class ParseError(FaithlabError, ValueError):
    """Malformed group descriptor or command-line input."""
