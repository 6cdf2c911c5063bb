"""Exception types shared across the package."""


class FrobCLTError(Exception):
    """Base class for package errors."""


class ConsistencyError(FrobCLTError, ArithmeticError):
    """An exact identity that must hold did not (signals a table bug)."""


class UnsupportedSymbolError(FrobCLTError, ValueError):
    pass


class ResourceError(FrobCLTError, RuntimeError):
    """A configured size cap was exceeded."""


class DataQualityError(FrobCLTError, ValueError):
    pass


class QuadratureError(FrobCLTError, ArithmeticError):
    pass


class UnresolvedPrimeError(FrobCLTError, ArithmeticError):
    pass


class ParseError(FrobCLTError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(ParseError):
    pass


class CacheError(FrobCLTError):
    pass


class ChecksumError(CacheError):
    pass


class CacheVersionError(CacheError):
    pass
