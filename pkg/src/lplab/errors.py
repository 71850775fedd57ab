"""Exception types shared across the package."""


class LplabError(Exception):
    """Base class for all lplab errors."""


class InvalidParameter(LplabError):
    pass


# --- channel construction / distortion ---

class NonInvolutivePairing(LplabError):
    pass


class ZeroProbabilitySymbol(LplabError):
    pass


class ProbabilitiesDoNotSumToOne(LplabError):
    pass


class InfeasibleDelta(LplabError):
    pass


class ZeroCapacityChannel(LplabError):
    pass


class AlphabetMismatch(LplabError):
    pass


class PairingMismatch(LplabError):
    pass


# --- codes and graphs ---

class MalformedAlist(LplabError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RowSpaceTooLarge(LplabError):
    pass


class CodeTooLarge(LplabError):
    pass


class GraphMismatch(LplabError):
    pass


class KBelowMaxOriginalDegree(LplabError):
    pass


# --- linear programming ---

class CheckDegreeTooLarge(LplabError):
    pass


class DimensionMismatch(LplabError):
    pass


class Infeasible(LplabError):
    pass


class Unbounded(LplabError):
    pass
