"""Exception hierarchy shared by all modules."""


class BFreeError(Exception):
    """Base class for every error raised by :mod:`bfree`."""


class ConfigError(BFreeError, ValueError):
    """Invalid user input: unknown family, malformed residues, bad parameter."""


class BudgetExceeded(BFreeError):
    """A computation would exceed a configured size or time budget."""


class FactorizationCapError(BudgetExceeded, ValueError):
    pass


class DensityCapError(BudgetExceeded):
    pass


class SieveBudgetError(BudgetExceeded):
    pass


class IncompatibleResidues(BFreeError, ValueError):
    """Raised by the CRT solver; carries the earliest violating pair of moduli."""

    def __init__(self, b1: int, r1: int, b2: int, r2: int):
        self.pair = (b1, b2)
        self.residues = (r1, r2)
        super().__init__(
            f"incompatible residues: {r1} mod {b1} and {r2} mod {b2} "
            f"disagree modulo gcd={_gcd(b1, b2)}"
        )


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)
