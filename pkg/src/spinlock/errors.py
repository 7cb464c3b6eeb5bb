"""Exception types shared across the package."""


class SpinlockError(Exception):
    """Base class for all spinlock errors."""


class ConfigError(SpinlockError):
    """Invalid configuration: bad value, unknown key, or infeasible dimension."""


class DimensionMismatchError(SpinlockError):
    """Operands live on different Hilbert spaces or have unequal lengths."""


class NonHermitianError(SpinlockError):
    """An operator contractually required to be Hermitian is not."""


class NumericsError(SpinlockError):
    """A numerical tolerance was violated badly enough to indicate a logic bug
    rather than rounding (e.g. a variance below -1e-10)."""


class FringeNodeError(SpinlockError):
    """Minimal detectable phase requested at a fringe node (vanishing slope)."""


class PhaseDomainError(SpinlockError):
    """Radicand of the minimal-detectable-phase formula is negative beyond
    rounding tolerance."""


class WindowError(SpinlockError):
    """Time argument outside the interrogation window of a pulse schedule."""


class EmptyRangeError(SpinlockError):
    """No contiguous stretch of a contrast curve clears the threshold."""
