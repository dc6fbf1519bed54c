"""Exception hierarchy shared by all modules."""


class ZeroTempError(Exception):
    pass


class NotAdmissible(ZeroTempError, ValueError):
    """A word or periodic orbit uses a forbidden transition."""


class DomainMismatch(ZeroTempError, ValueError):
    """Objects defined over different shift spaces or cylinder lengths were combined."""


class Reducible(ZeroTempError, ValueError):
    """The transition (or transfer) matrix is not irreducible."""


class NotTransitive(Reducible):
    pass


class TooLarge(ZeroTempError, RuntimeError):
    """A brute-force enumeration exceeded its guard."""


class ExactnessRequired(ZeroTempError, TypeError):
    """The operation needs exact rational data but got interval data."""


class NotResolved(ZeroTempError, RuntimeError):
    """The classification is undetermined at the available precision."""


class PrecisionNotReached(ZeroTempError, RuntimeError):
    pass


class NotSeparated(ZeroTempError, RuntimeError):
    """One-sided pressure derivatives did not meet within the iteration budget."""


class WeightsUnknown(ZeroTempError, ValueError):
    """Integration against a list of ergodic components without weights."""


class WrongVariant(ZeroTempError, TypeError):
    pass


class PerturbationTooSmall(ZeroTempError, ValueError):
    pass
