"""Exception hierarchy shared across the package."""


class MTestError(Exception):
    """Base class for all errors raised by this package."""


class TooFewSamples(MTestError):
    """A sample vector has fewer than two observations."""


class DegenerateData(MTestError):
    """All pooled values are equal, so no scale can be estimated."""


class InvalidPrior(MTestError):
    """A prior specification is unusable (e.g. sigma upper bound <= epsilon)."""


class NumericalUnderflow(MTestError):
    """Every sampled likelihood underflowed; the marginal cannot be estimated."""


class ChainDegenerate(MTestError):
    """Metropolis chain acceptance rate signals a misconfigured proposal."""


class InvalidAlpha(MTestError):
    """Significance level outside the open interval (0, 1)."""


class FormatVersionMismatch(MTestError):
    """Table file was written by an incompatible format version."""


class CorruptTable(MTestError):
    """Table file violates its structural invariants."""


class MissingCalibration(MTestError):
    """No calibration table available for the requested key."""


class ScenarioMismatch(MTestError):
    """Two power grids do not share the same scenario."""


class GridTooSparse(MTestError):
    """Fewer than two curve points fall inside the averaging range."""
