"""Exceptions shared across the package.  The CLI maps each to an exit code."""


class MalformedCertificate(ValueError):
    """A certificate term has a bad split, overlapping slots or mismatched shapes."""


class UnsupportedCharacteristic(ValueError):
    """The requested computation is not defined in this characteristic."""


class BudgetExceeded(RuntimeError):
    """A brute-force search would enumerate more candidates than allowed."""


class YBranch(RuntimeError):
    """h(q0) vanishes at the sample, so it lies outside the locus the pipeline handles."""


class DirectionNotFound(RuntimeError):
    """No direction in the search box gives a nonzero derivative."""


class SingularSystem(RuntimeError):
    """Evaluation functionals failed to determine the unknowns."""
