"""Exception hierarchy shared by all modules."""


class NashLabError(Exception):
    pass


class GeometryViolation(NashLabError):
    """Disks of a Cantor family overlap or leave the unit square."""


class ResolutionError(NashLabError):
    """A grid is too coarse to resolve the structure it should carry."""


class DomainError(NashLabError, ValueError):
    pass


class ParameterError(NashLabError, ValueError):
    pass


class DegenerateField(NashLabError):
    """Field has vanishing gradient (constant) so ratios are undefined."""


class CflViolation(NashLabError):
    pass


class NonFinite(NashLabError):
    pass


class QuadratureFailure(NashLabError):
    pass


class NonIntegrableTail(NashLabError):
    pass


class ConventionMismatch(NashLabError):
    pass


class InsufficientData(NashLabError, ValueError):
    pass


class NonPositiveData(NashLabError, ValueError):
    pass
