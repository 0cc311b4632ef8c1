
class EulerCertError(Exception):
    """Generic exception for eulercert

    Allow to chain exceptions keeping track of origin exception
    """
    def __init__(self, msg, original_exception=None):
        message = msg
        if original_exception:
            message += ": %s" % original_exception
        super(EulerCertError, self).__init__(message)
        self.__cause__ = original_exception
        self.__suppress_context__ = True


class DimensionError(EulerCertError):
    """Exception raised when a vector does not match the dimension of its space"""
    pass


class PartitionError(EulerCertError):
    """Exception raised when time points do not form a valid partition"""
    pass


class HorizonMismatchError(EulerCertError):
    """Exception raised when combining partitions of different horizons"""
    pass


class IndexRangeError(EulerCertError):
    """Exception raised when a node index lies outside its partition"""
    pass


class ResolventError(EulerCertError):
    """Exception raised when a resolvent cannot be evaluated"""
    pass


class UnsupportedOperatorError(EulerCertError):
    """Exception raised when an operator does not expose the requested value set"""
    pass


class AccretivityError(EulerCertError):
    """Exception raised when sampled pairs contradict the declared accretivity type"""
    pass


class BracketError(EulerCertError):
    """Exception raised when the difference quotient of the norm is not monotone"""
    pass


class SizeCapError(EulerCertError):
    """Exception raised when a density grid exceeds the supported size"""
    pass


class BVError(EulerCertError):
    """Exception raised on invalid input or a violated estimate of the bounded variation toolkit"""
    pass


class ConfigError(EulerCertError):
    """Exception raised when a configuration file cannot be read or is invalid"""
    pass


class ArgumentError(EulerCertError, ValueError):
    """Exception raised when a numeric argument lies outside its domain"""
    pass


class StepSizeError(EulerCertError):
    """Exception raised when step sizes are too large for the accretivity type

    :ivar float mesh: The offending step size.
    :ivar float omega: The accretivity type.
    :ivar float limit: The upper limit the product mesh * omega must respect.
    """
    def __init__(self, mesh, omega, limit=1.0, strict=True):
        message = 'Step size (%r) times omega (%r) is %r, expected %s %r' \
                  % (mesh, omega, mesh * omega, '<' if strict else '<=', limit)
        super(StepSizeError, self).__init__(message)
        self.mesh = mesh
        self.omega = omega
        self.limit = limit


class BoundViolationError(EulerCertError):
    """Exception raised when a certified bound is violated beyond tolerance

    :ivar str bound: Name of the violated bound.
    :ivar float slack: The most negative slack found.
    :ivar location: Where the minimal slack was found.
    """
    def __init__(self, bound, slack, location):
        message = 'Bound (%s) violated with slack %r at %s' % (bound, slack, location)
        super(BoundViolationError, self).__init__(message)
        self.bound = bound
        self.slack = slack
        self.location = location
