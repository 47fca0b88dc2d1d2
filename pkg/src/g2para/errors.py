"""Exception hierarchy shared by every g2para module."""


class G2ParaError(Exception):
    """Base class for all errors raised by g2para."""


class MalformedScalarError(G2ParaError, ValueError):
    """A scalar literal or raw scalar parts could not be interpreted."""


class MixedRadicandError(G2ParaError, ValueError):
    """Two irrational scalars from different quadratic fields were combined."""


class DegenerateMetricError(G2ParaError, ValueError):
    """A metric that must be invertible has zero determinant."""


class NotG2StarFormError(G2ParaError, ValueError):
    """A 3-form does not induce a nondegenerate metric of signature (4,3)."""


class UnrepresentableCalibrationError(G2ParaError, ValueError):
    """The volume normalisation has no root inside the exact scalar field."""


class NonTimelikeUnitError(G2ParaError, ValueError):
    """The characteristic vector does not satisfy g_{4,3}(xi, xi) = -1."""

    def __init__(self, norm):
        super().__init__(f"g43(xi, xi) = {norm}, expected -1")
        self.norm = norm


class ConsistencyError(G2ParaError, RuntimeError):
    """Two independent computation paths disagreed."""


class ChainBrokenError(G2ParaError):
    """A deduction step did not produce the conclusions it was declared to produce."""

    def __init__(self, step_index, step_label, message, residual=None):
        super().__init__(f"step {step_index} ({step_label}): {message}")
        self.step_index = step_index
        self.step_label = step_label
        self.residual = residual


class ValidationError(G2ParaError, ValueError):
    """Problem input failed validation; ``location`` names the offending entry."""

    def __init__(self, message, location=None):
        text = message if location is None else f"{location}: {message}"
        super().__init__(text)
        self.location = location
