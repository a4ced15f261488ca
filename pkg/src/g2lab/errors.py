"""Exception hierarchy for g2lab."""


class G2LabError(Exception):
    """Base class for all library errors."""


class NotInLambda7Error(G2LabError, ValueError):
    """A bivector has a Lambda^2_14 component above tolerance."""

    def __init__(self, residual):
        self.residual = float(residual)
        super().__init__(f"bivector is not in Lambda^2_7 (14-part norm {self.residual:.3e})")


class NotOrthogonalError(G2LabError, ValueError):
    pass


class DegeneratePlaneError(G2LabError, ValueError):
    pass


class NotTangentError(G2LabError, ValueError):
    def __init__(self, residual):
        self.residual = float(residual)
        super().__init__(f"bivector is not tangent to G(2,7) at base (residual {self.residual:.3e})")


class DegenerateSampleError(G2LabError, ValueError):
    pass


class BoundaryMarginError(G2LabError, ValueError):
    pass


class FrameAlignmentError(G2LabError, RuntimeError):
    pass


class ConfigError(G2LabError, ValueError):
    pass
