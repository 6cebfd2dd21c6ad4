"""Exception hierarchy for the verification workbench."""

import numpy as np


class GeometryError(Exception):
    """Base class. ``witness`` carries the offending point or element, if any."""

    def __init__(self, message, witness=None, value=None):
        super().__init__(message)
        self.witness = None if witness is None else np.asarray(witness, dtype=float)
        self.value = value


class NonConvergence(GeometryError):
    pass


class RankDeficient(GeometryError):
    pass


class EvenDimension(GeometryError):
    pass


class DegenerateContact(GeometryError):
    pass


class FlowEscape(GeometryError):
    pass


class NotContact(GeometryError):
    def __init__(self, message, witness=None, value=None, report=None):
        super().__init__(message, witness=witness, value=value)
        self.report = report


class NotInvariant(GeometryError):
    def __init__(self, message, witness=None, value=None, element=None):
        super().__init__(message, witness=witness, value=value)
        self.element = element


class NotHorizontal(GeometryError):
    pass


class FrameExtensionFailure(GeometryError):
    pass


class OddHorizontalDimension(GeometryError):
    pass


class NotInvariantFiberForm(GeometryError):
    pass


class NonFreePoint(GeometryError):
    pass


class DegenerateFiberRestriction(GeometryError):
    pass


class PolarBreakdown(GeometryError):
    pass


class EtaOutsideSlice(GeometryError):
    pass


class NoSolutions(GeometryError):
    pass


class SplittingFailure(GeometryError):
    def __init__(self, message, condition, witness=None, value=None):
        super().__init__(message, witness=witness, value=value)
        self.condition = condition


class ConfigError(Exception):
    pass


class ScenarioError(Exception):
    pass
