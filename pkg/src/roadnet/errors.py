"""Exception hierarchy shared by every pipeline.

The CLI maps any :class:`RoadnetError` to exit code 2; plain ``ValueError``
raised for bad arguments maps to exit code 1.
"""

from __future__ import annotations


class RoadnetError(Exception):
    """Base class for runtime failures."""


# network core
class ProjectionOutOfRange(RoadnetError, ValueError):
    pass


class InvalidGraph(RoadnetError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ReferentialError(InvalidGraph):
    pass


# gmns / sumo io
class SchemaError(RoadnetError):
    pass


class ParseError(RoadnetError):
    pass


class IoFailure(RoadnetError):
    pass


class ToolMissing(RoadnetError):
    pass


class ToolFailed(RoadnetError):
    def __init__(self, message: str, stderr: str = ""):
        super().__init__(message)
        self.stderr = stderr


# grid
class SpecInvalid(RoadnetError, ValueError):
    pass


# osm pipeline
class GeocodeNotFound(RoadnetError):
    pass


class ProviderUnreachable(RoadnetError):
    pass


class ProviderRejected(RoadnetError):
    pass


class RadiusOutOfRange(RoadnetError, ValueError):
    pass


class PolarUndefined(RoadnetError, ValueError):
    pass


class HttpFailure(RoadnetError):
    pass


class PayloadTooLarge(RoadnetError):
    pass


class XmlMalformed(RoadnetError):
    pass


class DanglingRef(RoadnetError):
    pass


class EmptyNetwork(RoadnetError):
    pass


# image extraction
class ImageEmpty(RoadnetError, ValueError):
    pass


class DimensionMismatch(RoadnetError, ValueError):
    pass


class OutOfBounds(RoadnetError, ValueError):
    pass


class NoCornersFound(RoadnetError):
    pass


# rendering
class EmptyGraph(RoadnetError):
    pass


# agent router
class EmptyRegistry(RoadnetError, ValueError):
    pass


class Unparseable(RoadnetError):
    pass


class ModelUnreachable(RoadnetError):
    pass


class Misaligned(RoadnetError, ValueError):
    pass
