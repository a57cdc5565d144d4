# errors.py - Exception hierarchy for Steady


class SteadyError(Exception):
    """Base class for every failure raised by the pipeline"""


class NoFrames(SteadyError):
    """No frame file matched the requested pattern"""


class DimensionMismatch(SteadyError):
    """Frames or flow fields do not share the same size"""


class DecodeError(SteadyError):
    """A frame file could not be decoded"""


class IoError(SteadyError, OSError):
    """Reading or writing an artifact failed"""


class InvalidParams(SteadyError, ValueError):
    """A parameter set violates its constraints"""


class InvalidSpec(SteadyError, ValueError):
    """A fixture spec violates its constraints"""


class FlowFormatError(SteadyError):
    """A .flo file is malformed"""


class BadMagic(FlowFormatError):
    pass


class TruncatedFile(FlowFormatError):
    pass


class MissingExternalFlow(SteadyError):
    """The external flow directory lacks a file for a frame pair"""


class TooSmall(SteadyError):
    """Image is smaller than the metric window"""


class TooFewFrames(SteadyError):
    """The operation needs more frames than the sequence holds"""


class UsageError(SteadyError):
    """Missing or contradictory command-line arguments"""
