class SweepDecoderError(Exception):
    """Base class for every error raised by the sweepdecoder package."""


class LatticeError(SweepDecoderError):
    pass


class CausalOrderError(SweepDecoderError):
    pass


class RuleTableError(SweepDecoderError):
    def __init__(self, message, vertex=None, pattern=None):
        super().__init__(message)
        self.vertex = vertex
        self.pattern = pattern


class NoiseModelError(SweepDecoderError):
    pass


class ConfigError(SweepDecoderError):
    pass


class CrossingNotFound(SweepDecoderError):
    pass


class FitError(SweepDecoderError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
