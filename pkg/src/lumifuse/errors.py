"""Exception hierarchy shared across lumifuse modules."""


class LumifuseError(Exception):
    """Base class for every error raised by this package."""


class InvalidImageError(LumifuseError, ValueError):
    pass


class InvalidPatternError(LumifuseError, ValueError):
    pass


class DimensionMismatchError(LumifuseError, ValueError):
    pass


class ImageTooSmallError(LumifuseError, ValueError):
    pass


class TooManyLevelsError(LumifuseError, ValueError):
    pass


class FusionArityError(LumifuseError, ValueError):
    """Wrong number of inputs for a fusion method.

    Carries the method name and the arity it expects so the CLI can
    surface the message verbatim.
    """

    def __init__(self, method: str, expected: str, got: int):
        self.method = method
        self.expected = expected
        self.got = got
        super().__init__(f"fusion method '{method}' expects {expected} input images, got {got}")


# PNG interchange
class PngIOError(LumifuseError, OSError):
    pass


class MalformedPngError(LumifuseError, ValueError):
    pass


class UnsupportedPngError(LumifuseError, ValueError):
    pass


class UnsupportedBitDepthError(UnsupportedPngError):
    pass


class UnsupportedChannelsError(UnsupportedPngError):
    pass


# dataset layout
class DatasetError(LumifuseError):
    pass


class MissingBackgroundError(DatasetError, ValueError):
    pass


class MalformedFilenameError(DatasetError, ValueError):
    pass


class DatasetDimensionError(DatasetError, DimensionMismatchError):
    pass


class UnknownPatternError(LumifuseError, KeyError):
    pass


class SceneError(LumifuseError, ValueError):
    pass


class ConfigError(LumifuseError, ValueError):
    pass
