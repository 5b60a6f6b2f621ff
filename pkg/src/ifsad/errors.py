"""Exception hierarchy shared by the library and the CLI."""


class IfsadError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ConfigError(IfsadError):
    exit_code = 2


class ParameterError(ConfigError, ValueError):
    """A numeric parameter is outside its admissible range."""


class InputFormatError(IfsadError, ValueError):
    exit_code = 3


class ModelError(IfsadError):
    exit_code = 4


class InfeasiblePartitionError(ModelError):
    """The series cannot be split into the requested number of intervals."""


class ModelConsistencyError(ModelError):
    pass


class UntrainableModelError(ModelError):
    pass


class MaskedCharacteristicError(ModelError):
    pass
