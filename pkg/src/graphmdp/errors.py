"""Exception types shared across the package."""


class GraphMdpError(Exception):
    """Base class for package errors."""


class DatasetError(GraphMdpError):
    """Malformed dataset or trajectory file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SchemaError(GraphMdpError):
    """Feature store contents do not match the declared schema."""


class InvalidActionError(GraphMdpError):
    """Action rejected by the environment's mask."""


class PolicyError(GraphMdpError):
    """Policy produced an unusable action distribution."""


class ExpertError(GraphMdpError):
    """Expert policy queried on a state where it is undefined."""


class ConfigError(GraphMdpError):
    """Invalid training or run configuration."""


class NumericalError(GraphMdpError):
    """Training diverged or produced non-finite values."""
