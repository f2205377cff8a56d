"""Exception types shared across the package."""


class XaistabError(Exception):
    """Base class for package errors."""


class ConfigError(XaistabError):
    """Bad configuration value or missing configuration key."""


class DatasetError(XaistabError):
    """Dataset cannot be loaded or does not satisfy basic requirements."""


class TrainingError(XaistabError):
    """Model training diverged or could not run."""


class FormatError(XaistabError):
    """A persisted file (model, embeddings) is malformed."""


class InterfaceError(XaistabError):
    """A classifier violated its probability contract."""


class ParameterError(XaistabError):
    """A numeric parameter is outside its valid range."""
