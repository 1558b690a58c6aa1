"""
Exceptions raised by the simulation library. Every class carries a short machine-readable code, printed by the CLI
on failure as "error: <code>: <message>".
"""


class BanditSimError(Exception):
    code = "banditsim"


class ParameterDomainError(BanditSimError, ValueError):
    code = "parameter_domain"


class InsufficientDataError(BanditSimError, ValueError):
    code = "insufficient_data"


class NoDataError(BanditSimError, ValueError):
    code = "no_data"


class SingularDesignError(BanditSimError, ValueError):
    code = "singular_design"


class DimensionError(BanditSimError, ValueError):
    code = "dimension"


class ConfigurationError(BanditSimError, ValueError):
    code = "configuration"
