# -------------------------------------------------------------------------
# Copyright (c) nomaa developers. All rights reserved.
# Licensed under the MIT License. See License.txt in the project root for
# license information.
# --------------------------------------------------------------------------

"""
Common errors.
"""
_domain_error = """
It usually means a special function or a density was evaluated outside of its support
(E1 needs a strictly positive argument, densities need non-negative ordered arguments).
"""
_scenario_error = """
It usually means the large-scale parameters do not describe a valid ordered two-user (or K-user) uplink:
powers must be positive and ascending, gamma must be >= 1 and rho must be positive.
"""
_configuration_error = """
It usually means a strategy, metric, engine or sweep field is misspelled or out of range.
Please check the documented values in nomaa.analysis.supported.
"""
_no_crossover = """
It usually means OMA never overtakes NOMA within the scanned SNR range (for instance when gamma = 1).
"""
_missing_formula = """
It usually means no (closed form, defining integral) pair is registered under this identifier.
Please check nomaa.analysis.oracle.quadrature.formulas().
"""
_constant_error = """
It usually means a constant is not available or you are trying to override a constant value.
"""


class DomainError(ValueError):
    """
    Raised when a special function or a density is evaluated outside its domain.
    """

    def __init__(self, msg):
        super().__init__(msg + _domain_error)


class ScenarioError(ValueError):
    """
    Raised when a `Scenario` or a `KScenario` violates its invariants.
    """

    def __init__(self, msg):
        super().__init__(msg + _scenario_error)


class ConfigurationError(ValueError):
    """
    Raised for invalid strategy partitions, unknown enum values and invalid sweep specifications.
    """

    def __init__(self, msg):
        super().__init__(msg + _configuration_error)


class NoCrossoverError(RuntimeError):
    """
    Raised when no finite OMA/NOMA crossover exists in the scanned SNR range.
    """

    def __init__(self, msg):
        super().__init__(msg + _no_crossover)


class MissingFormula(RuntimeError):
    """
    Raised when there is no registered formula pair for an identifier.
    """

    def __init__(self, msg):
        super().__init__(msg + _missing_formula)


class ConstantError(TypeError):
    """
    Raised when a constant is not available or it get overwritten.
    """

    def __init__(self, msg):
        super().__init__(msg + _constant_error)
