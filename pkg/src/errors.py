#!/usr/bin/env python

"""
Exception hierarchy shared by the library and the CLI
"""


class ColourSegError(Exception):
    """Base class for all colour segmentation errors"""

    exit_code = 1


class ConfigurationError(ColourSegError, ValueError):
    """Invalid parameters, unknown preset or malformed config file"""

    exit_code = 2


class InputError(ColourSegError):
    """Unreadable input, dimension mismatch or invalid scene description"""

    exit_code = 2


class DomainError(ColourSegError):
    """Operation called outside its mathematical domain"""


class DegenerateTransformError(ColourSegError):
    """Homogeneous coordinate vanished during a colour-space transform"""


class NumericalError(ColourSegError):
    """Numerical corruption detected (e.g. clearly negative scatter eigenvalue)"""
