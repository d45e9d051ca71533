# -*- coding: utf-8 -*-
"""
Exception hierarchy for locked-front computations
"""


class VlockError(Exception):
    """Base class for every error raised by the vlock package"""


class ParameterDomainError(VlockError, ValueError):
    """Parameters or configuration values violate a model invariant"""


class DegenerateConfigurationError(VlockError):
    """Double roots, modulus ties or coincident nodes (typically at a tongue tip)"""


class RootEngineError(VlockError):
    """Polynomial roots could not be computed or paired to tolerance"""


class FrontConstructionError(VlockError):
    """A constructed front failed one of its certificates"""


class WindowTooSmallError(VlockError, ValueError):
    """Lattice window cannot hold the stencil dependencies of the locked map"""


class BoundaryReachedError(VlockError):
    """Simulated front reached the right edge of the lattice window"""
