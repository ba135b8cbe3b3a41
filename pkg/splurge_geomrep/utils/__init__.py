"""
Utilities package for splurge-geomrep.

Contains shared random-instance generators used by the experiment drivers
and the test suites.
"""

from splurge_geomrep.utils.sampling import (
    spawn_generators,
    random_vector,
    random_element,
    random_hermitian,
    random_invertible,
    random_density,
    haar_unitaries,
)

__all__ = [
    "spawn_generators",
    "random_vector",
    "random_element",
    "random_hermitian",
    "random_invertible",
    "random_density",
    "haar_unitaries",
]
