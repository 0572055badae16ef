"""Exact combinatorics of hyperplane arrangements and their Artin-type complexes.

Submodules:

* ``exactgeom``, ``arrangement``: rational geometry, fans, dual complexes, gates
* ``salvetti``: Salvetti complexes and retractions
* ``families``: reflection arrangements, the ``H`` and ``K`` families, admissibility
* ``posetlab``, ``orthoscheme``: poset criteria and l-infinity orthoscheme metrics
* ``coxmodel``: cube model of Coxeter complexes of types A, B, D
* ``garside``, ``artinball``: Garside normal forms, Cayley and Deligne balls
"""
from ._accel import backend
from .arrangement import Arrangement, DualComplex, build_dual_complex, enumerate_fans, gate
from .exactgeom import Hyperplane
from .families import family_H, family_K, reflection_arrangement, verify_admissible
from .posetlab import FinitePoset

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "DualComplex",
    "FinitePoset",
    "Hyperplane",
    "backend",
    "build_dual_complex",
    "enumerate_fans",
    "family_H",
    "family_K",
    "gate",
    "reflection_arrangement",
    "verify_admissible",
]
