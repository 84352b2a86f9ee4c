"""Auslander-Dlab-Ringel algebras of semilocal modules over finite-dimensional algebras.

Layers, bottom up: ``exactlin`` (F_p linear algebra), ``presentation``
(quivers with relations), ``repcat`` (modules, Hom spaces, splitting),
``adrcore`` (catalog, stratification, chains), ``endoalg`` (the
endomorphism algebra B and its homological invariants) and ``qhcheck``
(quasi-hereditary checks and chain search).
"""

from .adrcore import AdrModule, build_adr, build_chain, stratify
from .endoalg import endomorphism_algebra, global_dimension
from .presentation import Presentation, parse_presentation
from .qhcheck import check_left_strongly_qh, check_strongly_qh, find_rejective_chain, theorem2_suite
from .repcat import Module, hom_space, parse_module_file

__version__ = "0.1.0"

__all__ = [
    "AdrModule", "Module", "Presentation", "build_adr", "build_chain", "check_left_strongly_qh",
    "check_strongly_qh", "endomorphism_algebra", "find_rejective_chain", "global_dimension", "hom_space",
    "parse_module_file", "parse_presentation", "stratify", "theorem2_suite",
]
