"""Finite implicative algebras, assemblies and their regular and exact completions."""
from .algebra import (Family, ImplicativeAlgebra, Separator, Valuation, compatible_with_joins, e_exists,
                      encoded_meet, fam_entails, fam_iso, validate_separator)
from .assemblies import (Assembly, AsmMorphism, equalizer, image_factorization, is_tracked, kernel_pair,
                         product, pullback)
from .errors import (ImpcompError, NotImplicative, NotTracked, ParseError, StructuralError, TermError,
                     Undecided)
from .kernels import BACKEND
from .order import ImplicativeStructure, Lattice, derive_heyting, validate_implicative_structure
from .report import Report
from .terms import parse, pretty
from .workspace import Workspace, emit, parse_workspace

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Assembly", "AsmMorphism", "Family", "ImpcompError", "ImplicativeAlgebra",
    "ImplicativeStructure", "Lattice", "NotImplicative", "NotTracked", "ParseError", "Report", "Separator",
    "StructuralError", "TermError", "Undecided", "Valuation", "Workspace", "compatible_with_joins",
    "derive_heyting", "e_exists", "emit", "encoded_meet", "equalizer", "fam_entails", "fam_iso",
    "image_factorization", "is_tracked", "kernel_pair", "parse", "parse_workspace", "pretty", "product",
    "pullback", "validate_implicative_structure", "validate_separator",
]
