"""Exact arithmetic: finite fields, univariate and trivariate polynomials,
dense linear algebra."""

from .field import (
    Embedding,
    FieldDescriptor,
    FieldElement,
    build_field,
    extension_field,
    find_irreducible,
    prime_field,
)
from .tripoly import (
    Reducer,
    TriPoly,
    divmod_in_var,
    exact_div_tri,
    factor_homogeneous,
    gcd_homogeneous,
    normal_form,
    resultant,
    squarefree_part_homogeneous,
)
from .unipoly import UniPoly, factor_univariate, roots_in_field

__all__ = [
    "Embedding",
    "FieldDescriptor",
    "FieldElement",
    "build_field",
    "extension_field",
    "find_irreducible",
    "prime_field",
    "Reducer",
    "TriPoly",
    "divmod_in_var",
    "exact_div_tri",
    "factor_homogeneous",
    "gcd_homogeneous",
    "normal_form",
    "resultant",
    "squarefree_part_homogeneous",
    "UniPoly",
    "factor_univariate",
    "roots_in_field",
]
