"""Exact symbolic engine for generalized loop/map Witt algebras and their bialgebra structures."""

from .algebra import (
    BasisIndex,
    ConfigError,
    Element,
    LaurentMonomials,
    StructureTable,
    bracket,
    jacobi_residual,
    load_table,
    truncated_polynomials,
)
from .bialgebra import (
    certify_bialgebra,
    cobracket,
    cojacobi_residual,
    compatibility_residual,
    cybe_c,
    mybe_residual,
    triangular_r,
)
from .cohomology import (
    DerivationTable,
    Window,
    annihilator_witness,
    coboundary_of,
    cocycle_residual,
    degree_zero_check,
    grading_split,
    inner_solve,
    skewness_witness,
)
from .linsolve import Certificate, InconsistentSystem
from .parser import ParseError, parse, parse_element, parse_tensor2, parse_tensor3, render
from .tensors import Tensor2, Tensor3, act2, act3, cyclic, is_skew, tensor, twist

__version__ = "0.1.0"
