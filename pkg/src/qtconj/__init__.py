"""Exact quantum-torus algebra, sl_l(Q) machinery and the conjugacy pipeline."""

from __future__ import annotations

from .errors import QTError
from .scalars import (INFINITE, QQ, CyclotomicField, FunctionField, PrimeField,
                      ResidueMap, format_scalar, parse_field, parse_scalar, zeta)
from .lattice import (CentralLattice, Presentation, canonical_presentation,
                      central_lattice, change_basis, is_fgc, symbol_decomposition)
from .qtorus import (MINUS_INFINITY, DegreeBasis, TorusElement, centre_split,
                     degree, letter_product, op_map, qt_commutator, qt_mul)
from .matlie import (CentroidTwist, Int, IotaOp, LatticeBaseChange, MorphismWord,
                     ScalarFieldMap, TorusMatrix, Transpose, apply_morphism,
                     f_gl_extend, mad_extension_test, standard_mad)
from .modules import (ModVector, OrthogonalSystem, SubmoduleSpec, build_conjugator,
                      certify_cyclic, minimal_vector, plus_slice, solve_membership)
from .specialize import certify, propose_prime, specialize_presentation, specialize_word
from .conjugacy import main_conjugacy, solve_commuting_roots, symbol_targets

__version__ = "0.1.0"
