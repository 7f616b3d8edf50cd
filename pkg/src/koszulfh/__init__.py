"""Exact Koszul duality and factorisation homology computations in dimension one."""

__version__ = "0.1.0"

from .errors import MalformedInputError, PositivityError
from .field import GF, QQ, Field, ModP
from .linalg import SparseMatrix, kernel_basis, rank, solve
from .chain import (ChainComplex, ChainMap, FilteredComplex, GradedSpace, ValidationReport,
                    associated_graded, betti_table, completion_check, cone, convolve, dualize,
                    homology, is_quasi_iso, shift, tensor, validate, validate_map)
from .dg import (DGAlgebra, DGCoalgebra, DGComodule, DGModule, Graded, enveloping, exterior,
                 free_module, ideal_module, is_conegative, is_copositive, is_positive, opposite,
                 regular_comodule, regular_module, square_zero, tensor_algebra, trivial_comodule,
                 trivial_module, truncated_polynomial, truncated_tensor, unit_algebra,
                 unit_coalgebra, validate_algebra, validate_coalgebra, validate_comodule,
                 validate_module)
from .bar import (BarComplex, CobarComplex, Policy, Verdict, bar, bar_bimodule, cobar,
                  completeness_map, cotensor, hochschild, interchange_check, koszul_dual,
                  poincare_map, roundtrip_check, tensor_over)
from .interval import (GluingDiagram, IntervalAlgebra, circle_homology, coexcision_check,
                       collapse_map, compact_support, excision_check, global_value,
                       graded_betti, interval_homology, poincare_check)
from .lie import (CEComplex, DGLie, abelian, ce_complex, ce_homology, direct_sum, heisenberg,
                  layer, lie_cone, lie_excision_check, lie_from_tables, monoidality_check,
                  validate_lie)
