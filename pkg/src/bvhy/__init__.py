"""Exact homotopy transfer for finite-dimensional dg BV-algebras."""

from .bv import BVAlgebra, check_bv_axioms, derived_bracket, evaluate_product
from .certify import (Footprint, certificate_cross_check, certify_formality,
                      is_hypersurface_footprint, op_bidegree)
from .engine import (OperationSpec, OperationTable, TreeEvaluator,
                     build_operation_table, check_formal_unit, evaluate_tree,
                     higher_op_specs, naive_evaluate_tree, strict_hy_spec,
                     top_degree_report, transferred_operation,
                     truncate_to_strict)
from .graded import (Bidegree, BigradedSpace, Element, GradedMap,
                     apply_in_slot, koszul_sign)
from .hodge import (InnerProduct, TransferData, adjoint_differential,
                    build_transfer_data, check_side_conditions,
                    check_strong_trivialization_composites,
                    harmonic_decomposition)
from .models import (ModelDescriptor, SearchExhausted, build_torus_model,
                     build_trivial_model, builtin_footprints, builtin_models,
                     search_nonformal)
from .trees import (DecoratedTree, canonicalize, enumerate_trees, is_lie_type,
                    parse_tree, tree_bidegree, unparse_tree)

__version__ = "0.1.0"
