from ccc_order.cycles import (
    DivisorClass,
    ProductCycleClass,
    correspondence_action,
    graph_class,
    make_diagonal_type_class,
    project_to_graded,
    pushforward_sum,
)
from ccc_order.elliptic import EllipticCurveLattice, TorsionPoint, ZeroCycleClass, class_order, d_of_n
from ccc_order.isogeny import H2Tensor, HomGroup, IsogenyClass, degree, kunneth_tensor, tensor_pairing, trace
from ccc_order.jacobian import (
    CurvePairSpec,
    OrderResult,
    TorsionTensorClass,
    decide_order,
    order_of_tensor_class,
    solve_tensor_congruence,
)
from ccc_order.kummer import build_kummer_code, build_kummer_lattice, pullback_index_check
from ccc_order.lattice import (
    IntegerLattice,
    IntegerMatrix,
    gram_determinant,
    smith_normal_form,
    solve_mod,
    sublattice_index,
)

__version__ = "1.0.0"
__all__ = (
    "CurvePairSpec",
    "DivisorClass",
    "EllipticCurveLattice",
    "H2Tensor",
    "HomGroup",
    "IntegerLattice",
    "IntegerMatrix",
    "IsogenyClass",
    "OrderResult",
    "ProductCycleClass",
    "TorsionPoint",
    "TorsionTensorClass",
    "ZeroCycleClass",
    "build_kummer_code",
    "build_kummer_lattice",
    "class_order",
    "correspondence_action",
    "d_of_n",
    "decide_order",
    "degree",
    "graph_class",
    "gram_determinant",
    "kunneth_tensor",
    "make_diagonal_type_class",
    "order_of_tensor_class",
    "project_to_graded",
    "pullback_index_check",
    "pushforward_sum",
    "smith_normal_form",
    "solve_mod",
    "solve_tensor_congruence",
    "sublattice_index",
    "tensor_pairing",
    "trace",
)
