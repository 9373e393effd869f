"""Free independence computed through tensor independence.

Word algebras with projection lattices, monotone closed operators, tensor
product states, the coproduct on F0 and a partition-counting oracle.
"""

from .algebras import F0, H0, AlgebraPresentation, filtration_level, make_F0, make_H0
from .bialgebra import (
    J1,
    J2,
    convolution_operator,
    convolve_states,
    coproduct,
    counit,
    identification,
    iterated_coproduct,
    lift_coproduct,
    tau,
)
from .errors import (
    ClosureError,
    MonofreeError,
    NonStabilizedError,
    ParseError,
    PresentationError,
    SpecExhaustedError,
)
from .freeness import embed_element, free_sum_moments, hierarchy_sum_moments, m_free_moment, mixed_moment
from .monotone import MonotoneOp, Msdd, embed, equivalent, inverse_image, prefree, product
from .ncpoly import INF, Gen, NCPolynomial, Proj, format_poly, involute, multiply, parse, reduce
from .oracle import (
    boolean_convolve_oracle,
    enumerate_nc,
    free_convolve_oracle,
    free_cumulants_to_moments,
    free_product_state,
    moments_to_free_cumulants,
)
from .states import Certificate, Element, MomentSpec, certified_state, mco_state, tensor_state
from .tensorspace import TensorMonotoneOp, TensorMsdd, TensorPoly, tensor_product

__version__ = "0.1.0"

__all__ = [
    "AlgebraPresentation",
    "Certificate",
    "ClosureError",
    "Element",
    "F0",
    "Gen",
    "H0",
    "INF",
    "J1",
    "J2",
    "MomentSpec",
    "MonofreeError",
    "MonotoneOp",
    "Msdd",
    "NCPolynomial",
    "NonStabilizedError",
    "ParseError",
    "PresentationError",
    "Proj",
    "SpecExhaustedError",
    "TensorMonotoneOp",
    "TensorMsdd",
    "TensorPoly",
    "boolean_convolve_oracle",
    "certified_state",
    "convolution_operator",
    "convolve_states",
    "coproduct",
    "counit",
    "embed",
    "embed_element",
    "enumerate_nc",
    "equivalent",
    "filtration_level",
    "format_poly",
    "free_convolve_oracle",
    "free_cumulants_to_moments",
    "free_product_state",
    "free_sum_moments",
    "hierarchy_sum_moments",
    "identification",
    "inverse_image",
    "involute",
    "iterated_coproduct",
    "lift_coproduct",
    "m_free_moment",
    "make_F0",
    "make_H0",
    "mco_state",
    "mixed_moment",
    "moments_to_free_cumulants",
    "multiply",
    "parse",
    "prefree",
    "product",
    "reduce",
    "tau",
    "tensor_product",
    "tensor_state",
]
