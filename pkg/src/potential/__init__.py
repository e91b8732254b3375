from .layers import (
    LayerKernel,
    LayerVariant,
    assemble_block,
    assemble_gradient_block,
    evaluate_field,
    evaluate_field_gradient,
    field_gradient_matrix,
    field_matrix,
)
from .quadrature import log_quadrature_weights

__all__ = [
    "LayerKernel",
    "LayerVariant",
    "assemble_block",
    "assemble_gradient_block",
    "evaluate_field",
    "evaluate_field_gradient",
    "field_gradient_matrix",
    "field_matrix",
    "log_quadrature_weights",
]
