"""hermlat: definite hermitian lattices over imaginary quadratic maximal
orders, with exact classification and Galois-action machinery."""

from .orders import (
    FracIdeal,
    IdealClassGroup,
    KNumber,
    Order,
    canonical_associate,
    class_group,
    ideal_conj,
    ideal_inv,
    ideal_mul,
    ideal_norm,
    is_principal,
    make_order,
)

__all__ = [
    "FracIdeal",
    "IdealClassGroup",
    "KNumber",
    "Order",
    "canonical_associate",
    "class_group",
    "ideal_conj",
    "ideal_inv",
    "ideal_mul",
    "ideal_norm",
    "is_principal",
    "make_order",
]
