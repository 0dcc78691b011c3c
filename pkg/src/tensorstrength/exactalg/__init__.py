"""Exact scalars and sparse polynomials."""

from .fields import (
    QQ,
    GF,
    Field,
    FieldMismatchError,
    PrimeField,
    QuadElement,
    QuadraticField,
    RationalField,
    common_field,
    field_from_tag,
    is_prime,
    quadratic_field,
    squarefree_part,
)
from .grammar import ParseError, parse_polynomial
from .polynomial import (
    DimensionMismatchError,
    Polynomial,
    exponent_vectors,
    mono_degree,
    mono_from_exponents,
    mono_to_exponents,
    multinomial,
    random_polynomial,
)


def ring_ops(a: Polynomial, b, op: str):
    """``op`` is one of add, sub, mul, scale (b is a scalar) or eval (b is a point)."""
    return a.ring_op(op, b)


def partial_derivative(f: Polynomial, var: int) -> Polynomial:
    return f.derivative(var)


def linear_substitute(f: Polynomial, M) -> Polynomial:
    return f.linear_substitute(M)


def frobenius_root(f: Polynomial):
    return f.frobenius_root()


__all__ = [
    "QQ", "GF", "Field", "FieldMismatchError", "PrimeField", "QuadElement", "QuadraticField",
    "RationalField", "common_field", "field_from_tag", "is_prime", "quadratic_field",
    "squarefree_part", "ParseError", "parse_polynomial", "DimensionMismatchError", "Polynomial",
    "exponent_vectors", "mono_degree", "mono_from_exponents", "mono_to_exponents", "multinomial",
    "random_polynomial", "ring_ops", "partial_derivative", "linear_substitute", "frobenius_root",
]
