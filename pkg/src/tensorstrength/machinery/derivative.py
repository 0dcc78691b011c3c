"""Directional derivatives of a generator along decomposable base points."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, islice, product

from ..errors import DirectionNotFound
from ..exactalg import Field, Polynomial, QQ
from ..exactalg.linalg import rank
from ..multilinear import AltTensor, OrdTensor, SymTensor, coordinates
from ..multilinear.kernels import wedge_vectors
from .presentation import base_dims_tuple

DEFAULT_BOX = 2


@dataclass
class DirectionalDerivative:
    f: Polynomial
    flavor: str
    d: int
    base_dims: tuple
    u: tuple          # d vectors for alt/ord, one vector for sym
    direction: list   # base coordinates of u^d, u_1^...^u_d or u_1 (x) ... (x) u_d
    h: Polynomial

    def value(self, point) -> object:
        return self.h.eval(point)


def decomposable_point(flavor: str, d: int, base_dims, u, field: Field = QQ):
    """The tensor u^d, u_1^...^u_d or u_1 (x) ... (x) u_d."""
    base_dims = base_dims_tuple(flavor, d, base_dims)
    if flavor == "sym":
        lin = Polynomial.linear_form(field, list(u[0]))
        return SymTensor(lin ** d, d)
    vecs = [{i: field.convert(a) for i, a in enumerate(v) if a} for v in u]
    if flavor == "alt":
        return AltTensor(field, d, base_dims[0], wedge_vectors(field.one, vecs))
    terms = {(): field.one}
    for v in vecs:
        terms = {k + (i,): field.mul(c, a) for k, c in terms.items() for i, a in v.items()}
    return OrdTensor(field, base_dims, terms)


def directional_derivative(f: Polynomial, direction) -> Polynomial:
    return f.directional_derivative(direction)


def _coord_key(e: int):
    return (e == 0, e < 0, abs(e))


def box_vectors(n: int, box: int) -> list:
    """Nonzero integer vectors in [-box, box]^n, sparsest first, e_1 before e_2."""
    vecs = [v for v in product(range(-box, box + 1), repeat=n) if any(v)]
    vecs.sort(key=lambda v: (sum(1 for a in v if a), tuple(_coord_key(a) for a in v)))
    return vecs


def _candidates(flavor, d, dims, box, field):
    if flavor == "sym":
        for v in box_vectors(dims[0], box):
            yield (v,)
    elif flavor == "alt":
        vecs = box_vectors(dims[0], box)
        for combo in combinations(vecs, d):
            if rank(field, [list(v) for v in combo]) == d:
                yield combo
    else:
        yield from product(*(box_vectors(n, box) for n in dims))


def find_direction(f: Polynomial, flavor: str, d: int, base_dims, box: int = DEFAULT_BOX,
                   field: Field | None = None, limit: int | None = None) -> DirectionalDerivative:
    """Deterministic sweep for u with nonzero derivative of f along u^d (or its analogues)."""
    field = field or f.field
    dims = base_dims_tuple(flavor, d, base_dims)
    if not f or f.is_constant():
        raise ValueError("need a nonzero, non-constant generator")
    gen = _candidates(flavor, d, dims, box, field)
    if limit is not None:
        gen = islice(gen, limit)
    for u in gen:
        point = decomposable_point(flavor, d, dims, u, field)
        direction = coordinates(point)
        h = f.directional_derivative(direction)
        if h:
            return DirectionalDerivative(f, flavor, d, dims, tuple(tuple(v) for v in u), direction, h)
    raise DirectionNotFound(
        f"every direction with entries in [-{box}, {box}] gives a zero derivative; "
        "enlarge the search box (--box)"
    )
