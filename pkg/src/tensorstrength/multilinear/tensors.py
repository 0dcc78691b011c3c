"""Canonical sparse elements of S^d V, wedge^d V and V_1 (x) ... (x) V_d.

Index conventions: basis vectors are 0-based internally.  A SymTensor is its
homogeneous polynomial (variable i <-> basis vector e_i).  AltTensor keys
are strictly increasing index tuples with the sorting sign folded into the
coefficient.  OrdTensor keys carry one index per slot.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Mapping, Sequence

from ..exactalg import DimensionMismatchError, Field, FieldMismatchError, Polynomial
from ..exactalg.polynomial import exponent_vectors, mono_from_exponents, mono_to_exponents
from .kernels import sort_sign

FLAVORS = ("sym", "alt", "ord")


class LinearMap:
    """A matrix with ``rows`` = target dimension and ``cols`` = source dimension."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries: Sequence[Sequence], rows: int | None = None,
                 cols: int | None = None):
        self.field = field
        self.entries = [[field.normalize(x) for x in row] for row in entries]
        self.rows = len(self.entries) if rows is None else rows
        self.cols = (len(self.entries[0]) if self.entries else 0) if cols is None else cols
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatchError("matrix shape does not match rows/cols")

    @classmethod
    def identity(cls, field: Field, n: int) -> "LinearMap":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> "LinearMap":
        return cls(field, [[col[i] for col in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def inclusion(cls, field: Field, target_dim: int, positions: Sequence[int]) -> "LinearMap":
        """Send source basis vector j to target basis vector positions[j]."""
        ent = [[0] * len(positions) for _ in range(target_dim)]
        for j, p in enumerate(positions):
            ent[p][j] = 1
        return cls(field, ent, target_dim, len(positions))

    @classmethod
    def random(cls, rng, field: Field, rows: int, cols: int, bound: int = 3) -> "LinearMap":
        return cls(field, [[random_scalar(rng, field, bound) for _ in range(cols)] for _ in range(rows)],
                   rows, cols)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self o other."""
        if other.rows != self.cols:
            raise DimensionMismatchError("inner dimensions differ")
        if other.field != self.field:
            raise FieldMismatchError("field mismatch in composition")
        F = self.field
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                s = F.zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if not F.is_zero(a):
                        s = F.add(s, F.mul(a, other.entries[k][j]))
                row.append(s)
            out.append(row)
        return LinearMap(F, out, self.rows, other.cols)

    def __matmul__(self, other):
        return self.compose(other)

    def column(self, j: int) -> dict:
        return {i: self.entries[i][j] for i in range(self.rows) if not self.field.is_zero(self.entries[i][j])}

    def apply(self, vector: Sequence) -> list:
        F = self.field
        return [
            sum((F.mul(a, F.normalize(x)) for a, x in zip(row, vector)), F.zero) if row else F.zero
            for row in self.entries
        ]

    def transpose_entries(self) -> list:
        return [list(c) for c in zip(*self.entries)] if self.rows else [[] for _ in range(self.cols)]

    def __eq__(self, other):
        return (
            isinstance(other, LinearMap)
            and self.field == other.field
            and self.entries == other.entries
            and (self.rows, self.cols) == (other.rows, other.cols)
        )

    def __repr__(self):
        return f"LinearMap({self.rows}x{self.cols}, {self.entries})"


def random_scalar(rng, field: Field, bound: int = 3):
    if field.characteristic:
        return rng.randrange(field.characteristic)
    return field.convert(rng.randint(-bound, bound))


class _TensorBase:
    flavor = ""

    def _check_compatible(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {self.flavor} with {getattr(other, 'flavor', other)}")
        if other.field != self.field:
            raise FieldMismatchError(f"field mismatch: {self.field} vs {other.field}")
        if other.shape != self.shape:
            raise DimensionMismatchError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, c):
        return self.scale(c)

    def __hash__(self):
        return hash((self.flavor, self.field, self.shape, frozenset(self.terms.items())))


class SymTensor(_TensorBase):
    """Element of S^d K^n stored as a homogeneous polynomial in n variables."""

    flavor = "sym"
    __slots__ = ("poly", "d")

    def __init__(self, poly: Polynomial, d: int | None = None):
        if d is None:
            d = poly.degree()
            if d < 0:
                raise ValueError("degree of a zero SymTensor must be given")
        if not poly.is_homogeneous(d):
            raise ValueError(f"polynomial is not homogeneous of degree {d}")
        self.poly = poly
        self.d = d

    @classmethod
    def zero(cls, field: Field, d: int, dim: int) -> "SymTensor":
        return cls(Polynomial.zero(field, dim), d)

    @classmethod
    def from_terms(cls, field: Field, d: int, dim: int, terms: Mapping) -> "SymTensor":
        return cls(Polynomial.from_exponents(field, dim, terms), d)

    @property
    def field(self):
        return self.poly.field

    @property
    def dim(self) -> int:
        return self.poly.nvars

    @property
    def dims(self) -> tuple:
        return (self.dim,)

    @property
    def shape(self):
        return (self.d, self.dim)

    @property
    def terms(self) -> dict:
        """Dense exponent vector -> coefficient."""
        n = self.dim
        return {mono_to_exponents(m, n): c for m, c in self.poly.terms.items()}

    def __add__(self, other):
        self._check_compatible(other)
        return SymTensor(self.poly + other.poly, self.d)

    def __neg__(self):
        return SymTensor(-self.poly, self.d)

    def scale(self, c):
        return SymTensor(self.poly.scale(c), self.d)

    def __eq__(self, other):
        return (
            isinstance(other, SymTensor)
            and self.d == other.d
            and self.poly == other.poly
        )

    __hash__ = _TensorBase.__hash__

    def change_field(self, field: Field) -> "SymTensor":
        return SymTensor(self.poly.change_field(field), self.d)

    def __repr__(self):
        return f"SymTensor(d={self.d}, dim={self.dim}, {self.poly})"


class AltTensor(_TensorBase):
    flavor = "alt"
    __slots__ = ("field", "d", "dim", "terms")

    def __init__(self, field: Field, d: int, dim: int, terms: Mapping = (), *, _trusted=False):
        self.field = field
        self.d = d
        self.dim = dim
        if _trusted:
            self.terms = dict(terms)
            return
        out: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for idx, c in items:
            idx = tuple(idx)
            if len(idx) != d:
                raise DimensionMismatchError(f"index {idx} does not have length {d}")
            if any(not 0 <= i < dim for i in idx):
                raise DimensionMismatchError(f"index {idx} out of range for dimension {dim}")
            sign, key = sort_sign(idx)
            if sign == 0:
                continue
            c = field.normalize(c)
            if sign < 0:
                c = field.neg(c)
            c = field.add(out[key], c) if key in out else c
            if field.is_zero(c):
                out.pop(key, None)
            else:
                out[key] = c
        self.terms = out

    @classmethod
    def zero(cls, field, d, dim):
        return cls(field, d, dim, {}, _trusted=True)

    @classmethod
    def basis_element(cls, field, dim, idx):
        return cls(field, len(idx), dim, {tuple(idx): 1})

    @property
    def dims(self):
        return (self.dim,)

    @property
    def shape(self):
        return (self.d, self.dim)

    def __add__(self, other):
        self._check_compatible(other)
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = F.add(out[k], c) if k in out else c
            if F.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return AltTensor(F, self.d, self.dim, out, _trusted=True)

    def __neg__(self):
        F = self.field
        return AltTensor(F, self.d, self.dim, {k: F.neg(c) for k, c in self.terms.items()}, _trusted=True)

    def scale(self, c):
        F = self.field
        c = F.normalize(c)
        if F.is_zero(c):
            return AltTensor.zero(F, self.d, self.dim)
        return AltTensor(F, self.d, self.dim, {k: F.mul(v, c) for k, v in self.terms.items()}, _trusted=True)

    def __eq__(self, other):
        return (
            isinstance(other, AltTensor)
            and self.field == other.field
            and self.shape == other.shape
            and self.terms == other.terms
        )

    __hash__ = _TensorBase.__hash__

    def change_field(self, field):
        if self.field.contains(field):
            conv = lambda c: self.field.descend(c, field)  # noqa: E731
        else:
            conv = field.convert
        return AltTensor(field, self.d, self.dim, {k: conv(c) for k, c in self.terms.items()})

    def __repr__(self):
        return f"AltTensor(d={self.d}, dim={self.dim}, {self.terms})"


class OrdTensor(_TensorBase):
    flavor = "ord"
    __slots__ = ("field", "dims", "terms")

    def __init__(self, field: Field, dims: Sequence[int], terms: Mapping = (), *, _trusted=False):
        self.field = field
        self.dims = tuple(dims)
        if _trusted:
            self.terms = dict(terms)
            return
        out: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for idx, c in items:
            idx = tuple(idx)
            if len(idx) != len(self.dims) or any(not 0 <= i < n for i, n in zip(idx, self.dims)):
                raise DimensionMismatchError(f"index {idx} out of range for dims {self.dims}")
            c = field.normalize(c)
            c = field.add(out[idx], c) if idx in out else c
            if field.is_zero(c):
                out.pop(idx, None)
            else:
                out[idx] = c
        self.terms = out

    @classmethod
    def zero(cls, field, dims):
        return cls(field, dims, {}, _trusted=True)

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def shape(self):
        return self.dims

    def __add__(self, other):
        self._check_compatible(other)
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = F.add(out[k], c) if k in out else c
            if F.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return OrdTensor(F, self.dims, out, _trusted=True)

    def __neg__(self):
        F = self.field
        return OrdTensor(F, self.dims, {k: F.neg(c) for k, c in self.terms.items()}, _trusted=True)

    def scale(self, c):
        F = self.field
        c = F.normalize(c)
        if F.is_zero(c):
            return OrdTensor.zero(F, self.dims)
        return OrdTensor(F, self.dims, {k: F.mul(v, c) for k, v in self.terms.items()}, _trusted=True)

    def __eq__(self, other):
        return (
            isinstance(other, OrdTensor)
            and self.field == other.field
            and self.dims == other.dims
            and self.terms == other.terms
        )

    __hash__ = _TensorBase.__hash__

    def change_field(self, field):
        if self.field.contains(field):
            conv = lambda c: self.field.descend(c, field)  # noqa: E731
        else:
            conv = field.convert
        return OrdTensor(field, self.dims, {k: conv(c) for k, c in self.terms.items()})

    def __repr__(self):
        return f"OrdTensor(dims={self.dims}, {self.terms})"


def zero_tensor(flavor: str, field: Field, d: int, dims) -> _TensorBase:
    dims = _as_dims(flavor, d, dims)
    if flavor == "sym":
        return SymTensor.zero(field, d, dims[0])
    if flavor == "alt":
        return AltTensor.zero(field, d, dims[0])
    if flavor == "ord":
        return OrdTensor.zero(field, dims)
    raise ValueError(f"unknown flavor {flavor!r}")


def _as_dims(flavor: str, d: int, dims) -> tuple:
    if isinstance(dims, int):
        dims = (dims,) * (d if flavor == "ord" else 1)
    dims = tuple(dims)
    if flavor == "ord" and len(dims) != d:
        raise DimensionMismatchError(f"ord tensors of degree {d} need {d} slot dimensions")
    if flavor != "ord" and len(dims) != 1:
        raise DimensionMismatchError(f"{flavor} tensors take a single dimension")
    return dims


def basis(flavor: str, d: int, dims) -> list:
    """Canonical basis keys: exponent vectors, increasing tuples or slot-index tuples."""
    dims = _as_dims(flavor, d, dims)
    if flavor == "sym":
        return exponent_vectors(dims[0], d)
    if flavor == "alt":
        return list(combinations(range(dims[0]), d))
    return list(product(*(range(n) for n in dims)))


def make_tensor(flavor: str, field: Field, d: int, dims, terms: Mapping):
    dims = _as_dims(flavor, d, dims)
    if flavor == "sym":
        return SymTensor.from_terms(field, d, dims[0], terms)
    if flavor == "alt":
        return AltTensor(field, d, dims[0], terms)
    return OrdTensor(field, dims, terms)


def coordinates(q) -> list:
    """Coefficient vector of ``q`` in the canonical basis."""
    terms = q.terms
    return [terms.get(b, q.field.zero) for b in basis(q.flavor, q.d, q.dims)]


def from_coordinates(flavor: str, field: Field, d: int, dims, coords: Sequence):
    keys = basis(flavor, d, dims)
    if len(keys) != len(coords):
        raise DimensionMismatchError("coordinate vector has wrong length")
    return make_tensor(flavor, field, d, dims, dict(zip(keys, coords)))


def random_tensor(rng, flavor: str, field: Field, d: int, dims, bound: int = 3,
                  density: float = 1.0):
    keys = basis(flavor, d, dims)
    terms = {}
    for k in keys:
        if density >= 1.0 or rng.random() < density:
            terms[k] = random_scalar(rng, field, bound)
    return make_tensor(flavor, field, d, dims, terms)


def sym_from_poly(poly: Polynomial) -> SymTensor:
    return SymTensor(poly)


def mono_key(exps) -> tuple:
    return mono_from_exponents(exps)
