"""Induced maps, bigraded components over U (+) V, products and the contraction pairing.

Block convention: in U (+) V the U-block occupies the low coordinates
0..dimU-1 (per slot for ordinary tensors).  Everything that shifts or
chops relies on this one convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Sequence

from ..exactalg import DimensionMismatchError, FieldMismatchError
from .kernels import alt_image, ord_image, wedge_terms
from .tensors import AltTensor, LinearMap, OrdTensor, SymTensor, zero_tensor


def _ord_maps(phi, d: int) -> tuple:
    if isinstance(phi, LinearMap):
        return (phi,) * d
    phi = tuple(phi)
    if len(phi) != d:
        raise DimensionMismatchError(f"need {d} maps for an order-{d} tensor, got {len(phi)}")
    return phi


def induced_map(phi, q):
    """Apply S^d(phi), wedge^d(phi) or phi_1 (x) ... (x) phi_d to ``q``."""
    if q.flavor == "ord":
        maps = _ord_maps(phi, q.d)
        for m, n in zip(maps, q.dims):
            if m.cols != n:
                raise DimensionMismatchError(f"map source dim {m.cols} != slot dim {n}")
            if m.field != q.field:
                raise FieldMismatchError("map and tensor live over different fields")
        images = [[m.column(i) for i in range(m.cols)] for m in maps]
        out = ord_image(q.terms, images)
        return OrdTensor(q.field, tuple(m.rows for m in maps), out)
    if not isinstance(phi, LinearMap):
        raise TypeError("expected a single LinearMap")
    if phi.cols != q.dim:
        raise DimensionMismatchError(f"map source dim {phi.cols} != tensor dim {q.dim}")
    if phi.field != q.field:
        raise FieldMismatchError("map and tensor live over different fields")
    if q.flavor == "sym":
        if phi.rows == 0:
            return SymTensor.zero(q.field, q.d, 0) if q.d else SymTensor(q.poly.change_field(q.field), 0)
        return SymTensor(q.poly.linear_substitute(phi.transpose_entries()), q.d)
    images = [phi.column(i) for i in range(phi.cols)]
    return AltTensor(q.field, q.d, phi.rows, alt_image(q.terms, images))


def contract(x: Sequence, q):
    """The pairing <x, q>: directional derivative of q along x (no 1/d factor)."""
    if q.flavor != "sym":
        raise TypeError("contraction is defined here for symmetric tensors")
    if q.d == 0:
        raise ValueError("cannot contract a degree-0 tensor")
    if len(x) != q.dim:
        raise DimensionMismatchError(f"functional has length {len(x)}, tensor dim is {q.dim}")
    return SymTensor(q.poly.directional_derivative(list(x)), q.d - 1)


def products(a, b, flavor: str | None = None, slots: Sequence[int] | None = None):
    """r*s, r^s or r (x) s.

    For ordinary tensors ``slots`` lists the (0-based) slots that ``a``
    occupies; ``b`` fills the remaining ones in increasing order.
    """
    flavor = flavor or a.flavor
    if a.flavor != flavor or b.flavor != flavor:
        raise TypeError("factor flavors disagree")
    if a.field != b.field:
        raise FieldMismatchError("factors live over different fields")
    if flavor == "sym":
        if a.dim != b.dim:
            raise DimensionMismatchError("factors live in different spaces")
        return SymTensor(a.poly * b.poly, a.d + b.d)
    if flavor == "alt":
        if a.dim != b.dim:
            raise DimensionMismatchError("factors live in different spaces")
        return AltTensor(a.field, a.d + b.d, a.dim, wedge_terms(a.terms, b.terms))
    if slots is None:
        raise ValueError("ordinary products need the slot set of the first factor")
    d = a.d + b.d
    J = sorted(slots)
    if len(set(J)) != len(J) or len(J) != a.d or any(not 0 <= j < d for j in J):
        raise ValueError(f"slot set {list(slots)} does not fit a factor of order {a.d} in order {d}")
    rest = [j for j in range(d) if j not in J]
    dims = [0] * d
    for j, n in zip(J, a.dims):
        dims[j] = n
    for j, n in zip(rest, b.dims):
        dims[j] = n
    out = {}
    F = a.field
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            idx = [0] * d
            for j, i in zip(J, ia):
                idx[j] = i
            for j, i in zip(rest, ib):
                idx[j] = i
            out[tuple(idx)] = F.mul(ca, cb)
    return OrdTensor(F, tuple(dims), out)


def wedge(a: AltTensor, b: AltTensor) -> AltTensor:
    return products(a, b, "alt")


@dataclass
class BigradedElement:
    """Pieces of q over U (+) V, each kept as a tensor on the ambient space.

    sym/alt: ``components[i]`` has V-degree i.  ord: ``components[J]`` has its
    V-indices exactly in the slots of the frozenset J (0-based).
    """

    flavor: str
    d: int
    dimU: tuple
    dimV: tuple
    field: object
    components: dict = dc_field(default_factory=dict)

    @property
    def ambient_dims(self) -> tuple:
        return tuple(u + v for u, v in zip(self.dimU, self.dimV))

    def component(self, key):
        if key in self.components:
            return self.components[key]
        return zero_tensor(self.flavor, self.field, self.d, self.ambient_dims)

    @property
    def top_key(self):
        return frozenset(range(self.d)) if self.flavor == "ord" else self.d

    @property
    def top(self):
        return self.component(self.top_key)

    def lower(self):
        """Sum of every component except the top one."""
        out = zero_tensor(self.flavor, self.field, self.d, self.ambient_dims)
        for k, c in self.components.items():
            if k != self.top_key:
                out = out + c
        return out

    def keys(self) -> list:
        if self.flavor == "ord":
            return [frozenset(c) for r in range(self.d + 1) for c in combinations(range(self.d), r)]
        return list(range(self.d + 1))


def _split_dims(flavor, d, dims, dimU):
    dims = tuple(dims)
    if isinstance(dimU, int):
        dimU = (dimU,) * len(dims)
    dimU = tuple(dimU)
    if len(dimU) != len(dims):
        raise DimensionMismatchError("dimU does not match the number of slots")
    if any(u > n or u < 0 for u, n in zip(dimU, dims)):
        raise DimensionMismatchError(f"dimU {dimU} does not fit ambient dims {dims}")
    return dimU, tuple(n - u for u, n in zip(dimU, dims))


def bigraded_split(q, dimU) -> BigradedElement:
    """Partition the terms of q by V-degree (sym/alt) or V-slot set (ord)."""
    dimU, dimV = _split_dims(q.flavor, q.d, q.dims, dimU)
    parts: dict = {}
    if q.flavor == "sym":
        u = dimU[0]
        for exps, c in q.terms.items():
            parts.setdefault(sum(exps[u:]), {})[exps] = c
        comps = {i: SymTensor.from_terms(q.field, q.d, q.dim, t) for i, t in parts.items()}
    elif q.flavor == "alt":
        u = dimU[0]
        for idx, c in q.terms.items():
            parts.setdefault(sum(1 for i in idx if i >= u), {})[idx] = c
        comps = {i: AltTensor(q.field, q.d, q.dim, t, _trusted=True) for i, t in parts.items()}
    else:
        for idx, c in q.terms.items():
            J = frozenset(j for j, i in enumerate(idx) if i >= dimU[j])
            parts.setdefault(J, {})[idx] = c
        comps = {J: OrdTensor(q.field, q.dims, t, _trusted=True) for J, t in parts.items()}
    return BigradedElement(q.flavor, q.d, dimU, dimV, q.field, comps)


def assemble(b: BigradedElement):
    out = zero_tensor(b.flavor, b.field, b.d, b.ambient_dims)
    for key, comp in b.components.items():
        check = bigraded_split(comp, b.dimU)
        if any(k != key for k in check.components):
            raise DimensionMismatchError(f"component {key} has terms outside its block")
        out = out + comp
    return out


def inclusion_maps(field, dims_small, dims_big, offsets=None) -> tuple:
    """Per-slot inclusions K^n -> K^N sending basis vector i to i + offset."""
    offsets = offsets or (0,) * len(dims_small)
    return tuple(
        LinearMap.inclusion(field, N, [o + i for i in range(n)])
        for n, N, o in zip(dims_small, dims_big, offsets)
    )
