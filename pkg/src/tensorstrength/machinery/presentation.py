"""Closed-set presentations: generators on the base space plus a point sampler.

Base coordinates are c_1..c_N, one per canonical basis element of
S^dU / wedge^dU / U_1 (x) ... (x) U_d, in the order of ``multilinear.basis``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Callable

from ..errors import UnsupportedCharacteristic
from ..exactalg import GF, Field, Polynomial, QQ, is_prime
from ..exactalg.linalg import symbolic_det
from ..multilinear import (
    LinearMap,
    basis,
    coordinates,
    induced_map,
    random_tensor,
)
from ..multilinear.kernels import sort_sign


def base_dims_tuple(flavor: str, d: int, dims) -> tuple:
    if isinstance(dims, int):
        return (dims,) * d if flavor == "ord" else (dims,)
    return tuple(dims)


def coordinate_names(flavor: str, d: int, dims) -> list:
    return [f"c_{k + 1}" for k in range(len(basis(flavor, d, dims)))]


def coordinate_header(flavor: str, d: int, dims) -> list:
    """Human-readable table c_k -> basis element (1-based indices)."""
    rows = []
    for k, key in enumerate(basis(flavor, d, dims)):
        if flavor == "sym":
            desc = "*".join(f"u{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(key) if e)
        elif flavor == "alt":
            desc = "^".join(f"u{i + 1}" for i in key)
        else:
            desc = "(x)".join(f"u{i + 1}" for i in key)
        rows.append((f"c_{k + 1}", list(key) if flavor == "sym" else [i + 1 for i in key], desc))
    return rows


@dataclass
class ClosedSetPresentation:
    flavor: str
    d: int
    base_dims: tuple
    generators: list
    field: Field = QQ
    sampler: Callable | None = None     # sampler(rng, dimV) -> tensor over U (+) V
    integral: bool = False
    family: str = "custom"
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.base_dims = base_dims_tuple(self.flavor, self.d, self.base_dims)
        N = len(basis(self.flavor, self.d, self.base_dims))
        for g in self.generators:
            if g.nvars != N:
                raise ValueError(f"generator has {g.nvars} variables, base space has {N} coordinates")
            if not g.is_homogeneous():
                raise ValueError("generators must be homogeneous")

    @property
    def ncoords(self) -> int:
        return len(basis(self.flavor, self.d, self.base_dims))

    def nonzero_generators(self) -> list:
        return [g for g in self.generators if g]

    def base_point(self, q) -> list:
        """Coordinates of a tensor over U (same dims as the base space)."""
        return coordinates(q)

    def contains_base(self, q) -> bool:
        pt = self.base_point(q)
        return all(not g.eval(pt) for g in self.generators)

    def sample(self, rng, dimV):
        if self.sampler is None:
            raise ValueError("presentation has no sampler")
        return self.sampler(rng, dimV)

    def spot_check(self, samples: int = 20, seed: int = 0) -> bool:
        """Generators vanish on projections of sampled points of X(U (+) V)."""
        if self.sampler is None:
            return True
        rng = random.Random(seed)
        for k in range(samples):
            dimV = k % 3
            q = self.sample(rng, dimV)
            proj = random_projection(rng, self.field, self.flavor, q.dims, self.base_dims)
            if not self.contains_base(induced_map(proj, q)):
                return False
        return True


def random_projection(rng, field, flavor, dims_from, dims_to):
    maps = tuple(LinearMap.random(rng, field, m, n) for n, m in zip(dims_from, dims_to))
    return maps if flavor == "ord" else maps[0]


def delta_degree(P: ClosedSetPresentation) -> tuple:
    """(minimal degree of a nonzero generator, d times that)."""
    gens = P.nonzero_generators()
    if not gens:
        raise ValueError("all generators are zero")
    m = min(g.degree() for g in gens)
    return m, P.d * m


# -- determinantal (rank) loci ----------------------------------------------

def flattening_matrices(flavor: str, d: int, dims, field: Field = QQ) -> list:
    """Matrices of linear forms in c_1..c_N whose rank bounds the number of essential variables."""
    dims = base_dims_tuple(flavor, d, dims)
    keys = basis(flavor, d, dims)
    N = len(keys)
    index = {k: i for i, k in enumerate(keys)}

    def var(k, c=1):
        return Polynomial(field, N, {((index[k], 1),): c})

    zero = Polynomial.zero(field, N)
    if flavor == "sym":
        n = dims[0]
        cols = basis("sym", d - 1, n)
        M = []
        for i in range(n):
            row = []
            for m in cols:
                g = list(m)
                g[i] += 1
                row.append(var(tuple(g), Fraction(m[i] + 1, d)))
            M.append(row)
        return [M]
    if flavor == "alt":
        n = dims[0]
        cols = list(combinations(range(n), d - 1))
        M = []
        for i in range(n):
            row = []
            for B in cols:
                sign, key = sort_sign((i,) + B)
                row.append(zero if sign == 0 else var(key, sign))
            M.append(row)
        return [M]
    out = []
    for j in range(d):
        other = [s for s in range(d) if s != j]
        cols = basis("ord", d - 1, tuple(dims[s] for s in other)) if d > 1 else [()]
        M = []
        for a in range(dims[j]):
            row = []
            for rest in cols:
                idx = list(rest)
                idx.insert(j, a)
                row.append(var(tuple(idx)))
            M.append(row)
        out.append(M)
    return out


def minors(M, size: int) -> list:
    rows, cols = len(M), len(M[0]) if M else 0
    out = []
    for R in combinations(range(rows), size):
        for C in combinations(range(cols), size):
            det = symbolic_det([[M[r][c] for c in C] for r in R])
            if det:
                out.append(det)
    return out


def rank_locus_generators(flavor: str, d: int, dims, rank: int, field: Field = QQ) -> list:
    gens = []
    seen = set()
    for M in flattening_matrices(flavor, d, dims, field):
        for g in minors(M, rank + 1):
            key = frozenset(g.terms.items())
            neg = frozenset((-g).terms.items())
            if key not in seen and neg not in seen:
                seen.add(key)
                gens.append(g)
    return gens


def rank_sampler(flavor: str, d: int, base_dims, rank: int, field: Field = QQ, bound: int = 3):
    """Push a random element of the rank-sized space through random linear maps."""
    base_dims = base_dims_tuple(flavor, d, base_dims)

    def sample(rng, dimV):
        dv = base_dims_tuple(flavor, d, dimV) if flavor == "ord" else (dimV if isinstance(dimV, int) else dimV[0],)
        amb = tuple(u + v for u, v in zip(base_dims, dv))
        g = random_tensor(rng, flavor, field, d, (rank,) * d if flavor == "ord" else rank, bound)
        maps = tuple(LinearMap.random(rng, field, n, rank, bound) for n in amb)
        return induced_map(maps if flavor == "ord" else maps[0], g)

    return sample


def rank_locus(flavor: str, d: int, dims, rank: int, field: Field = QQ) -> ClosedSetPresentation:
    """Tensors involving at most ``rank`` essential variables (per slot for ord)."""
    dims = base_dims_tuple(flavor, d, dims)
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    if flavor == "alt" and rank < d:
        raise ValueError("alternating rank loci need rank >= d")
    p = field.characteristic
    if flavor == "sym" and p and p <= d:
        raise UnsupportedCharacteristic(f"symmetric flattenings divide by {d}; characteristic {p} is too small")
    gens = rank_locus_generators(flavor, d, dims, rank, field)
    return ClosedSetPresentation(
        flavor, d, dims, gens, field, rank_sampler(flavor, d, dims, rank, field),
        integral=field == QQ, family="rank_locus", params={"rank": rank},
    )


# -- reduction mod p -----------------------------------------------------------

@dataclass
class SpecializationReport:
    p: int
    presentation: ClosedSetPresentation | None
    statuses: list          # one of "kept", "vanishes mod p", "repaired (k roots)"
    all_vanish: bool


def integral_form(g: Polynomial) -> Polynomial:
    """g times the lcm of its denominators."""
    den = 1
    for c in g.terms.values():
        den = lcm(den, Fraction(c).denominator)
    return g.scale(den)


def specialize_mod_p(P: ClosedSetPresentation, p: int) -> SpecializationReport:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not P.integral:
        raise ValueError("presentation is not marked integral")
    F = GF(p)
    kept, statuses = [], []
    for g in P.generators:
        gp = integral_form(g).change_field(F)
        if not gp:
            statuses.append("vanishes mod p")
            continue
        roots = 0
        while not gp.is_constant() and all(not gp.derivative(v) for v in range(gp.nvars)):
            root = gp.frobenius_root()
            if root is None:
                break
            gp, roots = root, roots + 1
        statuses.append("kept" if roots == 0 else f"repaired ({roots} root{'s' if roots > 1 else ''})")
        kept.append(gp)
    if not kept:
        return SpecializationReport(p, None, statuses, True)
    sampler = None
    if P.family == "rank_locus":
        sampler = rank_sampler(P.flavor, P.d, P.base_dims, P.params["rank"], F)
    out = ClosedSetPresentation(P.flavor, P.d, P.base_dims, kept, F, sampler, False, P.family, dict(P.params))
    return SpecializationReport(p, out, statuses, False)
