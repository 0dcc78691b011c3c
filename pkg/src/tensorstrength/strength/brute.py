"""Exhaustive strength over a small prime field.

For k = 0, 1, 2, ... every k-set of first factors r is tried; the second
factors s then enter linearly, so each candidate costs one linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb, prod

from ..errors import BudgetExceeded
from ..exactalg.linalg import solve
from ..multilinear import basis, from_coordinates, make_tensor, products
from .certificate import CertTerm, StrengthCertificate, require_verified
from .constructions import trivial_certificate

DEFAULT_BUDGET = 10 ** 6


@dataclass
class BruteForceResult:
    strength: int | None          # None when the strength exceeds k_max
    certificate: StrengthCertificate | None
    exceeded: bool = False
    examined: int = 0             # number of r-tuples solved


def _splits(q) -> list:
    d = q.d
    if q.flavor in ("sym", "alt"):
        return list(range(1, d // 2 + 1))
    out = []
    for size in range(1, d):
        for J in combinations(range(d), size):
            rest = tuple(j for j in range(d) if j not in J)
            pj = prod(q.dims[j] for j in J)
            pr = prod(q.dims[j] for j in rest)
            if pj < pr or (pj == pr and 0 in J):
                out.append(J)
    return out


def _factor_dims(q, split, complement=False):
    if q.flavor == "ord":
        J = [j for j in range(q.d) if (j in split) != complement]
        return len(J), tuple(q.dims[j] for j in J)
    e = q.d - split if complement else split
    return e, (q.dim,)


def _projective_points(p: int, n: int):
    """Nonzero vectors with first nonzero entry 1, in lexicographic order."""
    for lead in range(n):
        for tail in product(range(p), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def _product_columns(q, split, r, row_of) -> list:
    """Coordinates of r * b for each basis element b of the complementary space."""
    e, sdims = _factor_dims(q, split, complement=True)
    cols = []
    F = q.field
    slots = tuple(split) if q.flavor == "ord" else None
    for key in basis(q.flavor, e, sdims):
        b = make_tensor(q.flavor, F, e, sdims, {key: 1})
        pr = products(r, b, q.flavor, slots)
        col = {}
        for k, c in pr.terms.items():
            col[row_of[k]] = c
        cols.append(col)
    return cols


def brute_force_strength(q, k_max: int | None = None, budget: int = DEFAULT_BUDGET) -> BruteForceResult:
    """Minimal number of terms over GF(p), with a certificate.

    Search order: increasing k, then candidate tuples in lexicographic order of
    (split, coefficient vector of r); the first solution found is returned.
    """
    F = q.field
    p = F.characteristic
    if not p:
        raise ValueError("brute force needs a finite field")
    if not q:
        return BruteForceResult(0, StrengthCertificate(q, []))
    trivial = trivial_certificate(q)
    limit = len(trivial) - 1 if k_max is None else min(k_max, len(trivial) - 1)

    candidates = []
    for split in _splits(q):
        e, rdims = _factor_dims(q, split)
        dim_r = len(basis(q.flavor, e, rdims))
        for vec in _projective_points(p, dim_r):
            candidates.append((split, vec))
    M = len(candidates)
    qkeys = basis(q.flavor, q.d, q.dims)
    row_of = {k: i for i, k in enumerate(qkeys)}
    target = [q.terms.get(k, F.zero) for k in qkeys]
    cache: dict = {}

    def columns(ci):
        if ci not in cache:
            split, vec = candidates[ci]
            e, rdims = _factor_dims(q, split)
            r = from_coordinates(q.flavor, F, e, rdims, vec)
            cache[ci] = (r, _product_columns(q, split, r, row_of))
        return cache[ci]

    examined = 0
    for k in range(1, limit + 1):
        count = comb(M, k)
        if examined + count > budget:
            raise BudgetExceeded(
                f"k={k} needs {count} candidate tuples; budget is {budget} ({examined} used)"
            )
        for tup in combinations(range(M), k):
            examined += 1
            cols = []
            for ci in tup:
                cols.extend(columns(ci)[1])
            A = [[col.get(i, F.zero) for col in cols] for i in range(len(qkeys))]
            x = solve(F, A, target)
            if x is None:
                continue
            terms = []
            pos = 0
            for ci in tup:
                split, _ = candidates[ci]
                r, cs = columns(ci)
                e, sdims = _factor_dims(q, split, complement=True)
                s = from_coordinates(q.flavor, F, e, sdims, x[pos:pos + len(cs)])
                pos += len(cs)
                if s:
                    key = frozenset(split) if q.flavor == "ord" else split
                    terms.append(CertTerm(key, r, s))
            cert = require_verified(StrengthCertificate(q, terms))
            return BruteForceResult(len(terms), cert, False, examined)
    if k_max is not None and k_max < len(trivial):
        return BruteForceResult(None, None, True, examined)
    return BruteForceResult(len(trivial), trivial, False, examined)
