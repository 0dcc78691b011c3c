"""Constructive upper bounds: trivial decompositions, chopping over U (+) V and the Leibniz reduction."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from ..errors import UnsupportedCharacteristic
from ..exactalg import Polynomial
from ..exactalg.linalg import nullspace
from ..exactalg.polynomial import mono_from_exponents
from ..multilinear import (
    AltTensor,
    BigradedElement,
    LinearMap,
    OrdTensor,
    SymTensor,
    contract,
    induced_map,
)
from .certificate import CertTerm, StrengthCertificate, require_verified


def _sym_group(q: SymTensor, keyfn) -> list:
    """Group monomials of q by a chosen variable and factor that variable out."""
    n = q.dim
    groups: dict = {}
    for exps, c in q.terms.items():
        v = keyfn(exps)
        rest = list(exps)
        rest[v] -= 1
        groups.setdefault(v, {})[tuple(rest)] = c
    terms = []
    for v in sorted(groups):
        r = SymTensor(Polynomial.variable(q.field, n, v), 1)
        s = SymTensor.from_terms(q.field, q.d - 1, n, groups[v])
        terms.append(CertTerm(1, r, s))
    return terms


def _alt_group(q: AltTensor, keyfn) -> list:
    groups: dict = {}
    for idx, c in q.terms.items():
        groups.setdefault(keyfn(idx), {})[idx[1:]] = c
    terms = []
    for a in sorted(groups):
        r = AltTensor(q.field, 1, q.dim, {(a,): 1})
        s = AltTensor(q.field, q.d - 1, q.dim, groups[a])
        terms.append(CertTerm(1, r, s))
    return terms


def _ord_group(q: OrdTensor, keyfn) -> list:
    """keyfn(idx) -> slot j; terms are grouped by (j, idx[j])."""
    groups: dict = {}
    for idx, c in q.terms.items():
        j = keyfn(idx)
        rest = idx[:j] + idx[j + 1:]
        groups.setdefault((j, idx[j]), {})[rest] = c
    terms = []
    for j, a in sorted(groups):
        r = OrdTensor(q.field, (q.dims[j],), {(a,): 1})
        rest_dims = q.dims[:j] + q.dims[j + 1:]
        s = OrdTensor(q.field, rest_dims, groups[(j, a)])
        terms.append(CertTerm(frozenset([j]), r, s))
    return terms


def smallest_slot(dims: Sequence[int]) -> int:
    return min(range(len(dims)), key=lambda j: (dims[j], j))


def trivial_certificate(q) -> StrengthCertificate:
    """Decomposition with at most dim V (sym), dim V - d + 1 (alt) or min dim V_l (ord) terms."""
    if not q:
        return StrengthCertificate(q, [])
    if q.d < 2:
        raise ValueError("strength needs degree at least 2")
    if q.flavor == "sym":
        terms = _sym_group(q, lambda e: next(i for i, x in enumerate(e) if x))
    elif q.flavor == "alt":
        # peel e_a ^ (...) off by first index; first indices are < dim - d + 1
        terms = _alt_group(q, lambda idx: idx[0])
    else:
        m = smallest_slot(q.dims)
        terms = _ord_group(q, lambda idx: m)
    return require_verified(StrengthCertificate(q, terms))


def trivial_bound(flavor: str, d: int, dims) -> int:
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    if flavor == "sym":
        return dims[0]
    if flavor == "alt":
        return max(dims[0] - d + 1, 0)
    return min(dims)


def chop(b: BigradedElement) -> StrengthCertificate:
    """Certificate for everything below the top component, factoring out U-basis vectors."""
    lower = b.lower()
    if not lower:
        return StrengthCertificate(lower, [])
    if b.flavor == "sym":
        u = b.dimU[0]
        terms = _sym_group(lower, lambda e: next(i for i in range(u) if e[i]))
    elif b.flavor == "alt":
        # sorted tuples put a U-index first whenever one is present
        terms = _alt_group(lower, lambda idx: idx[0])
    else:
        def key(idx):
            return next(j for j, i in enumerate(idx) if i < b.dimU[j])
        terms = _ord_group(lower, key)
    return require_verified(StrengthCertificate(lower, terms))


@dataclass
class LeibnizResult:
    k: int
    ell: int
    W: list                    # basis of the span of the linear factors
    quotient: LinearMap        # V -> V/W with kernel W
    q_tilde: SymTensor
    reduced: StrengthCertificate   # certificate for q_tilde with k - ell terms
    derivatives: list = dc_field(default_factory=list)  # (x, certificate for <x, q_tilde>)

    @property
    def bound(self) -> int:
        return 2 * (self.k - self.ell)


def leibniz_reduce(cert: StrengthCertificate, xs: Sequence[Sequence] | None = None) -> LeibnizResult:
    """Kill the linear factors of a symmetric certificate, then differentiate term by term.

    With xs omitted every coordinate functional of V/W is used.
    """
    q = cert.target
    if q.flavor != "sym":
        raise TypeError("the Leibniz reduction applies to symmetric tensors")
    p = q.field.characteristic
    if p and p <= q.d:
        raise UnsupportedCharacteristic(f"characteristic {p} must exceed the degree {q.d}")
    F = q.field
    n = q.dim
    oriented = []
    for t in cert.terms:
        r, s = (t.r, t.s) if t.r.d <= t.s.d else (t.s, t.r)
        oriented.append((r, s))
    linear = [r for r, _ in oriented if r.d == 1]
    rows = [[r.poly.coefficient(((i, 1),)) for i in range(n)] for r in linear]
    if rows:
        ann = nullspace(F, rows, n)
    else:
        ann = [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    W = nullspace(F, ann, n) if ann else [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    phi = LinearMap(F, ann, len(ann), n)
    q_tilde = induced_map(phi, q)
    reduced_terms = []
    for r, s in oriented:
        if r.d == 1:
            continue
        rt, st = induced_map(phi, r), induced_map(phi, s)
        if rt and st:
            reduced_terms.append((rt, st))
    reduced = require_verified(
        StrengthCertificate(q_tilde, [CertTerm(rt.d, rt, st) for rt, st in reduced_terms])
    )
    m = phi.rows
    if xs is None:
        xs = [[F.one if i == j else F.zero for i in range(m)] for j in range(m)]
    derivs = []
    for x in xs:
        target = contract(x, q_tilde)
        terms = []
        for rt, st in reduced_terms:
            dr = contract(x, rt)
            if dr and st:
                terms.append(CertTerm(dr.d, dr, st))
            ds = contract(x, st)
            if ds and rt:
                terms.append(CertTerm(rt.d, rt, ds))
        derivs.append((list(x), require_verified(StrengthCertificate(target, terms))))
    return LeibnizResult(len(cert.terms), len(linear), W, phi, q_tilde, reduced, derivs)


def monomial_tensor(field, n: int, exps) -> SymTensor:
    return SymTensor(Polynomial(field, n, {mono_from_exponents(exps): 1}), sum(exps))
