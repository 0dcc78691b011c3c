"""Psi in covariant coordinates, the certificate it yields, and the bound calculators.

The covariant expansion replaces each shifted lower component by fresh
variables W, one per U-basis element and t-pattern:

  sym: q0 + sum_i t^i sum_j W_{i,j} X^{alpha_j} (u.X)^i + t^d W_top (u.X)^d
  alt: q0 + sum W_{i,A,S} t^S e_A ^ u_S + t_1...t_d W_top u_1^...^u_d
  ord: q0 + sum W_{J,a} t^J (e_a placed off J, u_j on J) + t_1...t_d W_top u_1 (x) ... (x) u_d

so the t-coefficient of f is h(c) W_top + Psi_W(c, W), independent of dim V.
Evaluated at a sample, W_{i,j} becomes <x, w_{i,j}> for a covariant tensor
w_{i,j} built from q_i, which turns Psi_W into a decomposition of the top.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from math import comb, factorial, prod

from ..errors import YBranch
from ..exactalg import Polynomial
from ..exactalg.polynomial import exponent_vectors, mono_from_exponents
from ..multilinear import AltTensor, OrdTensor, SymTensor, basis, bigraded_split
from ..multilinear.kernels import sort_sign, wedge_terms, wedge_vectors
from ..strength import CertTerm, StrengthCertificate, chop, require_verified, smallest_slot
from .derivative import DEFAULT_BOX, DirectionalDerivative, find_direction
from .expansion import _check_char, base_coordinates, h_at, t_monomial, t_truncation
from .presentation import ClosedSetPresentation, base_dims_tuple


@dataclass
class BoundReport:
    flavor: str
    d: int
    base_dims: tuple
    N: int
    chop_part: int
    covariant_part: int


def bound_N(flavor: str, d: int, dims) -> BoundReport:
    dims = base_dims_tuple(flavor, d, dims)
    if d < 2:
        raise ValueError("d must be at least 2")
    if flavor == "sym":
        n = dims[0]
        cov = sum(comb(n + d - i - 1, d - i) for i in range(1, d // 2 + 1))
        return BoundReport(flavor, d, dims, n + cov, n, cov)
    if flavor == "alt":
        n = dims[0]
        cov = sum(comb(n, d - i) for i in range(1, d // 2 + 1))
        return BoundReport(flavor, d, dims, n + cov, n, cov)
    m = smallest_slot(dims)
    others = prod(dims[j] + 1 for j in range(d) if j != m)
    cov = dims[m] * others - prod(dims)
    return BoundReport(flavor, d, dims, sum(dims) + cov, sum(dims), cov)


@dataclass
class CovariantExpansion:
    flavor: str
    d: int
    base_dims: tuple
    derivative: DirectionalDerivative
    nvars: int
    cvars: list                 # base coordinate k -> ring variable
    wvars: dict                 # covariant key -> ring variable
    weights: dict               # ring variable -> weight (t-degree)
    wtop: int
    tvars: list
    psi: Polynomial
    h_ring: Polynomial

    @property
    def field(self):
        return self.psi.field

    def key_of(self) -> dict:
        return {v: k for k, v in self.wvars.items()}

    def weighted_degrees(self) -> set:
        out = set()
        for mono in self.psi.terms:
            out.add(sum(self.weights.get(v, 0) * e for v, e in mono))
        return out

    def monomials(self):
        """(p_alpha coefficient as polynomial in c, {W key: exponent})."""
        keys = self.key_of()
        groups: dict = {}
        F = self.field
        for mono, c in self.psi.terms.items():
            wpart = tuple((v, e) for v, e in mono if v in keys)
            cpart = tuple((v, e) for v, e in mono if v not in keys)
            groups.setdefault(wpart, {})[cpart] = c
        for wpart, cterms in groups.items():
            yield Polynomial(F, self.nvars, cterms), {keys[v]: e for v, e in wpart}


def _covariant_pieces(flavor, d, dims, u, F):
    """(key, weight, t-set, coordinates dict) for every W variable."""
    out = []
    base = basis(flavor, d, dims)
    index = {k: i for i, k in enumerate(base)}
    if flavor == "sym":
        n = dims[0]
        lin = Polynomial.linear_form(F, list(u[0]))
        for i in range(1, d):
            ui = lin ** i
            for alpha in exponent_vectors(n, d - i):
                p = Polynomial(F, n, {mono_from_exponents(alpha): 1}) * ui
                coords = {index[tuple(ex)]: c for ex, c in SymTensor(p, d).terms.items()}
                out.append(((i, alpha), i, (0,) * i, coords))
        return out
    if flavor == "alt":
        n = dims[0]
        uvecs = [{a: F.convert(c) for a, c in enumerate(v) if c} for v in u]
        for i in range(1, d):
            for A in combinations(range(n), d - i):
                for S in combinations(range(d), i):
                    vecs = [{a: F.one} for a in A] + [uvecs[s] for s in S]
                    coords = {index[k]: F.normalize(c) for k, c in wedge_vectors(F.one, vecs).items()}
                    coords = {k: c for k, c in coords.items() if not F.is_zero(c)}
                    out.append(((i, A, S), i, S, coords))
        return out
    for size in range(1, d):
        for J in combinations(range(d), size):
            off = [j for j in range(d) if j not in J]
            for a in product(*(range(dims[j]) for j in off)):
                terms = {(): F.one}
                amap = dict(zip(off, a))
                for j in range(d):
                    vec = {amap[j]: F.one} if j in amap else {b: F.convert(c) for b, c in enumerate(u[j]) if c}
                    terms = {k + (b,): F.mul(c, w) for k, c in terms.items() for b, w in vec.items()}
                coords = {index[k]: c for k, c in terms.items()}
                out.append(((J, a), size, J, coords))
    return out


def covariant_expand(dd: DirectionalDerivative) -> CovariantExpansion:
    flavor, d = dd.flavor, dd.d
    F = dd.f.field
    _check_char(flavor, d, F)
    dims = dd.base_dims
    N = len(basis(flavor, d, dims))
    pieces = _covariant_pieces(flavor, d, dims, dd.u, F)
    nt = 1 if flavor == "sym" else d
    nv = N + len(pieces) + nt + 1
    cvars = list(range(N))
    wvars = {key: N + i for i, (key, _, _, _) in enumerate(pieces)}
    tvars = list(range(N + len(pieces), N + len(pieces) + nt))
    wtop = nv - 1
    weights = {wvars[key]: w for key, w, _, _ in pieces}
    weights[wtop] = d

    def V(i):
        return Polynomial.variable(F, nv, i)

    coords = [V(v) for v in cvars]
    for key, w, S, cmap in pieces:
        if flavor == "sym":
            tpart = V(tvars[0]) ** w
        else:
            tpart = Polynomial.constant(F, nv, 1)
            for s in S:
                tpart = tpart * V(tvars[s])
        factor = tpart * V(wvars[key])
        for k, c in cmap.items():
            coords[k] = coords[k] + factor.scale(c)
    if flavor == "sym":
        ttop = V(tvars[0]) ** d
    else:
        ttop = Polynomial.constant(F, nv, 1)
        for v in tvars:
            ttop = ttop * V(v)
    for k, c in enumerate(dd.direction):
        if not F.is_zero(c):
            coords[k] = coords[k] + (ttop * V(wtop)).scale(c)
    total = dd.f.compose(coords, truncate=t_truncation(flavor, d, tvars))
    coeff = total.split_by(tvars).get(t_monomial(flavor, d, tvars), Polynomial.zero(F, nv))
    top_part = {m: c for m, c in coeff.terms.items() if any(v == wtop for v, _ in m)}
    psi = {m: c for m, c in coeff.terms.items() if m not in top_part}
    h_ring = dd.h.embed(nv)
    if Polynomial(F, nv, top_part) != h_ring * V(wtop):
        raise AssertionError("top part of the covariant expansion is not h(c) W_top")
    return CovariantExpansion(flavor, d, dims, dd, nv, cvars, wvars, weights, wtop, tvars,
                              Polynomial(F, nv, psi, _trusted=True), h_ring)


# -- covariant tensors of a sample ---------------------------------------------

def covariant_tensors(b) -> dict:
    """w tensors over V keyed like the W variables (sym: (i, alpha); alt: (i, A); ord: (J, a))."""
    F = b.field
    out: dict = {}
    if b.flavor == "sym":
        n, m = b.dimU[0], b.dimV[0]
        for i in range(1, b.d):
            for exps, c in b.component(i).terms.items():
                out.setdefault((i, exps[:n]), {})[exps[n:]] = c
        return {k: SymTensor.from_terms(F, k[0], m, t) for k, t in out.items()}
    if b.flavor == "alt":
        n, m = b.dimU[0], b.dimV[0]
        for i in range(1, b.d):
            for idx, c in b.component(i).terms.items():
                A, B = idx[: b.d - i], tuple(x - n for x in idx[b.d - i:])
                out.setdefault((i, A), {})[B] = c
        return {k: AltTensor(F, k[0], m, t) for k, t in out.items()}
    for J, comp in b.components.items():
        if not J or len(J) == b.d:
            continue
        Js = tuple(sorted(J))
        off = [j for j in range(b.d) if j not in J]
        for idx, c in comp.terms.items():
            a = tuple(idx[j] for j in off)
            bb = tuple(idx[j] - b.dimU[j] for j in Js)
            out.setdefault((Js, a), {})[bb] = c
    return {k: OrdTensor(F, tuple(b.dimV[j] for j in k[0]), t) for k, t in out.items()}


def _factor_key(flavor, key):
    """Map a W key to the key of its covariant tensor."""
    if flavor == "alt":
        return (key[0], key[1])
    return key


def _choose(flavor, d, factors, m_slot):
    """Deterministic grouping factor for one monomial of Psi_W."""
    if flavor == "ord":
        ok = [k for k in factors if m_slot not in k[0]]
    else:
        ok = [k for k in factors if k[0] <= d // 2]
    if not ok:
        raise AssertionError("monomial without a groupable factor")
    return min(ok)


def _embed_sym(t: SymTensor, n: int) -> SymTensor:
    return SymTensor(t.poly.embed(n + t.dim, offset=n), t.d)


def _embed_alt(t: AltTensor, n: int) -> AltTensor:
    return AltTensor(t.field, t.d, n + t.dim, {tuple(i + n for i in k): c for k, c in t.terms.items()},
                     _trusted=True)


def _embed_ord(t: OrdTensor, offs, amb) -> OrdTensor:
    return OrdTensor(t.field, amb, {tuple(i + o for i, o in zip(k, offs)): c for k, c in t.terms.items()},
                     _trusted=True)


def _place(F, slots, pieces, dims_of):
    """Tensor over the sorted slot list ``slots`` from factors placed at their own slots."""
    pos = {s: i for i, s in enumerate(slots)}
    placed = []
    for J, t in pieces:
        placed.append(([pos[j] for j in J], t))
    acc = {tuple([None] * len(slots)): F.one}
    for where, t in placed:
        nxt = {}
        for idx, c in acc.items():
            for k, v in t.terms.items():
                new = list(idx)
                for p, i in zip(where, k):
                    new[p] = i
                nxt[tuple(new)] = F.add(nxt.get(tuple(new), F.zero), F.mul(c, v))
        acc = nxt
    return OrdTensor(F, tuple(dims_of[s] for s in slots), acc)


def covariant_decompose(cov: CovariantExpansion, b) -> StrengthCertificate:
    """Certificate for the top component of ``b`` grouped by a low-weight covariant factor."""
    F = cov.field
    flavor, d = cov.flavor, cov.d
    hval = h_at(cov.derivative, b)
    if F.is_zero(hval):
        raise YBranch("h(q0) = 0: the sample lies outside the locus handled by this layer")
    top = b.top
    if not top:
        return StrengthCertificate(top, [])
    w = covariant_tensors(b)
    q0 = [F.zero] * cov.nvars
    for v, c in zip(cov.cvars, base_coordinates(b)):
        q0[v] = c
    m_slot = smallest_slot(b.dimU) if flavor == "ord" else None
    dims_V = b.dimV
    groups: dict = {}
    scale = F.neg(F.inv(hval))
    if flavor == "alt":
        scale = F.mul(scale, F.inv(F.convert(factorial(d))))
    for pcoef, wmono in cov.monomials():
        val = pcoef.eval(q0)
        if F.is_zero(val):
            continue
        factors = []
        for key, e in sorted(wmono.items()):
            factors.extend([key] * e)
        if any(_factor_key(flavor, k) not in w for k in factors):
            continue   # some covariant tensor is zero
        chosen = _choose(flavor, d, factors, m_slot)
        rest = list(factors)
        rest.remove(chosen)
        gkey = _factor_key(flavor, chosen)
        if flavor == "sym":
            s = SymTensor(Polynomial.constant(F, dims_V[0], val), 0)
            for k in rest:
                s = SymTensor(s.poly * w[k].poly, s.d + k[0])
        elif flavor == "alt":
            order = [chosen] + rest
            sign, _ = sort_sign(tuple(x for k in order for x in k[2]))
            weight = prod(factorial(k[0]) for k in order)
            coef = F.mul(val, F.convert(sign * weight))
            sterms = {(): coef}
            for k in rest:
                sterms = wedge_terms(sterms, w[_factor_key(flavor, k)].terms)
            s = AltTensor(F, d - chosen[0], dims_V[0], sterms)
        else:
            comp = [j for j in range(d) if j not in chosen[0]]
            s = _place(F, comp, [(k[0], w[k]) for k in rest], dims_V).scale(val)
        groups[gkey] = groups[gkey] + s if gkey in groups else s
    terms = []
    n = b.dimU
    amb = b.ambient_dims
    for gkey in sorted(groups):
        s = groups[gkey].scale(scale)
        r = w[gkey]
        if not s or not r:
            continue
        if flavor == "sym":
            terms.append(CertTerm(r.d, _embed_sym(r, n[0]), _embed_sym(s, n[0])))
        elif flavor == "alt":
            terms.append(CertTerm(r.d, _embed_alt(r, n[0]), _embed_alt(s, n[0])))
        else:
            J = gkey[0]
            comp = [j for j in range(d) if j not in J]
            rr = _embed_ord(r, [n[j] for j in J], tuple(amb[j] for j in J))
            ss = _embed_ord(s, [n[j] for j in comp], tuple(amb[j] for j in comp))
            terms.append(CertTerm(frozenset(J), rr, ss))
    return require_verified(StrengthCertificate(top, terms))


# -- one inductive layer -----------------------------------------------------

@dataclass
class MembershipResult:
    certificate: StrengthCertificate
    chop_terms: int
    covariant_terms: int
    bound: int
    h_value: object
    derivative: DirectionalDerivative = dc_field(repr=False)


class Pipeline:
    """Caches the direction and covariant expansion of a presentation."""

    def __init__(self, P: ClosedSetPresentation, box: int = DEFAULT_BOX, generator: int | None = None):
        self.P = P
        gens = P.nonzero_generators()
        if not gens:
            raise ValueError("presentation has no nonzero generator")
        if generator is None:
            f = min(gens, key=lambda g: g.degree())
        else:
            f = P.generators[generator]
        self.derivative = find_direction(f, P.flavor, P.d, P.base_dims, box, P.field)
        self.covariant = covariant_expand(self.derivative)
        self.bound = bound_N(P.flavor, P.d, P.base_dims)

    def run(self, q) -> MembershipResult:
        P = self.P
        b = bigraded_split(q, P.base_dims if P.flavor == "ord" else P.base_dims[0])
        hval = h_at(self.derivative, b)
        if P.field.is_zero(hval):
            raise YBranch("h(q0) = 0: the sample lies outside the locus handled by this layer; "
                          "continue with a presentation of the derived set")
        low = chop(b)
        high = covariant_decompose(self.covariant, b)
        cert = require_verified(StrengthCertificate(q, low.terms + high.terms))
        if len(cert) > self.bound.N:
            raise AssertionError(f"certificate has {len(cert)} terms, bound is {self.bound.N}")
        return MembershipResult(cert, len(low), len(high), self.bound.N, hval, self.derivative)


def strength_from_membership(P: ClosedSetPresentation, q, box: int = DEFAULT_BOX,
                             pipeline: Pipeline | None = None) -> MembershipResult:
    pipeline = pipeline or Pipeline(P, box)
    return pipeline.run(q)
