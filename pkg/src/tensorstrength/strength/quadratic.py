"""Exact strength in degree 2 by elementary linear algebra.

sym: Lagrange reduction that extracts hyperbolic products l*m directly and
leaves a diagonal remainder of squares.  Two squares a*l1^2 + b*l2^2 factor
as a(l1 + t l2)(l1 - t l2) with t^2 = -b/a.  Over Q the number reported is the
strength over the algebraic closure, ceil(rank/2); when t is irrational the
factors are written over Q(sqrt(D)).  Over GF(p) the number is the true
GF(p)-strength, rank minus the Witt index.
alt: symplectic peeling.  ord: rank-one peeling of a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from ..errors import UnsupportedCharacteristic
from ..exactalg import Polynomial, QQ, quadratic_field, squarefree_part
from ..exactalg.linalg import inverse, rank
from ..multilinear import AltTensor, OrdTensor, SymTensor
from ..multilinear.kernels import wedge_terms
from .certificate import CertTerm, StrengthCertificate, require_verified


@dataclass
class DegreeTwoReport:
    flavor: str
    rank: int
    strength: int
    certificate: StrengthCertificate
    rational: bool = True   # every factor is defined over the input field


def gram_matrix(q: SymTensor) -> list:
    """Symmetric matrix G with q(x) = x^T G x (needs 2 invertible)."""
    F = q.field
    n = q.dim
    half = F.inv(F.convert(2))
    G = [[F.zero] * n for _ in range(n)]
    for exps, c in q.terms.items():
        idx = [i for i, e in enumerate(exps) for _ in range(e)]
        i, j = idx
        if i == j:
            G[i][i] = c
        else:
            G[i][j] = G[j][i] = F.mul(c, half)
    return G


def _hyperbolic_step(cur: Polynomial, k: int):
    """For a form with no x_k^2 term: cur = L * m + N with N free of x_k and of one more variable."""
    F = cur.field
    n = cur.nvars
    parts = cur.split_by([k])
    L = parts[((k, 1),)]
    R = parts.get((), Polynomial.zero(F, n))
    j = min(v for mono in L.terms for v, _ in mono)
    c = L.coefficient(((j, 1),))
    # write R in the coordinate y = L (replacing x_j), then read off y^2 and y terms
    rest = L - Polynomial.variable(F, n, j).scale(c)
    images = [Polynomial.variable(F, n, i) for i in range(n)]
    images[j] = (Polynomial.variable(F, n, j) - rest).scale(F.inv(c))
    py = R.compose(images).split_by([j])
    alpha = py.get(((j, 2),), Polynomial.zero(F, n)).constant_term()
    M = py.get(((j, 1),), Polynomial.zero(F, n))
    N = py.get((), Polynomial.zero(F, n))
    return L, Polynomial.variable(F, n, k) + L.scale(alpha) + M, N


def _lagrange(q: Polynomial):
    """Split a quadratic form into hyperbolic products and weighted squares.

    Returns (products, squares): products are pairs (l, m) of linear forms,
    squares are pairs (a, l).  The l's of the squares together with the
    product factors are linearly independent, so the rank is
    2 * len(products) + len(squares).
    """
    F = q.field
    n = q.nvars
    two = F.convert(2)
    products, squares = [], []
    cur = q
    while cur:
        diag = None
        for mono in sorted(cur.terms):
            if len(mono) == 1 and mono[0][1] == 2:
                diag = mono[0][0]
                break
        if diag is not None:
            k = diag
            a = cur.terms[((k, 2),)]
            parts = cur.split_by([k])
            L = parts.get(((k, 1),), Polynomial.zero(F, n))
            R = parts.get((), Polynomial.zero(F, n))
            ell = Polynomial.variable(F, n, k) + L.scale(F.inv(F.mul(two, a)))
            squares.append((a, ell))
            cur = R - (L * L).scale(F.inv(F.mul(F.convert(4), a)))
            continue
        mono = min(cur.terms)
        L, m, cur = _hyperbolic_step(cur, mono[0][0])
        products.append((L, m))
    return products, squares


def _isotropic_vector(F, a, b, c):
    """Nonzero (x, y, z) over GF(p) with a x^2 + b y^2 + c z^2 = 0."""
    p = F.characteristic
    for y in range(p):
        for z in range(p):
            rhs = F.neg(F.mul(F.add(F.mul(b, y * y), F.mul(c, z * z)), F.inv(a)))
            if F.is_square(rhs):
                x = F.sqrt(rhs)
                if x or y or z:
                    return (x, y, z)
    raise AssertionError("ternary forms over finite fields are isotropic")


def _split_three_squares(F, sq):
    """a l1^2 + b l2^2 + c l3^2 over GF(p) -> one product plus one square."""
    (a, l1), (b, l2), (c, l3) = sq
    v = _isotropic_vector(F, a, b, c)
    # columns: v then two standard vectors completing it to a basis
    pivot = next(i for i in range(3) if v[i])
    others = [i for i in range(3) if i != pivot]
    M = [[F.zero] * 3 for _ in range(3)]
    for i in range(3):
        M[i][0] = v[i]
    M[others[0]][1] = F.one
    M[others[1]][2] = F.one
    g = Polynomial(F, 3, {((0, 2),): a, ((1, 2),): b, ((2, 2),): c})
    g2 = g.linear_substitute(M)
    # g2 has no s0^2 term, so one hyperbolic step leaves a single square
    L, m, N = _hyperbolic_step(g2, 0)
    prods, squares = _lagrange(N)
    prods = [(L, m)] + prods
    Minv = inverse(F, M)
    ls = [l1, l2, l3]
    images = [sum((ls[j].scale(Minv[i][j]) for j in range(3)), Polynomial.zero(F, l1.nvars))
              for i in range(3)]
    prods = [(l.compose(images), m.compose(images)) for l, m in prods]
    squares = [(w, l.compose(images)) for w, l in squares]
    return prods, squares


def _pair_squares(F, a, l1, b, l2):
    """Factor a l1^2 + b l2^2 as one product, or return None over GF(p) when it is anisotropic."""
    ratio = F.neg(F.div(b, a))
    if F.characteristic:
        if not F.is_square(ratio):
            return None
        t = F.sqrt(ratio)
        return (l1 + l2.scale(t)).scale(a), l1 - l2.scale(t)
    t = QQ.sqrt(ratio)
    if t is not None:
        return (l1 + l2.scale(t)).scale(a), l1 - l2.scale(t)
    num, den = ratio.numerator, ratio.denominator
    D = squarefree_part(num * den)
    # ratio = num*den/den^2 = D k^2/den^2, so t = k sqrt(D)/den
    k2 = Fraction(num * den, D)
    k = isqrt(int(k2))
    E = quadratic_field(D)
    t = E.convert((0, Fraction(k, den)))
    L1, L2 = l1.change_field(E), l2.change_field(E)
    return (L1 + L2.scale(t)).scale(E.convert(a)), L1 - L2.scale(t)


def _sym_degree_two(q: SymTensor) -> DegreeTwoReport:
    F = q.field
    if F.characteristic == 2:
        raise UnsupportedCharacteristic("symmetric degree-2 strength needs characteristic other than 2")
    G = gram_matrix(q)
    r = rank(F, G) if q.dim else 0
    prods, squares = _lagrange(q.poly)
    factors = list(prods)
    squares = list(squares)
    while len(squares) >= 2:
        (a, l1), (b, l2) = squares[0], squares[1]
        pair = _pair_squares(F, a, l1, b, l2)
        if pair is not None:
            factors.append(pair)
            squares = squares[2:]
            continue
        if len(squares) >= 3:
            extra_p, extra_s = _split_three_squares(F, squares[:3])
            factors.extend(extra_p)
            squares = extra_s + squares[3:]
            continue
        break
    for a, ell in squares:
        factors.append((ell.scale(a), ell))
    terms = [CertTerm(1, SymTensor(l, 1), SymTensor(m, 1)) for l, m in factors]
    cert = require_verified(StrengthCertificate(q, terms))
    return DegreeTwoReport("sym", r, len(terms), cert, cert.is_rational())


def _alt_degree_two(q: AltTensor) -> DegreeTwoReport:
    F = q.field
    n = q.dim
    terms = []
    cur = dict(q.terms)
    while cur:
        (i, j) = min(cur)
        c = cur[(i, j)]
        A = {}
        for (a, b), v in cur.items():
            A[(a, b)] = v
            A[(b, a)] = F.neg(v)
        alpha = {k: A[(i, k)] for k in range(n) if (i, k) in A}
        beta = {k: A[(j, k)] for k in range(n) if (j, k) in A}
        cinv = F.inv(c)
        r = AltTensor(F, 1, n, {(k,): v for k, v in alpha.items()})
        s = AltTensor(F, 1, n, {(k,): F.mul(v, cinv) for k, v in beta.items()})
        terms.append(CertTerm(1, r, s))
        prod = wedge_terms(r.terms, s.terms)
        for key, v in prod.items():
            nv = F.sub(cur.get(key, F.zero), v)
            if F.is_zero(nv):
                cur.pop(key, None)
            else:
                cur[key] = nv
    cert = require_verified(StrengthCertificate(q, terms))
    return DegreeTwoReport("alt", 2 * len(terms), len(terms), cert)


def _ord_degree_two(q: OrdTensor) -> DegreeTwoReport:
    F = q.field
    n1, n2 = q.dims
    cur = dict(q.terms)
    terms = []
    while cur:
        (a, b) = min(cur)
        c = cur[(a, b)]
        col = {i: v for (i, j), v in cur.items() if j == b}
        row = {j: v for (i, j), v in cur.items() if i == a}
        cinv = F.inv(c)
        r = OrdTensor(F, (n1,), {(i,): v for i, v in col.items()})
        s = OrdTensor(F, (n2,), {(j,): F.mul(v, cinv) for j, v in row.items()})
        terms.append(CertTerm(frozenset([0]), r, s))
        for i, vi in col.items():
            for j, vj in row.items():
                key = (i, j)
                nv = F.sub(cur.get(key, F.zero), F.mul(F.mul(vi, vj), cinv))
                if F.is_zero(nv):
                    cur.pop(key, None)
                else:
                    cur[key] = nv
    cert = require_verified(StrengthCertificate(q, terms))
    return DegreeTwoReport("ord", len(terms), len(terms), cert)


def degree_two_strength(q) -> DegreeTwoReport:
    if q.d != 2:
        raise ValueError(f"expected a degree-2 tensor, got degree {q.d}")
    if q.flavor == "sym":
        return _sym_degree_two(q)
    if q.flavor == "alt":
        return _alt_degree_two(q)
    return _ord_degree_two(q)
