"""The shifted expansion f(Phi_x(t) q) and recovery of the top component.

Phi_x(t) maps U (+) V onto U: identity on U, and a V-basis vector b goes to
t * x(b) * u (sym), sum_j t_j x_j(b) u_j (alt), or t_j x_j(b) u_j in slot j
(ord).  The t^d (resp. t_1...t_d) coefficient of f(Phi_x(t) q) splits as
h(q0) * <x, top> + Psi(x, lower components).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce

from ..errors import SingularSystem, UnsupportedCharacteristic, YBranch
from ..exactalg import Polynomial
from ..exactalg.linalg import rank, solve, symbolic_det
from ..multilinear import basis, bigraded_split, make_tensor
from ..multilinear.kernels import alt_image, ord_image, sym_image
from .derivative import DirectionalDerivative
from .presentation import base_dims_tuple


def ambient_keys(flavor, d, dimU, dimV):
    amb = tuple(u + v for u, v in zip(dimU, dimV))
    return amb, basis(flavor, d, amb)


def is_top_key(flavor, key, dimU) -> bool:
    if flavor == "sym":
        return not any(key[: dimU[0]])
    if flavor == "alt":
        return all(i >= dimU[0] for i in key)
    return all(i >= n for i, n in zip(key, dimU))


def base_key_of(flavor, key, dimU):
    """Ambient key of a q0 term -> key in the base space."""
    if flavor == "sym":
        return tuple(key[: dimU[0]])
    return tuple(key)


def shift_images(flavor, d, dimU, dimV, u, t, x, one, zero):
    """Images of ambient basis vectors under Phi_x(t); coefficients come from the caller's ring.

    ``t[j]`` and ``x[j][b]`` are ring elements (for sym only j = 0 is used).
    """
    if flavor == "ord":
        out = []
        for j in range(d):
            slot = [{a: one} for a in range(dimU[j])]
            for b in range(dimV[j]):
                slot.append({a: t[j] * x[j][b] * c for a, c in enumerate(u[j]) if c})
            out.append(slot)
        return out
    n, m = dimU[0], dimV[0]
    imgs = [{a: one} for a in range(n)]
    for b in range(m):
        img: dict = {}
        if flavor == "sym":
            for a, c in enumerate(u[0]):
                if c:
                    img[a] = t[0] * x[0][b] * c
        else:
            for j in range(d):
                for a, c in enumerate(u[j]):
                    if c:
                        term = t[j] * x[j][b] * c
                        img[a] = img[a] + term if a in img else term
        imgs.append(img)
    return imgs


def apply_shift(flavor, d, dimU, images, terms):
    base = basis(flavor, d, dimU)
    if flavor == "sym":
        out = sym_image(terms, images, dimU[0])
    elif flavor == "alt":
        out = alt_image(terms, images)
    else:
        out = ord_image(terms, images)
    return [out.get(k) for k in base]


def pairing(flavor, d, dimU, key, xvals):
    """<x, e_key> for a top basis key: x^beta, det(x[j, B]) or prod_j x_j[b_j]."""
    if flavor == "sym":
        beta = key[dimU[0]:]
        return reduce(lambda acc, jb: acc * xvals[0][jb[0]] ** jb[1],
                      [(b, e) for b, e in enumerate(beta) if e], 1)
    if flavor == "alt":
        B = [i - dimU[0] for i in key]
        return symbolic_det([[xvals[j][b] for b in B] for j in range(d)])
    return reduce(lambda acc, jb: acc * xvals[jb[0]][jb[1] - dimU[jb[0]]], enumerate(key), 1)


def t_monomial(flavor, d, tvars):
    if flavor == "sym":
        return ((tvars[0], d),)
    return tuple((v, 1) for v in tvars)


def t_truncation(flavor, d, tvars):
    if flavor == "sym":
        return (tvars, d)
    return [([v], 1) for v in tvars]


@dataclass
class PhiExpansion:
    flavor: str
    d: int
    dimU: tuple
    dimV: tuple
    derivative: DirectionalDerivative
    nvars: int
    tvars: list
    xvars: list          # xvars[j][b]
    wvars: dict          # ambient key -> ring variable
    top_keys: list
    coefficient: Polynomial
    h_term: Polynomial
    psi: Polynomial
    h_ring: Polynomial
    pairing_poly: Polynomial

    @property
    def field(self):
        return self.coefficient.field

    def names(self) -> list:
        out = [""] * self.nvars
        for j, v in enumerate(self.tvars):
            out[v] = "t" if self.flavor == "sym" else f"t{j + 1}"
        for j, row in enumerate(self.xvars):
            for b, v in enumerate(row):
                out[v] = f"x{b + 1}" if self.flavor == "sym" else f"x{j + 1}_{b + 1}"
        for k, v in self.wvars.items():
            out[v] = "w_" + "_".join(str(i + (0 if self.flavor == "sym" else 1)) for i in k)
        return out


def _check_char(flavor, d, field):
    p = field.characteristic
    if flavor in ("sym", "alt") and p and p <= d:
        raise UnsupportedCharacteristic(f"characteristic {p} must exceed d = {d}")


def phi_expand(dd: DirectionalDerivative, dimV) -> PhiExpansion:
    flavor, d = dd.flavor, dd.d
    F = dd.f.field
    _check_char(flavor, d, F)
    dimU = dd.base_dims
    dimV = base_dims_tuple(flavor, d, dimV)
    amb, keys = ambient_keys(flavor, d, dimU, dimV)
    nt = 1 if flavor == "sym" else d
    xrows = 1 if flavor == "sym" else d
    xlens = [dimV[j] if flavor == "ord" else dimV[0] for j in range(xrows)]
    nv = nt + sum(xlens) + len(keys)
    tvars = list(range(nt))
    xvars, pos = [], nt
    for ln in xlens:
        xvars.append(list(range(pos, pos + ln)))
        pos += ln
    wvars = {k: pos + i for i, k in enumerate(keys)}

    def V(i):
        return Polynomial.variable(F, nv, i)

    one = Polynomial.constant(F, nv, 1)
    zero = Polynomial.zero(F, nv)
    t = [V(v) for v in tvars]
    x = [[V(v) for v in row] for row in xvars]
    terms = {k: V(v) for k, v in wvars.items()}
    images = shift_images(flavor, d, dimU, dimV, dd.u, t, x, one, zero)
    coords = [c if c is not None else zero for c in apply_shift(flavor, d, dimU, images, terms)]
    total = dd.f.compose(coords, truncate=t_truncation(flavor, d, tvars))
    coeff = total.split_by(tvars).get(t_monomial(flavor, d, tvars), zero)

    top_keys = [k for k in keys if is_top_key(flavor, k, dimU)]
    top_set = {wvars[k] for k in top_keys}
    h_part, psi = {}, {}
    for mono, c in coeff.terms.items():
        (h_part if any(v in top_set for v, _ in mono) else psi)[mono] = c
    h_term = Polynomial(F, nv, h_part, _trusted=True)
    psi = Polynomial(F, nv, psi, _trusted=True)
    base = basis(flavor, d, dimU)
    q0_vars = []
    for bk in base:
        ak = bk + (0,) * dimV[0] if flavor == "sym" else bk
        q0_vars.append(V(wvars[ak]))
    h_ring = dd.h.compose(q0_vars)
    pair_poly = zero
    for k in top_keys:
        pair_poly = pair_poly + V(wvars[k]) * pairing(flavor, d, dimU, k, x)
    if h_term != h_ring * pair_poly:
        raise AssertionError("top part of the expansion is not h(q0) times the pairing")
    return PhiExpansion(flavor, d, dimU, dimV, dd, nv, tvars, xvars, wvars, top_keys, coeff,
                        h_term, psi, h_ring, pair_poly)


def base_coordinates(b) -> list:
    """Coordinates of q0 on the base space."""
    q0 = b.component(0 if b.flavor != "ord" else frozenset())
    out = {}
    for k, c in q0.terms.items():
        out[base_key_of(b.flavor, k, b.dimU)] = c
    return [out.get(k, b.field.zero) for k in basis(b.flavor, b.d, b.dimU)]


def h_at(dd: DirectionalDerivative, b) -> object:
    return dd.h.eval(base_coordinates(b)) if dd.h.nvars else dd.h.constant_term()


def _lower_values(exp: PhiExpansion, q) -> dict:
    F = exp.field
    vals = {}
    top = set(exp.top_keys)
    terms = q.terms
    for k, v in exp.wvars.items():
        if k not in top:
            vals[v] = terms.get(k, F.zero)
    return vals


def _random_x(rng, exp: PhiExpansion, bound: int):
    return [[exp.field.convert(rng.randint(-bound, bound)) for _ in row] for row in exp.xvars]


def reconstruct_top(exp: PhiExpansion, q, seed: int = 0, bound: int = 7, attempts: int = 5):
    """Solve h(q0) <x, top> = -Psi(x, lower) over many functionals x for the top component."""
    F = exp.field
    amb = tuple(u + v for u, v in zip(exp.dimU, exp.dimV))
    if tuple(q.dims) != amb:
        raise ValueError(f"tensor dims {q.dims} do not match the expansion ({amb})")
    b = bigraded_split(q, exp.dimU)
    hval = h_at(exp.derivative, b)
    if F.is_zero(hval):
        raise YBranch("h(q0) = 0: the sample lies outside the locus handled by this layer")
    psi_x = exp.psi.substitute(_lower_values(exp, q))
    rng = random.Random(seed)
    unknowns = exp.top_keys
    npts = len(unknowns) + 3
    rows, rhs = [], []
    hinv = F.inv(hval)
    for _ in range(attempts):
        for _ in range(npts):
            xv = _random_x(rng, exp, bound)
            point = [F.zero] * exp.nvars
            for row_v, row_x in zip(exp.xvars, xv):
                for v, a in zip(row_v, row_x):
                    point[v] = a
            rows.append([F.normalize(pairing(exp.flavor, exp.d, exp.dimU, k, xv)) for k in unknowns])
            rhs.append(F.neg(F.mul(psi_x.eval(point), hinv)))
        if not unknowns or rank(F, rows) == len(unknowns):
            break
    else:
        raise SingularSystem("evaluation functionals did not determine the top component")
    sol = solve(F, rows, rhs) if unknowns else []
    if sol is None:
        raise SingularSystem("inconsistent evaluation system: the sample is not in the closed set")
    return make_tensor(exp.flavor, F, exp.d, amb, dict(zip(unknowns, sol)))


def direct_coefficient(dd: DirectionalDerivative, q, dimV, xv) -> object:
    """The t-coefficient of f(Phi_x(t) q) for numeric q and x, computed without the split."""
    flavor, d = dd.flavor, dd.d
    F = dd.f.field
    dimU = dd.base_dims
    dimV = base_dims_tuple(flavor, d, dimV)
    nt = 1 if flavor == "sym" else d
    t = [Polynomial.variable(F, nt, j) for j in range(nt)]
    one = Polynomial.constant(F, nt, 1)
    zero = Polynomial.zero(F, nt)
    xs = [[F.convert(a) for a in row] for row in xv]
    images = shift_images(flavor, d, dimU, dimV, dd.u, t, xs, one, zero)
    terms = {k: Polynomial.constant(F, nt, c) for k, c in q.terms.items()}
    coords = [c if c is not None else zero for c in apply_shift(flavor, d, dimU, images, terms)]
    total = dd.f.compose(coords, truncate=t_truncation(flavor, d, list(range(nt))))
    return total.coefficient(t_monomial(flavor, d, list(range(nt))))


def split_value(exp: PhiExpansion, q, xv) -> object:
    """h(q0) <x, top> + Psi(x, lower) evaluated at numeric q and x."""
    F = exp.field
    point = [F.zero] * exp.nvars
    for k, v in exp.wvars.items():
        point[v] = q.terms.get(k, F.zero)
    for row_v, row_x in zip(exp.xvars, xv):
        for v, a in zip(row_v, row_x):
            point[v] = F.convert(a)
    return F.add(exp.h_term.eval(point), exp.psi.eval(point))


def check_split(exp: PhiExpansion, rng, points: int = 20, bound: int = 3) -> bool:
    """Spot-check the split against direct evaluation at random (x, q)."""
    from ..multilinear import random_tensor

    amb = tuple(u + v for u, v in zip(exp.dimU, exp.dimV))
    for _ in range(points):
        q = random_tensor(rng, exp.flavor, exp.field, exp.d, amb if exp.flavor == "ord" else amb[0], bound)
        xv = [[rng.randint(-bound, bound) for _ in row] for row in exp.xvars]
        if direct_coefficient(exp.derivative, q, exp.dimV, xv) != split_value(exp, q, xv):
            return False
    return True
