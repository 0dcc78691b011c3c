import random

import pytest
import sympy
from hypothesis import given, settings

from strategies import seeds
from tensorstrength.errors import DirectionNotFound, UnsupportedCharacteristic, YBranch
from tensorstrength.exactalg import GF, QQ, Polynomial, parse_polynomial
from tensorstrength.exactalg.linalg import rank
from tensorstrength.machinery import (
    ClosedSetPresentation,
    Pipeline,
    bound_N,
    check_split,
    coordinate_names,
    covariant_expand,
    delta_degree,
    find_direction,
    h_at,
    phi_expand,
    rank_locus,
    reconstruct_top,
    specialize_mod_p,
    strength_from_membership,
)
from tensorstrength.machinery.expansion import split_value
from tensorstrength.multilinear import LinearMap, SymTensor, bigraded_split, induced_map, random_tensor
from tensorstrength.strength import verify_certificate


@pytest.fixture(scope="module")
def quadrics():
    """Rank <= 2 quadrics on U = K^3: the 3x3 Gram determinant."""
    return rank_locus("sym", 2, 3, 2)


@pytest.fixture(scope="module")
def quadric_derivative(quadrics):
    return find_direction(quadrics.generators[0], "sym", 2, 3)


def sym(text, nvars=None):
    p = parse_polynomial(text, QQ, nvars)
    return SymTensor(p, p.degree())


def custom(flavor, d, dims, texts, integral=True):
    names = coordinate_names(flavor, d, dims)
    table = {n: i for i, n in enumerate(names)}
    gens = [parse_polynomial(t, QQ, len(names), table) for t in texts]
    return ClosedSetPresentation(flavor, d, dims, gens, QQ, None, integral)


# -- presentations -------------------------------------------------------------

def test_gram_determinant(quadrics):
    f, = quadrics.generators
    names = coordinate_names("sym", 2, 3)
    assert names == ["c_1", "c_2", "c_3", "c_4", "c_5", "c_6"]
    # c_1..c_6 = coefficients of x1^2, x1x2, x1x3, x2^2, x2x3, x3^2
    c = sympy.symbols("c_1:7")
    G = sympy.Matrix([[c[0], c[1] / 2, c[2] / 2], [c[1] / 2, c[3], c[4] / 2], [c[2] / 2, c[4] / 2, c[5]]])
    want = sympy.expand(G.det())
    got = sympy.sympify(f.to_string(names).replace("^", "**"))
    assert sympy.expand(got - want) == 0
    assert quadrics.spot_check()


def test_delta_degree_examples(quadrics):
    assert delta_degree(quadrics) == (3, 6)
    assert delta_degree(custom("sym", 2, 2, ["c_1 - c_2", "1"])) == (0, 0)
    assert delta_degree(custom("sym", 3, 2, ["c_1^8"])) == (8, 24)
    with pytest.raises(ValueError):
        delta_degree(custom("sym", 2, 2, ["0"]))


def test_generators_must_be_homogeneous():
    with pytest.raises(ValueError):
        custom("sym", 2, 2, ["c_1^2 + c_2"])


# -- directions ----------------------------------------------------------------

def test_direction_gram_cofactor(quadric_derivative):
    dd = quadric_derivative
    assert dd.u == ((1, 0, 0),)
    names = coordinate_names("sym", 2, 3)
    assert dd.h == parse_polynomial("c_4*c_6 - 1/4*c_5^2", QQ, 6, {n: i for i, n in enumerate(names)})
    assert dd.h.degree() == dd.f.degree() - 1


def test_direction_square_of_coordinate():
    P = custom("sym", 3, 2, ["c_1^2"])
    dd = find_direction(P.generators[0], "sym", 3, 2)
    assert dd.u == ((1, 0),)
    assert dd.h == Polynomial.variable(QQ, 4, 0).scale(2)


def test_direction_needs_bigger_box():
    # u = (a, b): derivative along u^4 is 4ab(a^2 - b^2), zero on [-1, 1]^2
    P = custom("sym", 4, 2, ["c_2 - c_4"])
    with pytest.raises(DirectionNotFound, match="--box"):
        find_direction(P.generators[0], "sym", 4, 2, box=1)
    dd = find_direction(P.generators[0], "sym", 4, 2, box=2)
    a, b = dd.u[0]
    assert a * b * (a * a - b * b) != 0


def test_direction_rejects_constants():
    with pytest.raises(ValueError):
        find_direction(Polynomial.constant(QQ, 3, 1), "sym", 2, 2)


# -- the t-coefficient ---------------------------------------------------------

def test_phi_expand_matches_symbolic_oracle(quadric_derivative):
    exp = phi_expand(quadric_derivative, 1)
    names = exp.names()
    syms = {n: sympy.Symbol(n) for n in names}
    t, x = syms["t"], syms["x1"]

    def w(*e):
        return syms["w_" + "_".join(map(str, e))]

    units = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]

    def gram(i, j):
        if i == j:
            return w(*[2 * a for a in units[i]])
        return w(*[a + b for a, b in zip(units[i], units[j])]) / 2

    G = sympy.Matrix(4, 4, lambda i, j: gram(i, j))
    # Phi_x(t): u_i -> u_i, v -> t x u_1
    A = sympy.Matrix([[1, 0, 0, t * x], [0, 1, 0, 0], [0, 0, 1, 0]])
    oracle = sympy.expand((A * G * A.T).det()).coeff(t, 2)
    got = sympy.sympify(exp.coefficient.to_string(names).replace("^", "**"), locals=syms)
    assert sympy.expand(got - oracle) == 0
    assert exp.h_term == exp.h_ring * exp.pairing_poly


def test_phi_expand_split_spot_check(quadric_derivative):
    for dimV in (1, 2, 3):
        assert check_split(phi_expand(quadric_derivative, dimV), random.Random(dimV), points=20)


def test_phi_expand_zero_on_embedded_tensors(quadric_derivative, rng):
    exp = phi_expand(quadric_derivative, 2)
    for _ in range(10):
        q0 = random_tensor(rng, "sym", QQ, 2, 3)
        q = SymTensor(q0.poly.embed(5), 2)
        xv = [[QQ.convert(rng.randint(-3, 3)) for _ in row] for row in exp.xvars]
        assert split_value(exp, q, xv) == 0
        assert not exp.psi.substitute({v: q.terms.get(k, QQ.zero) for k, v in exp.wvars.items()})


def test_phi_expand_char_check():
    with pytest.raises(UnsupportedCharacteristic):
        rank_locus("sym", 2, 2, 1, GF(2))
    f = parse_polynomial("c_1*c_3 + c_2^2", GF(2), 3, {"c_1": 0, "c_2": 1, "c_3": 2})
    dd = find_direction(f, "sym", 2, 2)
    with pytest.raises(UnsupportedCharacteristic):
        phi_expand(dd, 1)


# -- reconstruction ------------------------------------------------------------

def test_reconstruct_worked_example(quadric_derivative):
    exp = phi_expand(quadric_derivative, 1)
    q = sym("x2^2 + 2*x2*x4 + x4^2 + x3^2", 4)   # (u2 + v)^2 + u3^2
    assert h_at(quadric_derivative, bigraded_split(q, 3)) == 1
    assert reconstruct_top(exp, q) == sym("x4^2", 4)


def test_reconstruct_zero_top(quadric_derivative):
    exp = phi_expand(quadric_derivative, 1)
    q = sym("x2^2 + x3^2", 4)
    assert not reconstruct_top(exp, q)


def test_reconstruct_y_branch(quadric_derivative):
    exp = phi_expand(quadric_derivative, 1)
    with pytest.raises(YBranch):
        reconstruct_top(exp, sym("x1^2 + x4^2", 4))


def test_reconstruct_random_samples(quadrics, quadric_derivative, rng):
    done = 0
    while done < 30:
        dimV = 1 + done % 4
        exp = phi_expand(quadric_derivative, dimV)
        q = quadrics.sample(rng, dimV)
        try:
            top = reconstruct_top(exp, q, seed=done)
        except YBranch:
            continue
        assert top == bigraded_split(q, 3).top
        done += 1


def test_reconstruct_equivariant(quadrics, quadric_derivative, rng):
    done = 0
    while done < 30:
        dimV = rng.randint(1, 3)
        exp = phi_expand(quadric_derivative, dimV)
        q = quadrics.sample(rng, dimV)
        gV = LinearMap.random(rng, QQ, dimV, dimV)
        if rank(QQ, gV.entries) < dimV:
            continue
        n = 3 + dimV
        g = LinearMap(QQ, [[(1 if i == j else 0) if i < 3 and j < 3
                            else gV.entries[i - 3][j - 3] if i >= 3 and j >= 3 else 0
                            for j in range(n)] for i in range(n)])
        try:
            top = reconstruct_top(exp, q)
        except YBranch:
            continue
        assert reconstruct_top(exp, induced_map(g, q)) == induced_map(g, top)
        done += 1


# -- covariant expansion and one layer -----------------------------------------

@pytest.mark.parametrize("flavor,d,dims,rank", [
    ("sym", 2, 3, 2), ("sym", 3, 2, 1), ("alt", 2, 4, 2), ("ord", 2, (2, 2), 1), ("ord", 3, (2, 2, 2), 1),
])
def test_covariant_weighted_degree(flavor, d, dims, rank):
    P = rank_locus(flavor, d, dims, rank)
    dd = find_direction(P.generators[0], flavor, d, P.base_dims)
    cov = covariant_expand(dd)
    assert cov.weighted_degrees() <= {d}
    m = min(range(len(P.base_dims)), key=lambda j: P.base_dims[j]) if flavor == "ord" else None
    for _, factors in cov.monomials():
        if flavor == "ord":
            slots = [j for key, e in factors.items() for j in key[0] for _ in range(e)]
            assert sorted(slots) == list(range(d))
            assert any(m not in key[0] for key in factors)
        else:
            assert any(key[0] <= d // 2 for key in factors)


def test_membership_bound(quadrics, rng):
    pipe = Pipeline(quadrics)
    assert pipe.bound.N == 6
    done = 0
    while done < 25:
        q = quadrics.sample(rng, 3)
        try:
            res = pipe.run(q)
        except YBranch:
            continue
        assert verify_certificate(res.certificate)
        assert len(res.certificate) <= 6 and res.covariant_terms <= 3
        done += 1


def test_membership_embedded_sample(quadrics):
    q = sym("x2^2 + x3^2", 5)
    res = strength_from_membership(quadrics, q)
    assert res.covariant_terms == 0 and len(res.certificate) <= 3


def test_membership_y_branch(quadrics):
    with pytest.raises(YBranch):
        strength_from_membership(quadrics, sym("x1*x4 + x5^2", 5))


@pytest.mark.parametrize("flavor,d,dims,rank,dimV", [
    ("sym", 3, 2, 1, 2), ("alt", 2, 4, 2, 2), ("ord", 2, (2, 2), 1, (1, 2)), ("ord", 3, (2, 2, 2), 1, (1, 1, 1)),
])
def test_pipeline_other_flavors(flavor, d, dims, rank, dimV, rng):
    P = rank_locus(flavor, d, dims, rank)
    pipe = Pipeline(P)
    done = tries = 0
    while done < 5 and tries < 100:
        tries += 1
        q = P.sample(rng, dimV)
        try:
            res = pipe.run(q)
        except YBranch:
            continue
        assert verify_certificate(res.certificate)
        assert len(res.certificate) <= bound_N(flavor, d, P.base_dims).N
        done += 1
    assert done == 5


# -- bounds --------------------------------------------------------------------

def test_bound_examples():
    assert bound_N("sym", 3, 3).N == 9
    assert bound_N("alt", 3, 3).N == 6
    assert bound_N("ord", 3, (2, 2, 2)).N == 16
    assert bound_N("sym", 2, 3).N == 6


@given(seeds)
def test_bound_split(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 5)
    for flavor in ("sym", "alt", "ord"):
        dims = tuple(rng.randint(1, 4) for _ in range(d)) if flavor == "ord" else rng.randint(d, 6)
        rep = bound_N(flavor, d, dims)
        assert rep.N == rep.chop_part + rep.covariant_part
        assert rep.N >= 0


# -- reduction mod p -----------------------------------------------------------

def test_specialize_examples():
    rep = specialize_mod_p(custom("sym", 2, 2, ["2*c_1 - 2*c_2"]), 2)
    assert rep.statuses == ["vanishes mod p"] and rep.all_vanish
    rep = specialize_mod_p(custom("sym", 2, 2, ["c_1^2 + c_3^2"]), 2)
    assert rep.statuses == ["repaired (1 root)"]
    assert rep.presentation.generators[0] == parse_polynomial("x1 + x3", GF(2), 3)


def test_specialize_gram_mod_5(quadrics):
    rep = specialize_mod_p(quadrics, 5)
    assert rep.statuses == ["kept"]
    assert rep.presentation.generators[0]


def test_specialize_errors(quadrics):
    with pytest.raises(ValueError):
        specialize_mod_p(quadrics, 4)
    with pytest.raises(ValueError):
        specialize_mod_p(custom("sym", 2, 2, ["c_1"], integral=False), 3)


@given(seeds)
@settings(max_examples=100)
def test_specialize_frobenius_repair(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 5])
    names = coordinate_names("sym", 2, 2)
    g = parse_polynomial("c_1*c_2 + c_3^2 + 2*c_1*c_3", QQ, 3, {n: i for i, n in enumerate(names)})
    g = g.scale(rng.randint(1, p - 1) if p > 2 else 1)
    P = ClosedSetPresentation("sym", 2, 2, [g ** p], QQ, None, True)
    rep = specialize_mod_p(P, p)
    assert rep.presentation.generators[0] == g.change_field(GF(p))
