import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import FIELDS, fields, poly, seeds
from tensorstrength.exactalg import (
    GF,
    QQ,
    DimensionMismatchError,
    FieldMismatchError,
    ParseError,
    Polynomial,
    frobenius_root,
    linear_substitute,
    parse_polynomial,
    partial_derivative,
    quadratic_field,
    ring_ops,
    squarefree_part,
)
from tensorstrength.exactalg.linalg import matmul


def P(text, field=QQ, nvars=None):
    return parse_polynomial(text, field, nvars)


# -- scalars -------------------------------------------------------------------

def test_rationals_are_reduced():
    assert QQ.convert(Fraction(6, -4)) == Fraction(-3, 2)
    assert QQ.convert(Fraction(6, -4)).denominator == 2


def test_prime_field_residues():
    F = GF(7)
    assert F.convert(-1) == 6
    assert F.mul(3, F.inv(3)) == 1
    assert F.convert(Fraction(1, 2)) == 4


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        GF(6)


def test_field_mix_rejected():
    with pytest.raises(FieldMismatchError):
        P("x1", QQ) + P("x1", GF(3))


def test_squarefree_part():
    assert squarefree_part(12) == 3
    assert squarefree_part(-8) == -2
    K = quadratic_field(-1)
    i = K.convert((0, 1))
    assert K.mul(i, i) == K.convert(-1)


# -- ring operations -----------------------------------------------------------

def test_difference_of_squares():
    x, y = P("x1", nvars=2), P("x2", nvars=2)
    assert (x + y) * (x - y) == P("x1^2 - x2^2")


def test_frobenius_char_two():
    F = GF(2)
    assert P("x1 + x2", F) ** 2 == P("x1^2 + x2^2", F)


def test_additive_identity():
    rng = random.Random(1)
    for k in range(20):
        p = poly(rng.randrange(10 ** 6), FIELDS[k % len(FIELDS)])
        assert ring_ops(p, Polynomial.zero(p.field, p.nvars), "add") == p


def test_eval_exact():
    f = P("1/2*x1^2 - x2")
    assert ring_ops(f, [3, 1], "eval") == Fraction(7, 2)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        P("x1", nvars=1) + P("x1", nvars=2)
    with pytest.raises(DimensionMismatchError):
        P("x1", nvars=2).eval([1])


@given(seeds, fields)
@settings(max_examples=500)
def test_ring_laws(seed, F):
    a, b, c = (poly(seed + k, F) for k in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == Polynomial.zero(F, a.nvars)


def test_no_zero_coefficients_stored():
    f = P("x1 + x2") - P("x2", nvars=2)
    assert f == P("x1", nvars=2)
    assert all(c != 0 for c in f.terms.values())


# -- derivatives ---------------------------------------------------------------

def test_partial_examples():
    assert partial_derivative(P("x1^2*x2"), 0) == P("2*x1*x2")
    assert not partial_derivative(P("x1^2", GF(2)), 0)
    # a c - b^2/4 with a, b, c = x1, x2, x3
    assert partial_derivative(P("x1*x3 - 1/4*x2^2"), 0) == P("x3", nvars=3)


def test_partial_out_of_range():
    with pytest.raises(DimensionMismatchError):
        partial_derivative(P("x1"), 3)


@given(seeds)
@settings(max_examples=200)
def test_mixed_partials_commute(seed):
    f = poly(seed, QQ, nterms=6)
    assert f.derivative(0).derivative(1) == f.derivative(1).derivative(0)


def test_derivative_matches_sympy():
    rng = random.Random(3)
    xs = sympy.symbols("x1:4")
    for _ in range(20):
        f = poly(rng.randrange(10 ** 6), QQ, nterms=6)
        expr = sympy.sympify(str(f).replace("^", "**"), locals={str(s): s for s in xs})
        for v in range(3):
            want = sympy.expand(sympy.diff(expr, xs[v]))
            got = sympy.sympify(str(f.derivative(v)).replace("^", "**"), locals={str(s): s for s in xs})
            assert sympy.expand(got - want) == 0


# -- substitution --------------------------------------------------------------

def test_linear_substitute_examples():
    f = P("x1^2")
    assert linear_substitute(f, [[1, 1]]) == P("x1^2 + 2*x1*x2 + x2^2")
    g = P("x1^2 + x1*x2 + x2^2")
    assert linear_substitute(g, [[1], [0]]) == P("x1^2", nvars=1)


def test_linear_substitute_identity():
    rng = random.Random(5)
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(50):
        f = poly(rng.randrange(10 ** 6), QQ)
        assert linear_substitute(f, eye) == f


def test_linear_substitute_shape():
    with pytest.raises(ValueError):
        linear_substitute(P("x1*x2"), [[1, 0]])


@given(seeds, fields)
@settings(max_examples=200)
def test_substitution_composes(seed, F):
    rng = random.Random(seed)
    f = poly(seed, F, nvars=2)
    M = [[F.convert(rng.randint(-3, 3)) for _ in range(3)] for _ in range(2)]
    N = [[F.convert(rng.randint(-3, 3)) for _ in range(2)] for _ in range(3)]
    assert linear_substitute(linear_substitute(f, M), N) == linear_substitute(f, matmul(F, M, N))


# -- Frobenius roots -----------------------------------------------------------

def test_frobenius_root_examples():
    assert frobenius_root(P("x1^2 + x3^2", GF(2))) == P("x1 + x3", GF(2))
    assert frobenius_root(P("x1^3*x2^6", GF(3))) == P("x1*x2^2", GF(3))
    assert frobenius_root(P("x1^2 + x1*x2", GF(2))) is None


@given(seeds, st.sampled_from([2, 3, 5]))
@settings(max_examples=300)
def test_frobenius_round_trip(seed, p):
    g = poly(seed, GF(p))
    assert frobenius_root(g ** p) == g


# -- text grammar --------------------------------------------------------------

def test_parse_fractions_and_spaces():
    assert P(" -3/4 * x1 ^2 + x2 ") == Polynomial(QQ, 2, {((0, 2),): Fraction(-3, 4), ((1, 1),): 1})


@pytest.mark.parametrize("text,col", [("x1^", 4), ("x1 + * x2", 6), ("2/0*x1", 3)])
def test_parse_errors_carry_position(text, col):
    with pytest.raises(ParseError) as info:
        P(text)
    assert info.value.line == 1
    assert info.value.column == col


def test_round_trip_text(rng):
    for F in FIELDS:
        for _ in range(20):
            f = poly(rng.randrange(10 ** 6), F)
            assert parse_polynomial(str(f), F, f.nvars) == f
