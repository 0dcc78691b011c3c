import itertools
import random
from math import ceil

import pytest
from hypothesis import given, settings

from strategies import flavors, seeds
from tensorstrength.errors import BudgetExceeded, MalformedCertificate, UnsupportedCharacteristic
from tensorstrength.exactalg import GF, QQ, parse_polynomial
from tensorstrength.multilinear import (
    AltTensor,
    LinearMap,
    OrdTensor,
    SymTensor,
    basis,
    bigraded_split,
    contract,
    induced_map,
    make_tensor,
    random_tensor,
)
from tensorstrength.strength import (
    CertTerm,
    StrengthCertificate,
    brute_force_strength,
    chop,
    degree_two_strength,
    leibniz_reduce,
    trivial_bound,
    trivial_certificate,
    verify_certificate,
)


def sym(text, nvars=None, field=QQ):
    p = parse_polynomial(text, field, nvars)
    return SymTensor(p, p.degree())


def power_sum(d, n, field=QQ):
    return sym(" + ".join(f"x{i}^{d}" for i in range(1, n + 1)), n, field)


def random_sym_certificate(rng, d, n, k, field=QQ):
    terms = []
    while len(terms) < k:
        e = rng.randint(1, d - 1)
        r = random_tensor(rng, "sym", field, e, n, density=0.5)
        s = random_tensor(rng, "sym", field, d - e, n, density=0.5)
        if r and s:
            terms.append(CertTerm(e, r, s))
    total = terms[0].product()
    for t in terms[1:]:
        total = total + t.product()
    return StrengthCertificate(total, terms)


# -- verification --------------------------------------------------------------

def test_verify_triple_product():
    q = sym("x1*x2*x3 + x4*x5*x6")
    terms = [CertTerm(1, sym("x1", 6), sym("x2*x3", 6)), CertTerm(1, sym("x4", 6), sym("x5*x6", 6))]
    assert verify_certificate(StrengthCertificate(q, terms))


def test_verify_empty_for_zero():
    assert verify_certificate(StrengthCertificate(SymTensor.zero(QQ, 3, 2), []))


def test_verify_perturbed():
    q = sym("x1*x2 + x3^2")
    cert = trivial_certificate(q)
    assert verify_certificate(cert)
    bad = StrengthCertificate(q + sym("x1^2", 3), cert.terms)
    assert not verify_certificate(bad)


def test_malformed_terms():
    q = sym("x1^3")
    with pytest.raises(MalformedCertificate):
        verify_certificate(StrengthCertificate(q, [CertTerm(3, sym("x1^3"), sym("1 + 0*x1", 1))]))
    r = OrdTensor(QQ, (1,), {(0,): 1})
    s = OrdTensor(QQ, (1,), {(0,): 1})
    target = OrdTensor(QQ, (1, 1), {(0, 0): 1})
    with pytest.raises(MalformedCertificate):
        verify_certificate(StrengthCertificate(target, [CertTerm(frozenset([0, 1]), r, s)]))


# -- trivial certificates ------------------------------------------------------

def test_trivial_alt_examples():
    full = AltTensor(QQ, 3, 3, {(0, 1, 2): 1})
    assert len(trivial_certificate(full)) == 1
    q = AltTensor(QQ, 3, 5, {(0, 1, 2): 1, (0, 3, 4): 1})
    cert = trivial_certificate(q)
    assert verify_certificate(cert) and len(cert) <= 3


def test_trivial_ord_identity():
    q = OrdTensor(QQ, (2, 3, 4), {(i, i, i): 1 for i in range(2)})
    cert = trivial_certificate(q)
    assert verify_certificate(cert) and len(cert) <= 2


@given(seeds, flavors)
def test_trivial_bounds(seed, flavor):
    rng = random.Random(seed)
    d = rng.randint(2, 4)
    if flavor == "ord":
        dims = tuple(rng.randint(1, 3) for _ in range(d))
    else:
        dims = rng.randint(d, 5)
    q = random_tensor(rng, flavor, QQ, d, dims, density=0.4)
    cert = trivial_certificate(q)
    assert verify_certificate(cert)
    assert len(cert) <= trivial_bound(flavor, d, dims)
    # push through a surjection; the certified bound follows the smaller formula
    small = tuple(max(1, n - 1) for n in dims) if flavor == "ord" else max(d, dims - 1)
    if flavor == "ord":
        phi = tuple(LinearMap.random(rng, QQ, b, a) for a, b in zip(dims, small))
    else:
        phi = LinearMap.random(rng, QQ, small, dims)
    image = trivial_certificate(induced_map(phi, q))
    assert verify_certificate(image)
    assert len(image) <= trivial_bound(flavor, d, small)


# -- degree two ----------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 9))
def test_power_sum_quadrics(n):
    rep = degree_two_strength(power_sum(2, n))
    assert rep.rank == n
    assert rep.strength == ceil(n / 2)
    assert len(rep.certificate) == rep.strength
    assert verify_certificate(rep.certificate)


def test_sum_of_two_squares_needs_extension():
    rep = degree_two_strength(sym("x1^2 + x2^2"))
    assert rep.strength == 1
    assert not rep.rational
    assert verify_certificate(rep.certificate)
    split = degree_two_strength(sym("x1^2 - 4*x2^2"))
    assert split.rational and split.strength == 1


def test_alt_and_ord_degree_two():
    q = AltTensor(QQ, 2, 4, {(0, 1): 1, (2, 3): 1})
    rep = degree_two_strength(q)
    assert (rep.rank, rep.strength) == (4, 2)
    ident = OrdTensor(QQ, (3, 3), {(i, i): 1 for i in range(3)})
    rep = degree_two_strength(ident)
    assert (rep.rank, rep.strength) == (3, 3)
    assert verify_certificate(rep.certificate)


def test_char_two_symmetric_rejected():
    with pytest.raises(UnsupportedCharacteristic):
        degree_two_strength(sym("x1^2 + x2^2", field=GF(2)))


def test_finite_field_anisotropic_plane():
    # -1 is not a square mod 3 but is mod 5
    assert degree_two_strength(sym("x1^2 + x2^2", field=GF(3))).strength == 2
    assert degree_two_strength(sym("x1^2 + x2^2", field=GF(5))).strength == 1


@given(seeds, flavors)
def test_degree_two_certificates_verify(seed, flavor):
    rng = random.Random(seed)
    F = [QQ, GF(3), GF(5), GF(7)][seed % 4]
    dims = (rng.randint(1, 3), rng.randint(1, 3)) if flavor == "ord" else rng.randint(2, 5)
    q = random_tensor(rng, flavor, F, 2, dims, density=0.5)
    rep = degree_two_strength(q)
    assert verify_certificate(rep.certificate)
    assert len(rep.certificate) == rep.strength
    if flavor == "alt":
        assert rep.strength == rep.rank // 2
    elif flavor == "ord":
        assert rep.strength == rep.rank
    elif F is QQ:
        assert rep.strength == ceil(rep.rank / 2)
    else:
        assert ceil(rep.rank / 2) <= rep.strength <= ceil(rep.rank / 2) + 1


def all_quadrics(p, n):
    F = GF(p)
    keys = basis("sym", 2, n)
    for coeffs in itertools.product(range(p), repeat=len(keys)):
        yield make_tensor("sym", F, 2, n, {k: c for k, c in zip(keys, coeffs) if c})


def test_degree_two_matches_brute_force_f3_binary():
    for q in all_quadrics(3, 2):
        assert degree_two_strength(q).strength == brute_force_strength(q).strength


# -- brute force ---------------------------------------------------------------

def test_brute_force_examples():
    F = GF(2)
    assert brute_force_strength(sym("x1^2*x2", field=F)).strength == 1
    res = brute_force_strength(sym("x1^3 + x1^2*x2 + x2^3", field=F))
    assert res.strength == 2 and verify_certificate(res.certificate)
    res = brute_force_strength(sym("x1^2*x2 + x1*x2^2", field=F))
    assert res.strength == 1 and verify_certificate(res.certificate)


def test_brute_force_errors():
    with pytest.raises(ValueError):
        brute_force_strength(sym("x1*x2"))
    q = random_tensor(random.Random(0), "sym", GF(3), 3, 3)
    with pytest.raises(BudgetExceeded):
        brute_force_strength(q, budget=5)


def test_brute_force_kmax():
    res = brute_force_strength(sym("x1^3 + x1^2*x2 + x2^3", field=GF(2)), k_max=1)
    assert res.exceeded and res.strength is None


def test_brute_force_below_certificates(rng):
    for _ in range(50):
        flavor = rng.choice(["sym", "alt", "ord"])
        F = GF(rng.choice([2, 3]))
        if flavor == "ord":
            q = random_tensor(rng, "ord", F, 2, (2, 2))
        elif flavor == "alt":
            q = random_tensor(rng, "alt", F, 2, 4)
        else:
            q = random_tensor(rng, "sym", F, 3, 2)
        res = brute_force_strength(q)
        assert verify_certificate(res.certificate)
        assert res.strength == len(res.certificate)
        assert res.strength <= len(trivial_certificate(q))


def test_brute_force_deterministic():
    q = random_tensor(random.Random(4), "sym", GF(3), 3, 2)
    a, b = brute_force_strength(q), brute_force_strength(q)
    assert a.strength == b.strength
    assert [(t.r, t.s) for t in a.certificate.terms] == [(t.r, t.s) for t in b.certificate.terms]


# -- Leibniz reduction ---------------------------------------------------------

def test_leibniz_linear_factor_killed():
    q = sym("x1*x2*x3")
    cert = StrengthCertificate(q, [CertTerm(1, sym("x1", 3), sym("x2*x3", 3))])
    res = leibniz_reduce(cert)
    assert (res.k, res.ell, res.bound) == (1, 1, 0)
    assert not res.q_tilde
    assert all(len(c) == 0 for _, c in res.derivatives)


def test_leibniz_direct_expansion():
    q = sym("x1^2*x2^2")
    cert = StrengthCertificate(q, [CertTerm(2, sym("x1^2", 2), sym("x2^2", 2))])
    res = leibniz_reduce(cert, xs=[[1, 0]])
    (x, dcert), = res.derivatives
    assert dcert.target == contract([1, 0], q)
    assert len(dcert) == 1 <= res.bound


def test_leibniz_rejects_other_flavors():
    q = AltTensor(QQ, 2, 2, {(0, 1): 1})
    with pytest.raises(TypeError):
        leibniz_reduce(trivial_certificate(q))


@given(seeds)
@settings(max_examples=100)
def test_leibniz_bound(seed):
    rng = random.Random(seed)
    cert = random_sym_certificate(rng, rng.choice([3, 4]), 3, rng.randint(1, 3))
    res = leibniz_reduce(cert)
    assert verify_certificate(res.reduced)
    for _, dcert in res.derivatives:
        assert verify_certificate(dcert)
        assert len(dcert) <= res.bound


# -- chopping ------------------------------------------------------------------

def test_chop_binomial():
    b = bigraded_split(sym("x1^2 + 2*x1*x2 + x2^2"), 1)
    cert = chop(b)
    assert len(cert) == 1 and verify_certificate(cert)
    assert cert.target == sym("x1^2 + 2*x1*x2", 2)


def test_chop_ord_rank_one():
    # (u1 + v1) (x) (u2 + v2) with dim U = (1, 1)
    q = OrdTensor(QQ, (2, 2), {(a, b): 1 for a in range(2) for b in range(2)})
    cert = chop(bigraded_split(q, (1, 1)))
    assert verify_certificate(cert) and len(cert) <= 2
    assert cert.target == OrdTensor(QQ, (2, 2), {(0, 0): 1, (0, 1): 1, (1, 0): 1})


@given(seeds, flavors)
@settings(max_examples=100)
def test_chop_bounds(seed, flavor):
    rng = random.Random(seed)
    if flavor == "sym":
        q, dimU, bound = random_tensor(rng, "sym", QQ, 3, 5), 2, 2
    elif flavor == "alt":
        q, dimU, bound = random_tensor(rng, "alt", QQ, 3, 6), 3, 3
    else:
        q, dimU, bound = random_tensor(rng, "ord", QQ, 2, (4, 4)), (2, 2), 4
    cert = chop(bigraded_split(q, dimU))
    assert verify_certificate(cert)
    assert len(cert) <= bound
