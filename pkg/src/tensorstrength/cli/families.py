"""Built-in example families.  Every random family takes an explicit seed."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from ..exactalg import Polynomial, QQ
from ..multilinear import SymTensor, random_tensor, zero_tensor
from ..machinery import rank_locus
from ..strength import CertTerm, StrengthCertificate, require_verified

FAMILIES = ("power_sum", "triple_product", "border_strength", "rank_locus", "random_dense")


@dataclass
class FamilySpec:
    name: str
    d: int = 2
    n: int = 2
    k: int = 1
    rank: int = 1
    seed: int = 0
    flavor: str = "sym"
    field: object = QQ
    dims: tuple = dc_field(default_factory=tuple)

    def check(self):
        if self.name not in FAMILIES:
            raise ValueError(f"unknown family {self.name!r}; choose from {', '.join(FAMILIES)}")
        if self.d < 1 or self.n < 1:
            raise ValueError("d and n must be positive")
        if self.name == "border_strength" and (self.k < 0 or self.d < 2):
            raise ValueError("border_strength needs d >= 2 and k >= 0")
        if self.name == "rank_locus" and self.rank < 0:
            raise ValueError("rank must be nonnegative")


def power_sum(d: int, n: int, field=QQ) -> SymTensor:
    """x1^d + ... + xn^d."""
    p = Polynomial(field, n, {((i, d),): 1 for i in range(n)})
    return SymTensor(p, d)


def triple_product(n: int, field=QQ) -> SymTensor:
    """x1 y1 z1 + ... + xn yn zn with variables ordered x1, y1, z1, x2, ..."""
    p = Polynomial(field, 3 * n, {((3 * i, 1), (3 * i + 1, 1), (3 * i + 2, 1)): 1 for i in range(n)})
    return SymTensor(p, 3)


def _dims(spec: FamilySpec) -> tuple:
    if spec.dims:
        return tuple(spec.dims)
    return (spec.n,) * spec.d if spec.flavor == "ord" else (spec.n,)


def border_strength(spec: FamilySpec):
    """Sum of k random products; returns the tensor and its construction certificate."""
    rng = random.Random(spec.seed)
    F = spec.field
    dims = _dims(spec)
    d = spec.d
    terms = []
    for _ in range(spec.k):
        while True:
            if spec.flavor == "ord":
                size = rng.randint(1, d - 1)
                J = tuple(sorted(rng.sample(range(d), size)))
                rest = tuple(j for j in range(d) if j not in J)
                r = random_tensor(rng, "ord", F, size, tuple(dims[j] for j in J))
                s = random_tensor(rng, "ord", F, d - size, tuple(dims[j] for j in rest))
                split = frozenset(J)
            else:
                e = rng.randint(1, d - 1)
                r = random_tensor(rng, spec.flavor, F, e, dims[0])
                s = random_tensor(rng, spec.flavor, F, d - e, dims[0])
                split = e
            t = CertTerm(split, r, s)
            if r and s and t.product():
                terms.append(t)
                break
    total = zero_tensor(spec.flavor, F, d, dims)
    for t in terms:
        total = total + t.product()
    return total, require_verified(StrengthCertificate(total, terms))


def random_dense(spec: FamilySpec):
    rng = random.Random(spec.seed)
    dims = _dims(spec)
    return random_tensor(rng, spec.flavor, spec.field, spec.d, dims if spec.flavor == "ord" else dims[0])


def generate(spec: FamilySpec):
    """The named object: a tensor, a (tensor, certificate) pair or a presentation."""
    spec.check()
    if spec.name == "power_sum":
        return power_sum(spec.d, spec.n, spec.field)
    if spec.name == "triple_product":
        return triple_product(spec.n, spec.field)
    if spec.name == "border_strength":
        return border_strength(spec)
    if spec.name == "random_dense":
        return random_dense(spec)
    return rank_locus(spec.flavor, spec.d, _dims(spec), spec.rank, spec.field)

