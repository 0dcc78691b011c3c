"""Strength certificates: explicit decompositions q = sum r_i s_i and their checker."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..errors import MalformedCertificate
from ..multilinear import induced_map, products, zero_tensor
from ..multilinear.ops import _ord_maps


@dataclass(frozen=True)
class CertTerm:
    """One product.  ``split`` is deg r (sym/alt) or the 0-based slot set of r (ord)."""

    split: object
    r: object
    s: object

    @property
    def flavor(self) -> str:
        return self.r.flavor

    @property
    def field(self):
        return self.r.field

    def slots(self) -> tuple:
        return tuple(sorted(self.split))

    def product(self):
        if self.flavor == "ord":
            return products(self.r, self.s, "ord", self.slots())
        return products(self.r, self.s)


@dataclass
class StrengthCertificate:
    target: object
    terms: list = dc_field(default_factory=list)

    def __len__(self):
        return len(self.terms)

    @property
    def size(self) -> int:
        return len(self.terms)

    @property
    def flavor(self) -> str:
        return self.target.flavor

    def fields(self) -> set:
        return {t.field for t in self.terms}

    def is_rational(self) -> bool:
        """True when every factor is written over the target's own field."""
        return all(f == self.target.field for f in self.fields())

    def total(self):
        """Sum of the products, brought back to the target field."""
        q = self.target
        acc = zero_tensor(q.flavor, q.field, q.d, q.dims)
        for t in self.terms:
            acc = acc + _descend(t.product(), q.field)
        return acc


def _descend(x, target_field):
    if x.field == target_field:
        return x
    if x.field.contains(target_field):
        return x.change_field(target_field)
    raise MalformedCertificate(f"term over {x.field} cannot be compared with {target_field}")


def check_term(term: CertTerm, target) -> None:
    """Raise MalformedCertificate unless ``term`` has the right shape for ``target``."""
    r, s = term.r, term.s
    if r.flavor != target.flavor or s.flavor != target.flavor:
        raise MalformedCertificate("term flavor differs from the target")
    if r.field != s.field:
        raise MalformedCertificate("r and s live over different fields")
    if not (r.field == target.field or r.field.contains(target.field)):
        raise MalformedCertificate(f"term field {r.field} does not contain {target.field}")
    d = target.d
    if target.flavor in ("sym", "alt"):
        e = term.split
        if not isinstance(e, int) or not 1 <= e <= d - 1:
            raise MalformedCertificate(f"split {e!r} out of range [1, {d - 1}]")
        if r.d != e or s.d != d - e:
            raise MalformedCertificate(f"degrees ({r.d}, {s.d}) do not match split {e}")
        if r.dim != target.dim or s.dim != target.dim:
            raise MalformedCertificate("factor dimension differs from the target")
    else:
        J = term.split
        try:
            J = frozenset(J)
        except TypeError:
            raise MalformedCertificate(f"split {J!r} is not a slot set") from None
        if not J or len(J) >= d or any(not isinstance(j, int) or not 0 <= j < d for j in J):
            raise MalformedCertificate(f"slot set {sorted(J)} is not a nonempty proper subset")
        rest = [j for j in range(d) if j not in J]
        if r.dims != tuple(target.dims[j] for j in sorted(J)):
            raise MalformedCertificate("r does not fit its slots")
        if s.dims != tuple(target.dims[j] for j in rest):
            raise MalformedCertificate("s does not fit the complementary slots")


def verify_certificate(cert: StrengthCertificate) -> bool:
    """True iff the products add up to the target exactly.

    Factors may live over a quadratic extension of the target field; each
    product is then brought back to the base field, and a product that is
    not defined over the base field makes the certificate invalid.
    """
    for t in cert.terms:
        check_term(t, cert.target)
    q = cert.target
    acc = zero_tensor(q.flavor, q.field, q.d, q.dims)
    for t in cert.terms:
        p = t.product()
        if p.field != q.field:
            try:
                p = p.change_field(q.field)
            except ValueError:
                return False
        acc = acc + p
    return acc == q


def require_verified(cert: StrengthCertificate) -> StrengthCertificate:
    if not verify_certificate(cert):
        raise AssertionError("internal error: constructed certificate does not verify")
    return cert


def map_certificate(phi, cert: StrengthCertificate) -> StrengthCertificate:
    """Push a certificate through an induced map; products go to products."""
    target = induced_map(phi, cert.target)
    terms = []
    for t in cert.terms:
        if cert.flavor == "ord":
            maps = _ord_maps(phi, cert.target.d)
            J = t.slots()
            rest = [j for j in range(cert.target.d) if j not in J]
            r = induced_map(tuple(maps[j] for j in J), t.r)
            s = induced_map(tuple(maps[j] for j in rest), t.s)
        else:
            r, s = induced_map(phi, t.r), induced_map(phi, t.s)
        if r and s:
            terms.append(CertTerm(t.split, r, s))
    return StrengthCertificate(target, terms)
