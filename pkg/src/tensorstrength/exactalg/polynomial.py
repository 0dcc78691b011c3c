"""Sparse multivariate polynomials with exact coefficients.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable
with every exponent positive; the empty tuple is the constant monomial.
A polynomial is an immutable map from monomials to nonzero field elements.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Iterable, Mapping, Sequence

from .fields import Field, FieldMismatchError, QuadElement, QQ

Monomial = tuple


class DimensionMismatchError(ValueError):
    """Raised when shapes or variable counts do not line up."""


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_from_exponents(exps: Sequence[int]) -> Monomial:
    return tuple((i, e) for i, e in enumerate(exps) if e)


def mono_to_exponents(m: Monomial, nvars: int) -> tuple:
    out = [0] * nvars
    for v, e in m:
        out[v] = e
    return tuple(out)


def _canonical_mono(m) -> Monomial:
    if isinstance(m, dict):
        items = m.items()
    else:
        items = m
    merged: dict[int, int] = {}
    for v, e in items:
        if e < 0:
            raise ValueError("negative exponent")
        if e:
            merged[v] = merged.get(v, 0) + e
    return tuple(sorted(merged.items()))


def exponent_vectors(nvars: int, degree: int) -> list[tuple]:
    """All exponent vectors of the given total degree, in canonical (descending lex) order."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for v in combo:
            exps[v] += 1
        out.append(tuple(exps))
    return out


def multinomial(exps: Sequence[int]) -> int:
    out = factorial(sum(exps))
    for e in exps:
        out //= factorial(e)
    return out


class Polynomial:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms: Mapping | Iterable = (), *, _trusted=False):
        self.field = field
        self.nvars = nvars
        if _trusted:
            self.terms = terms
            return
        out: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            mono = _canonical_mono(mono)
            if mono and mono[-1][0] >= nvars:
                raise DimensionMismatchError(
                    f"variable index {mono[-1][0]} out of range for {nvars} variables"
                )
            c = field.normalize(coeff)
            if mono in out:
                c = field.add(out[mono], c)
            if field.is_zero(c):
                out.pop(mono, None)
            else:
                out[mono] = c
        self.terms = out

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, nvars: int) -> "Polynomial":
        return cls(field, nvars, {}, _trusted=True)

    @classmethod
    def constant(cls, field: Field, nvars: int, c) -> "Polynomial":
        return cls(field, nvars, {(): c})

    @classmethod
    def variable(cls, field: Field, nvars: int, i: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise DimensionMismatchError(f"variable {i} out of range")
        return cls(field, nvars, {((i, 1),): field.one}, _trusted=True)

    @classmethod
    def linear_form(cls, field: Field, coeffs: Sequence) -> "Polynomial":
        return cls(field, len(coeffs), {((i, 1),): c for i, c in enumerate(coeffs)})

    @classmethod
    def from_exponents(cls, field: Field, nvars: int, terms: Mapping) -> "Polynomial":
        """Build from a map of dense exponent vectors to coefficients."""
        out = {}
        for exps, c in terms.items():
            if len(exps) != nvars:
                raise DimensionMismatchError("exponent vector has wrong length")
            out[mono_from_exponents(exps)] = c
        return cls(field, nvars, out)

    # -- basic protocol -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (
                self.field == other.field
                and self.nvars == other.nvars
                and self.terms == other.terms
            )
        if isinstance(other, (int, Fraction, QuadElement)):
            if not other:
                return not self.terms
            return self.terms == {(): self.field.normalize(other)}
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.field}, {self.nvars}, {self})"

    def __str__(self):
        return self.to_string()

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coefficient(self, mono) -> object:
        return self.terms.get(_canonical_mono(mono), self.field.zero)

    def sorted_terms(self) -> list:
        """Terms in canonical order: descending degree, then descending lex on exponents."""
        n = self.nvars
        return sorted(
            self.terms.items(),
            key=lambda kv: (-mono_degree(kv[0]), tuple(-e for e in mono_to_exponents(kv[0], n))),
        )

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.field != self.field:
                raise FieldMismatchError(f"field mismatch: {self.field} vs {other.field}")
            if other.nvars != self.nvars:
                raise DimensionMismatchError(
                    f"variable count mismatch: {self.nvars} vs {other.nvars}"
                )
            return other
        if isinstance(other, (int, Fraction, QuadElement)):
            return Polynomial.constant(self.field, self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = F.add(out[m], c)
                if F.is_zero(s):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Polynomial(F, self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Polynomial(F, self.nvars, {m: F.neg(c) for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadElement)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = F.mul(c1, c2)
                if m in out:
                    out[m] = F.add(out[m], c)
                else:
                    out[m] = c
        out = {m: c for m, c in out.items() if not F.is_zero(c)}
        return Polynomial(F, self.nvars, out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.field, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        F = self.field
        c = F.normalize(c)
        if F.is_zero(c):
            return Polynomial.zero(F, self.nvars)
        return Polynomial(F, self.nvars, {m: F.mul(v, c) for m, v in self.terms.items()}, _trusted=True)

    def ring_op(self, op: str, other=None):
        """Dispatch ``add``/``sub``/``mul``/``scale``/``eval`` by name."""
        if op == "add":
            return self + self._check(other)
        if op == "sub":
            return self - self._check(other)
        if op == "mul":
            return self * self._check(other)
        if op == "scale":
            return self.scale(other)
        if op == "eval":
            return self.eval(other)
        raise ValueError(f"unknown ring operation {op!r}")

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise TypeError("expected a Polynomial operand")
        return self._coerce(other)

    # -- structure ----------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def degrees(self) -> set:
        return {mono_degree(m) for m in self.terms}

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return d is None or degs == {d}

    def homogeneous_part(self, k: int) -> "Polynomial":
        return Polynomial(
            self.field, self.nvars,
            {m: c for m, c in self.terms.items() if mono_degree(m) == k}, _trusted=True,
        )

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_term(self):
        return self.terms.get((), self.field.zero)

    # -- calculus and evaluation --------------------------------------------

    def derivative(self, var: int) -> "Polynomial":
        if not 0 <= var < self.nvars:
            raise DimensionMismatchError(f"variable {var} out of range for {self.nvars}")
        F = self.field
        out: dict = {}
        for m, c in self.terms.items():
            for k, (v, e) in enumerate(m):
                if v == var:
                    coeff = F.mul(c, F.convert(e))
                    if F.is_zero(coeff):
                        break
                    new = m[:k] + (((v, e - 1),) if e > 1 else ()) + m[k + 1:]
                    out[new] = F.add(out[new], coeff) if new in out else coeff
                    break
        out = {m: c for m, c in out.items() if not F.is_zero(c)}
        return Polynomial(F, self.nvars, out, _trusted=True)

    def directional_derivative(self, direction: Sequence) -> "Polynomial":
        if len(direction) != self.nvars:
            raise DimensionMismatchError("direction has wrong length")
        result = Polynomial.zero(self.field, self.nvars)
        for i, a in enumerate(direction):
            a = self.field.normalize(a)
            if not self.field.is_zero(a):
                result = result + self.derivative(i).scale(a)
        return result

    def eval(self, point: Sequence):
        if len(point) != self.nvars:
            raise DimensionMismatchError(
                f"point has {len(point)} entries, polynomial has {self.nvars} variables"
            )
        F = self.field
        pt = [F.normalize(x) for x in point]
        total = F.zero
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                val = F.mul(val, F.pow(pt[v], e))
            total = F.add(total, val)
        return total

    def substitute(self, values: Mapping[int, object]) -> "Polynomial":
        """Plug scalars into some variables; the variable count is unchanged."""
        F = self.field
        vals = {v: F.normalize(x) for v, x in values.items()}
        out: dict = {}
        for m, c in self.terms.items():
            rest = []
            for v, e in m:
                if v in vals:
                    c = F.mul(c, F.pow(vals[v], e))
                else:
                    rest.append((v, e))
            if F.is_zero(c):
                continue
            rest = tuple(rest)
            out[rest] = F.add(out[rest], c) if rest in out else c
        out = {m: c for m, c in out.items() if not F.is_zero(c)}
        return Polynomial(F, self.nvars, out, _trusted=True)

    def linear_substitute(self, M: Sequence[Sequence]) -> "Polynomial":
        """Replace each variable x_i by sum_j M[i][j] * y_j."""
        if len(M) != self.nvars:
            raise DimensionMismatchError(
                f"substitution matrix has {len(M)} rows, expected {self.nvars}"
            )
        ncols = len(M[0]) if M else 0
        if any(len(row) != ncols for row in M):
            raise DimensionMismatchError("ragged substitution matrix")
        images = [Polynomial.linear_form(self.field, row) for row in M]
        if not M:
            return Polynomial(self.field, 0, dict(self.terms))
        return self.compose(images)

    def compose(self, images: Sequence["Polynomial"], truncate=None) -> "Polynomial":
        """Substitute ``images[i]`` for variable ``i``.

        ``truncate=(vars, bound)`` drops terms whose total degree in ``vars``
        exceeds ``bound`` after every multiplication; a list of such pairs
        applies all of them.
        """
        if len(images) != self.nvars:
            raise DimensionMismatchError(
                f"{len(images)} images supplied for {self.nvars} variables"
            )
        if not images:
            return Polynomial(self.field, 0, dict(self.terms))
        target = images[0]
        for img in images:
            if img.nvars != target.nvars or img.field != target.field:
                raise DimensionMismatchError("images live in different rings")
        F = target.field
        cuts = []
        if truncate is not None:
            pairs = [truncate] if isinstance(truncate, tuple) else list(truncate)
            cuts = [(frozenset(vs), b) for vs, b in pairs]

        def ok(m):
            return all(sum(e for v, e in m if v in vs) <= b for vs, b in cuts)

        def trim(p):
            if not cuts:
                return p
            kept = {m: c for m, c in p.terms.items() if ok(m)}
            return Polynomial(F, p.nvars, kept, _trusted=True)

        powers: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                powers[key] = images[v] if e == 1 else trim(power(v, e - 1) * images[v])
            return powers[key]

        result = Polynomial.zero(F, target.nvars)
        for m, c in self.terms.items():
            term = Polynomial.constant(F, target.nvars, F.convert(c) if F != self.field else c)
            for v, e in m:
                term = trim(term * power(v, e))
                if not term:
                    break
            result = result + term
        return result

    def frobenius_root(self):
        """g with g**p == self, or ``None`` when some exponent is not divisible by p."""
        p = self.field.characteristic
        if p == 0:
            raise ValueError("Frobenius root needs a prime field")
        out = {}
        for m, c in self.terms.items():
            if any(e % p for _, e in m):
                return None
            # coefficients are fixed by Frobenius over the prime field
            out[tuple((v, e // p) for v, e in m)] = c
        return Polynomial(self.field, self.nvars, out, _trusted=True)

    # -- reshaping ----------------------------------------------------------

    def embed(self, nvars: int, mapping: Sequence[int] | None = None, offset: int = 0) -> "Polynomial":
        """Rename variable i to ``mapping[i]`` (or ``i + offset``) in a ring of ``nvars`` variables."""
        out = {}
        for m, c in self.terms.items():
            if mapping is None:
                new = tuple((v + offset, e) for v, e in m)
            else:
                new = _canonical_mono([(mapping[v], e) for v, e in m])
            if new and new[-1][0] >= nvars:
                raise DimensionMismatchError("embedding target too small")
            out[new] = c
        return Polynomial(self.field, nvars, out, _trusted=mapping is None)

    def change_field(self, field: Field) -> "Polynomial":
        """Reinterpret (reduce, lift or descend) coefficients into ``field``."""
        if field == self.field:
            return self
        if self.field.contains(field):
            return Polynomial(field, self.nvars, {m: self.field.descend(c, field) for m, c in self.terms.items()})
        return Polynomial(field, self.nvars, {m: field.convert(c) for m, c in self.terms.items()})

    def split_by(self, vars_: Iterable[int]) -> dict:
        """Group terms by their part in ``vars_``: {mono in vars_: poly in the rest}."""
        vs = frozenset(vars_)
        groups: dict = {}
        for m, c in self.terms.items():
            inner = tuple((v, e) for v, e in m if v in vs)
            outer = tuple((v, e) for v, e in m if v not in vs)
            groups.setdefault(inner, {})[outer] = c
        return {k: Polynomial(self.field, self.nvars, g, _trusted=True) for k, g in groups.items()}

    def coefficient_of(self, mono) -> "Polynomial":
        """Coefficient of ``mono`` viewed as a polynomial in the variables of ``mono``."""
        mono = _canonical_mono(mono)
        vs = [v for v, _ in mono]
        return self.split_by(vs).get(mono, Polynomial.zero(self.field, self.nvars))

    def restrict_degree(self, vars_: Iterable[int], degree: int) -> "Polynomial":
        vs = frozenset(vars_)
        return Polynomial(
            self.field, self.nvars,
            {m: c for m, c in self.terms.items() if sum(e for v, e in m if v in vs) == degree},
            _trusted=True,
        )

    # -- printing -----------------------------------------------------------

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for v, e in m:
                name = names[v] if names is not None else f"x{v + 1}"
                factors.append(name if e == 1 else f"{name}^{e}")
            coeff = F.format(c)
            negative = False
            if isinstance(c, Fraction) and c < 0:
                negative, coeff = True, str(-c)
            if "sqrt" in coeff:
                coeff = f"({coeff})"
            if factors and coeff == "1":
                body = "*".join(factors)
            elif factors:
                body = coeff + "*" + "*".join(factors)
            else:
                body = coeff
            parts.append(("- " if negative else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def poly_ring_ops(a: Polynomial, b, op: str):
    """Functional form of the ring operations."""
    return a.ring_op(op, b)


def random_polynomial(rng, field: Field, nvars: int, max_degree: int, nterms: int,
                      coeff_range: int = 5, homogeneous: int | None = None) -> Polynomial:
    terms = {}
    for _ in range(nterms):
        deg = homogeneous if homogeneous is not None else rng.randint(0, max_degree)
        exps = [0] * nvars
        for _ in range(deg):
            exps[rng.randrange(nvars)] += 1
        if field.characteristic:
            c = rng.randrange(field.characteristic)
        else:
            c = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3))
        terms[mono_from_exponents(exps)] = terms.get(mono_from_exponents(exps), 0) + c
    return Polynomial(field, nvars, terms)


__all__ = [
    "Polynomial",
    "DimensionMismatchError",
    "mono_mul",
    "mono_degree",
    "mono_from_exponents",
    "mono_to_exponents",
    "exponent_vectors",
    "multinomial",
    "random_polynomial",
    "poly_ring_ops",
    "QQ",
]
