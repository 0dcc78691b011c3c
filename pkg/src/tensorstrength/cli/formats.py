"""JSON documents for tensors, certificates and presentations, plus the FORMATS reference.

Indices in documents are 1-based (alt/ord) or exponent vectors (sym);
internally everything is 0-based.
"""

from __future__ import annotations

import json
from fractions import Fraction

from ..exactalg import ParseError, QuadElement, QuadraticField, field_from_tag, parse_polynomial
from ..multilinear import SymTensor, basis, make_tensor
from ..machinery import ClosedSetPresentation, coordinate_header, coordinate_names, rank_sampler
from ..strength import CertTerm, StrengthCertificate

FORMATS = """\
Polynomial text
  Signed terms c*x1^e1*x2^e2*... with c an integer or a/b; whitespace is ignored.
  Variables are x1..xn.  A homogeneous polynomial of degree d is a sym tensor.

Tensor (JSON)
  {"flavor": "sym|alt|ord", "d": 3, "dims": [n] or [n1, ..., nd], "field": "Q" | "<p>" | "Q(sqrt(D))",
   "terms": [{"idx": [...], "coeff": "a/b"}]}
  sym: idx is an exponent vector of length n.  alt: strictly increasing 1-based indices.
  ord: one 1-based index per slot.  Over Q(sqrt(D)) a coefficient a + b*sqrt(D) is ["a", "b"].

Certificate (JSON)
  {"target": <tensor>, "terms": [{"split": e | [J...], "r": <tensor>, "s": <tensor>}]}
  sym/alt: split e is the degree of r.  ord: split lists the 1-based slots of r; s fills the rest.

Presentation (JSON)
  {"flavor": ..., "d": ..., "baseDims": [...], "field": "Q", "integral": true|false,
   "generators": ["<polynomial in c_1..c_N>", ...],
   "sampler": {"family": "rank_locus|custom", "params": {...}}}
  c_k is the k-th canonical basis element of the base space (see `header` in generated files):
  sym: exponent vectors in descending lexicographic order; alt: increasing index tuples in
  lexicographic order; ord: index tuples in lexicographic order.

Exit codes
  0 success, 1 verification failure, 2 parse or input error, 3 unsupported characteristic,
  4 budget exceeded, 5 Y-branch (h(q0) = 0 at the sample).
"""


class DocumentError(ValueError):
    """A JSON document does not follow the formats above."""


def format_coeff(field, c):
    if isinstance(field, QuadraticField):
        return [str(c.a), str(c.b)]
    if isinstance(c, Fraction):
        return str(c)
    return str(c)


def parse_coeff(field, raw):
    if isinstance(field, QuadraticField):
        if isinstance(raw, list):
            return field.convert((Fraction(str(raw[0])), Fraction(str(raw[1]))))
        return field.convert(Fraction(str(raw)))
    if isinstance(raw, list):
        raise DocumentError(f"coefficient {raw!r} needs a quadratic field")
    try:
        return field.convert(Fraction(str(raw)))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad coefficient {raw!r}: {exc}") from None


def tensor_to_json(q) -> dict:
    F = q.field
    terms = []
    qt = q.terms
    for key in basis(q.flavor, q.d, q.dims):
        if key in qt:
            idx = list(key) if q.flavor == "sym" else [i + 1 for i in key]
            terms.append({"idx": idx, "coeff": format_coeff(F, qt[key])})
    return {"flavor": q.flavor, "d": q.d, "dims": list(q.dims), "field": F.tag, "terms": terms}


def _need(doc, key, kind):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"{kind} document is missing {key!r}")
    return doc[key]


def tensor_from_json(doc):
    flavor = _need(doc, "flavor", "tensor")
    if flavor not in ("sym", "alt", "ord"):
        raise DocumentError(f"unknown flavor {flavor!r}")
    d = int(_need(doc, "d", "tensor"))
    dims = [int(n) for n in _need(doc, "dims", "tensor")]
    try:
        F = field_from_tag(doc.get("field", "Q"))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    terms = {}
    for t in doc.get("terms", []):
        idx = tuple(int(i) for i in _need(t, "idx", "term"))
        if flavor != "sym":
            idx = tuple(i - 1 for i in idx)
        c = parse_coeff(F, _need(t, "coeff", "term"))
        if flavor == "alt" and list(idx) != sorted(set(idx)):
            raise DocumentError(f"alt index {[i + 1 for i in idx]} is not strictly increasing")
        if flavor == "sym" and sum(idx) != d:
            raise DocumentError(f"exponent vector {list(idx)} does not have degree {d}")
        terms[idx] = F.add(terms[idx], c) if idx in terms else c
    try:
        return make_tensor(flavor, F, d, dims if flavor == "ord" else dims[0], terms)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def tensor_from_text(text: str, field, d=None, nvars=None):
    """A tensor document, or a polynomial in x1..xn read as a symmetric tensor."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return tensor_from_json(load_json(stripped))
    poly = parse_polynomial(stripped, field, nvars)
    if d is None:
        d = poly.degree()
        if d < 0:
            raise DocumentError("the zero polynomial needs an explicit --d")
    if not poly.is_homogeneous(d):
        raise DocumentError(f"polynomial is not homogeneous of degree {d}")
    return SymTensor(poly, d)


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None


def dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _split_to_json(flavor, split):
    return sorted(j + 1 for j in split) if flavor == "ord" else split


def certificate_to_json(cert: StrengthCertificate) -> dict:
    return {
        "target": tensor_to_json(cert.target),
        "terms": [
            {"split": _split_to_json(cert.flavor, t.split), "r": tensor_to_json(t.r), "s": tensor_to_json(t.s)}
            for t in cert.terms
        ],
    }


def certificate_from_json(doc) -> StrengthCertificate:
    target = tensor_from_json(_need(doc, "target", "certificate"))
    terms = []
    for t in doc.get("terms", []):
        split = _need(t, "split", "term")
        if target.flavor == "ord":
            if not isinstance(split, list):
                raise DocumentError("ord splits are lists of slots")
            split = frozenset(int(j) - 1 for j in split)
        else:
            if not isinstance(split, int):
                raise DocumentError("sym/alt splits are integers")
        terms.append(CertTerm(split, tensor_from_json(_need(t, "r", "term")), tensor_from_json(_need(t, "s", "term"))))
    return StrengthCertificate(target, terms)


def presentation_to_json(P: ClosedSetPresentation) -> dict:
    names = coordinate_names(P.flavor, P.d, P.base_dims)
    return {
        "flavor": P.flavor,
        "d": P.d,
        "baseDims": list(P.base_dims),
        "field": P.field.tag,
        "integral": P.integral,
        "generators": [g.to_string(names) for g in P.generators],
        "sampler": {"family": P.family, "params": dict(P.params)},
        "header": [{"name": n, "index": k, "basis": desc}
                   for n, k, desc in coordinate_header(P.flavor, P.d, P.base_dims)],
    }


def presentation_from_json(doc) -> ClosedSetPresentation:
    flavor = _need(doc, "flavor", "presentation")
    d = int(_need(doc, "d", "presentation"))
    dims = tuple(int(n) for n in _need(doc, "baseDims", "presentation"))
    try:
        F = field_from_tag(doc.get("field", "Q"))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    names = coordinate_names(flavor, d, dims)
    table = {n: i for i, n in enumerate(names)}
    gens = [parse_polynomial(text, F, len(names), table) for text in doc.get("generators", [])]
    sampler_doc = doc.get("sampler") or {"family": "custom", "params": {}}
    family = sampler_doc.get("family", "custom")
    params = dict(sampler_doc.get("params", {}))
    sampler = None
    if family == "rank_locus":
        sampler = rank_sampler(flavor, d, dims, int(params["rank"]), F)
    try:
        return ClosedSetPresentation(flavor, d, dims, gens, F, sampler, bool(doc.get("integral", False)),
                                     family, params)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def report_value(c):
    """JSON-friendly scalar."""
    if isinstance(c, QuadElement):
        return [str(c.a), str(c.b)]
    return str(c)
