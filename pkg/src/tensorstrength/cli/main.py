"""Batch driver: ``tensorstrength <command> [options] [input]``.

JSON reports go to stdout (or --out), a short summary to stderr.  Every
randomized path takes --seed (default 0), so identical flags give identical
output.
"""

from __future__ import annotations

import argparse
import random
import sys

from ..errors import (
    BudgetExceeded,
    DirectionNotFound,
    MalformedCertificate,
    SingularSystem,
    UnsupportedCharacteristic,
    YBranch,
)
from ..exactalg import ParseError, field_from_tag
from ..machinery import (
    DEFAULT_BOX,
    Pipeline,
    bound_N,
    coordinate_names,
    find_direction,
    phi_expand,
    reconstruct_top,
    specialize_mod_p,
)
from ..multilinear import bigraded_split
from ..strength import (
    brute_force_strength,
    chop,
    degree_two_strength,
    leibniz_reduce,
    trivial_certificate,
    verify_certificate,
)
from .families import FAMILIES, FamilySpec, generate
from .formats import (
    FORMATS,
    DocumentError,
    certificate_from_json,
    certificate_to_json,
    dump,
    load_json,
    presentation_from_json,
    presentation_to_json,
    report_value,
    tensor_from_json,
    tensor_from_text,
    tensor_to_json,
)

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_CHAR, EXIT_BUDGET, EXIT_YBRANCH = range(6)


# -- input helpers -------------------------------------------------------------

def _read(path):
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _dims(text):
    if text is None:
        return None
    try:
        vals = tuple(int(s) for s in str(text).split(","))
    except ValueError:
        raise DocumentError(f"bad dimension list {text!r}") from None
    if any(v < 0 for v in vals):
        raise DocumentError("dimensions must be nonnegative")
    return vals


def _flavor_dims(flavor, dims):
    return dims if flavor == "ord" else dims[0]


def _load_tensor(args, path=None):
    text = _read(path if path is not None else args.input)
    if text.strip().startswith("{"):
        doc = load_json(text)
        if isinstance(doc, dict) and "target" in doc:   # a certificate: use its target
            doc = doc["target"]
        return tensor_from_json(doc)
    return tensor_from_text(text, args.field, args.d)


def _load_certificate(args):
    return certificate_from_json(load_json(_read(args.input)))


def _load_presentation(args):
    return presentation_from_json(load_json(_read(args.input)))


def _emit(args, doc, summary):
    text = dump(doc)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if summary:
        print(summary, file=sys.stderr)


# -- commands ------------------------------------------------------------------

def cmd_verify(args):
    cert = _load_certificate(args)
    ok = verify_certificate(cert)
    _emit(args, {"verified": ok, "terms": len(cert)},
          f"certificate with {len(cert)} terms: {'verified' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_trivial(args):
    q = _load_tensor(args)
    cert = trivial_certificate(q)
    _emit(args, {"terms": len(cert), "certificate": certificate_to_json(cert)},
          f"trivial certificate: {len(cert)} terms")
    return EXIT_OK


def cmd_quad(args):
    q = _load_tensor(args)
    rep = degree_two_strength(q)
    doc = {"flavor": rep.flavor, "rank": rep.rank, "strength": rep.strength,
           "rational": rep.rational, "terms": len(rep.certificate),
           "certificate": certificate_to_json(rep.certificate)}
    _emit(args, doc, f"rank {rep.rank}, strength {rep.strength}")
    return EXIT_OK


def cmd_brute(args):
    q = _load_tensor(args)
    res = brute_force_strength(q, args.kmax, args.budget)
    doc = {"strength": res.strength, "exceeded": res.exceeded, "examined": res.examined,
           "certificate": certificate_to_json(res.certificate) if res.certificate else None}
    if res.strength is None:
        summary = f"strength exceeds {args.kmax}"
    else:
        summary = f"strength {res.strength} ({res.examined} tuples examined)"
    _emit(args, doc, summary)
    return EXIT_OK


def cmd_leibniz(args):
    cert = _load_certificate(args)
    if not verify_certificate(cert):
        print("input certificate does not verify", file=sys.stderr)
        return EXIT_VERIFY
    res = leibniz_reduce(cert)
    doc = {
        "k": res.k, "ell": res.ell, "bound": res.bound,
        "reduced": certificate_to_json(res.reduced),
        "derivatives": [{"x": [report_value(a) for a in x], "terms": len(c),
                         "certificate": certificate_to_json(c)} for x, c in res.derivatives],
    }
    worst = max((len(c) for _, c in res.derivatives), default=0)
    _emit(args, doc, f"k={res.k}, linear factors {res.ell}, derivative certificates <= {worst} "
                     f"terms (bound {res.bound})")
    return EXIT_OK if worst <= res.bound else EXIT_VERIFY


def cmd_chop(args):
    q = _load_tensor(args)
    if args.dimU is None:
        raise DocumentError("chop needs --dimU")
    b = bigraded_split(q, _flavor_dims(q.flavor, _dims(args.dimU)))
    cert = chop(b)
    _emit(args, {"terms": len(cert), "certificate": certificate_to_json(cert)},
          f"chop certificate: {len(cert)} terms")
    return EXIT_OK


def cmd_bound(args):
    if args.d is None or args.dimU is None:
        raise DocumentError("bound needs --d and --dimU")
    rep = bound_N(args.flavor, args.d, _flavor_dims(args.flavor, _dims(args.dimU)))
    doc = {"flavor": rep.flavor, "d": rep.d, "baseDims": list(rep.base_dims), "N": rep.N,
           "chop": rep.chop_part, "covariant": rep.covariant_part}
    _emit(args, doc, str(rep.N))
    return EXIT_OK


def _direction(args, P):
    gens = P.nonzero_generators()
    if not gens:
        raise DocumentError("presentation has no nonzero generator")
    f = P.generators[args.generator] if args.generator is not None else min(gens, key=lambda g: g.degree())
    return find_direction(f, P.flavor, P.d, P.base_dims, args.box, P.field)


def cmd_derive(args):
    P = _load_presentation(args)
    dd = _direction(args, P)
    names = coordinate_names(P.flavor, P.d, P.base_dims)
    doc = {"u": [[report_value(a) for a in v] for v in dd.u],
           "h": dd.h.to_string(names), "degree": dd.h.degree()}
    _emit(args, doc, f"direction {dd.u}, h of degree {dd.h.degree()}")
    return EXIT_OK


def _dimV(args, P):
    dims = _dims(args.dimV) if args.dimV is not None else (1,) * len(P.base_dims)
    return _flavor_dims(P.flavor, dims)


def cmd_psi(args):
    P = _load_presentation(args)
    dd = _direction(args, P)
    exp = phi_expand(dd, _dimV(args, P))
    names = exp.names()
    doc = {"psi": exp.psi.to_string(names), "h": exp.h_ring.to_string(names),
           "pairing": exp.pairing_poly.to_string(names)}
    status = EXIT_OK
    if args.tensor:
        q = _load_tensor(args, args.tensor)
        top = reconstruct_top(exp, q, seed=args.seed)
        b = bigraded_split(q, exp.dimU if P.flavor == "ord" else exp.dimU[0])
        ok = top == b.top
        doc["reconstructed"] = tensor_to_json(top)
        doc["matches"] = ok
        status = EXIT_OK if ok else EXIT_VERIFY
    elif args.samples:
        rng = random.Random(args.seed)
        matched = checked = ybranch = 0
        while checked < args.samples and ybranch <= 10 * args.samples:
            q = P.sample(rng, exp.dimV if P.flavor == "ord" else exp.dimV[0])
            try:
                top = reconstruct_top(exp, q, seed=rng.randrange(2 ** 32))
            except YBranch:
                ybranch += 1
                continue
            checked += 1
            matched += top == bigraded_split(q, exp.dimU if P.flavor == "ord" else exp.dimU[0]).top
        doc.update({"samples": checked, "matched": matched, "ybranch": ybranch})
        status = EXIT_OK if matched == checked == args.samples else EXIT_VERIFY
    _emit(args, doc, f"Psi has {len(exp.psi.terms)} terms")
    return status


def cmd_pipeline(args):
    P = _load_presentation(args)
    pipe = Pipeline(P, args.box, args.generator)
    if args.tensor:
        q = _load_tensor(args, args.tensor)
        res = pipe.run(q)
        doc = {"bound": res.bound, "terms": len(res.certificate), "chop": res.chop_terms,
               "covariant": res.covariant_terms, "h": report_value(res.h_value),
               "certificate": certificate_to_json(res.certificate)}
        _emit(args, doc, f"{len(res.certificate)} terms (bound {res.bound})")
        return EXIT_OK
    rng = random.Random(args.seed)
    dimV = _dimV(args, P)
    sizes, ybranch = [], 0
    samples = args.samples or 1
    while len(sizes) < samples:
        q = P.sample(rng, dimV)
        try:
            sizes.append(len(pipe.run(q).certificate))
        except YBranch:
            ybranch += 1
            if ybranch > 10 * samples:
                raise
    doc = {"bound": pipe.bound.N, "samples": len(sizes), "sizes": sizes, "max": max(sizes),
           "ybranch": ybranch}
    _emit(args, doc, f"{len(sizes)} samples, max {max(sizes)} terms (bound {pipe.bound.N}), "
                     f"{ybranch} Y-branch draws skipped")
    return EXIT_OK


def cmd_specialize(args):
    P = _load_presentation(args)
    if args.p is None:
        raise DocumentError("specialize needs --p")
    rep = specialize_mod_p(P, args.p)
    doc = {"p": rep.p, "statuses": rep.statuses, "allVanish": rep.all_vanish,
           "presentation": presentation_to_json(rep.presentation) if rep.presentation else None}
    _emit(args, doc, ", ".join(rep.statuses))
    return EXIT_OK


def cmd_generate(args):
    spec = FamilySpec(args.family, d=args.d if args.d is not None else 2, n=args.n, k=args.k,
                      rank=args.rank, seed=args.seed, flavor=args.flavor, field=args.field,
                      dims=_dims(args.dims) or ())
    obj = generate(spec)
    if isinstance(obj, tuple):
        doc = certificate_to_json(obj[1])
    elif spec.name == "rank_locus":
        doc = presentation_to_json(obj)
    else:
        doc = tensor_to_json(obj)
    _emit(args, doc, f"generated {spec.name}")
    return EXIT_OK


def cmd_formats(args):
    sys.stdout.write(FORMATS)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------

def _field(text):
    try:
        return field_from_tag(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field, default=field_from_tag("Q"),
                        help="Q or a prime p (for polynomial text input)")
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw (default 0)")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--d", type=int, help="degree")

    pres = argparse.ArgumentParser(add_help=False)
    pres.add_argument("--box", type=int, default=DEFAULT_BOX, help="search box for directions")
    pres.add_argument("--generator", type=int, help="0-based generator index (default: lowest degree)")
    pres.add_argument("--dimV", help="dim V, or comma list per slot for ord")

    parser = argparse.ArgumentParser(
        prog="tensorstrength",
        description="Exact strength certificates for symmetric, alternating and ordinary tensors.",
        epilog="Run `tensorstrength formats` for the input grammars and exit codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, parents=(common,), inp=True):
        p = sub.add_parser(name, help=help_, parents=list(parents))
        if inp:
            p.add_argument("input", nargs="?", help="input file (default stdin)")
        return p

    add("verify", "check a certificate document")
    add("trivial", "trivial certificate for a tensor")
    add("quad", "exact strength of a degree-2 tensor")
    p = add("brute", "exhaustive strength over a prime field")
    p.add_argument("--kmax", type=int)
    p.add_argument("--budget", type=_positive, default=10 ** 6, help="max candidate tuples")
    add("leibniz", "derivative certificates from a symmetric certificate")
    p = add("chop", "chop the lower bigraded part")
    p.add_argument("--dimU", help="dim U, or comma list per slot for ord")
    p = add("bound", "the constant N for (flavor, d, dim U)", inp=False)
    p.add_argument("--flavor", choices=("sym", "alt", "ord"), default="sym")
    p.add_argument("--dimU", help="dim U, or comma list per slot for ord")
    add("derive", "find a direction with nonzero derivative", parents=(common, pres))
    p = add("psi", "expand the t-coefficient and reconstruct top components", parents=(common, pres))
    p.add_argument("--tensor", help="tensor file to reconstruct")
    p.add_argument("--samples", type=int, default=0)
    p = add("pipeline", "one inductive layer: certificates for sampled or given tensors",
            parents=(common, pres))
    p.add_argument("--tensor", help="tensor file")
    p.add_argument("--samples", type=int, default=1)
    p = add("specialize", "reduce an integral presentation mod p")
    p.add_argument("--p", type=int)
    p = add("generate", "built-in example families", inp=False)
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--flavor", choices=("sym", "alt", "ord"), default="sym")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--dims", help="comma list of dimensions (overrides --n)")
    sub.add_parser("formats", help="print the input/output format reference")
    return parser


COMMANDS = {
    "verify": cmd_verify, "trivial": cmd_trivial, "quad": cmd_quad, "brute": cmd_brute,
    "leibniz": cmd_leibniz, "chop": cmd_chop, "bound": cmd_bound, "derive": cmd_derive,
    "psi": cmd_psi, "pipeline": cmd_pipeline, "specialize": cmd_specialize,
    "generate": cmd_generate, "formats": cmd_formats,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    try:
        return COMMANDS[args.command](args)
    except UnsupportedCharacteristic as exc:
        print(f"unsupported characteristic: {exc}", file=sys.stderr)
        return EXIT_CHAR
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except YBranch as exc:
        print(f"Y-branch: {exc}", file=sys.stderr)
        return EXIT_YBRANCH
    except (MalformedCertificate, DirectionNotFound, SingularSystem) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ParseError, DocumentError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, TypeError, KeyError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
