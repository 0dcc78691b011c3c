"""Coefficient-generic kernels for induced maps and products.

Coefficients only need ``+``, ``-``, ``*`` and truthiness, so the same code
runs on field scalars and on polynomials (symbolic coefficients).  Results
are not reduced; callers normalise through their field.
"""

from __future__ import annotations

from typing import Mapping, Sequence


def _accumulate(out: dict, key, value):
    if key in out:
        out[key] = out[key] + value
    else:
        out[key] = value


def _prune(out: dict) -> dict:
    return {k: v for k, v in out.items() if v}


def sort_sign(indices: Sequence[int]):
    """(sign, sorted tuple) of a sequence, or (0, None) with a repeated index."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


def shuffle_sign(first: Sequence[int], second: Sequence[int]) -> int:
    inversions = sum(1 for a in first for b in second if a > b)
    return -1 if inversions % 2 else 1


def wedge_terms(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for I, ca in a.items():
        sI = set(I)
        for J, cb in b.items():
            if sI.intersection(J):
                continue
            sign = shuffle_sign(I, J)
            prod = ca * cb
            _accumulate(out, tuple(sorted(I + J)), prod if sign > 0 else -prod)
    return _prune(out)


def wedge_vectors(coeff, vectors: Sequence[Mapping[int, object]]) -> dict:
    """coeff * v_1 ^ ... ^ v_k with each v given as {index: coefficient}."""
    cur = {(): coeff}
    for v in vectors:
        nxt: dict = {}
        for T, c in cur.items():
            for j, a in v.items():
                if not a or j in T:
                    continue
                above = sum(1 for t in T if t > j)
                prod = c * a
                _accumulate(nxt, tuple(sorted(T + (j,))), -prod if above % 2 else prod)
        cur = _prune(nxt)
        if not cur:
            break
    return cur


def alt_image(terms: Mapping, images: Sequence[Mapping[int, object]]) -> dict:
    """Wedge power of a linear map: e_I -> image(e_i1) ^ ... ^ image(e_id)."""
    out: dict = {}
    for I, c in terms.items():
        for J, v in wedge_vectors(c, [images[i] for i in I]).items():
            _accumulate(out, J, v)
    return _prune(out)


def ord_image(terms: Mapping, images: Sequence[Sequence[Mapping[int, object]]]) -> dict:
    """Tensor product of maps: images[slot][i] is the image of basis vector i in that slot."""
    out: dict = {}
    for I, c in terms.items():
        partial = {(): c}
        for slot, i in enumerate(I):
            nxt: dict = {}
            for T, val in partial.items():
                for j, a in images[slot][i].items():
                    if a:
                        _accumulate(nxt, T + (j,), val * a)
            partial = nxt
            if not partial:
                break
        for J, v in partial.items():
            _accumulate(out, J, v)
    return _prune(out)


def _dense_mul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            _accumulate(out, tuple(x + y for x, y in zip(ea, eb)), ca * cb)
    return _prune(out)


def sym_image(terms: Mapping, images: Sequence[Mapping[int, object]], target_dim: int) -> dict:
    """Symmetric power of a linear map on dense-exponent terms."""
    lin = []
    for img in images:
        form = {}
        for j, a in img.items():
            if a:
                e = [0] * target_dim
                e[j] = 1
                form[tuple(e)] = a
        lin.append(form)
    powers: dict = {}

    def power(i, k):
        if (i, k) not in powers:
            powers[(i, k)] = lin[i] if k == 1 else _dense_mul(power(i, k - 1), lin[i])
        return powers[(i, k)]

    out: dict = {}
    zero_exp = tuple([0] * target_dim)
    for exps, c in terms.items():
        acc = {zero_exp: c}
        for i, e in enumerate(exps):
            if e:
                acc = _dense_mul(acc, power(i, e))
                if not acc:
                    break
        for k, v in acc.items():
            _accumulate(out, k, v)
    return _prune(out)
