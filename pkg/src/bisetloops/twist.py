"""The twisted loop functor and its untwisted variant.

For a source representative ``a`` the entry ``(a, b)`` sums, over the terms
``c [R, phi]`` of ``M`` restricted to ``C_G(a)`` with ``phi(a^k)`` conjugate
to ``b`` (``k`` the exponents from :func:`k_exponents`), the basis elements

    c [ev_a^-1(R), (t, z) -> (t, c_h phi(wind(t, z)))]

from ``(Z/ell)^n x C_G(a)`` to ``(Z/ell)^n x C_H(b)``, where
``h^-1 phi(a^k) h = b``. The untwisted variant keeps only terms with
``a`` inside ``R``.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bisets import TransitiveBisetKey, canonical_key, compose_keys, restriction_biset
from .groups import FiniteGroup, GroupError, Subgroup, centralizer
from .loops import (
    ModulusError,
    TupleClassPredicate,
    _as_matrix,
    assemble,
    check_modulus,
    encode_torus,
    kept_classes,
    torus_codes,
    torus_times,
    tuple_powers,
    twist_object,
)
from .matrices import BisetMatrix
from .tuples import classify_tuples


@dataclass(frozen=True)
class KExponents:
    tup: tuple[int, ...]
    subgroup: tuple[int, ...]
    k: tuple[int, ...]


def k_exponents(G: FiniteGroup, a: Sequence[int], R: Subgroup) -> KExponents:
    """Smallest ``k_i > 0`` with ``a_i^{k_i}`` in ``R``."""
    C = centralizer(G, a)
    if not C.mask[R.array].all():
        raise GroupError("R is not inside the centralizer of the tuple")
    return KExponents(tuple(a), R.members, tuple(_k(G, a, R.mask)))


def _k(G: FiniteGroup, a: Sequence[int], mask: np.ndarray) -> list[int]:
    out = []
    for x in a:
        pw = G.powers(x)
        out.append(next(k for k in range(1, len(pw) + 1) if mask[pw[k % len(pw)]]))
    return out


@dataclass
class WindIso:
    """``wind(a, R)`` from ``ev_a^-1(R)`` onto ``(Z/ell)^n x R``.

    ``domain`` lists the members of ``ev_a^-1(R)`` inside ``torus``
    (``(Z/ell)^n x C_G(a)``), ``images`` their images in ``codomain``
    (``(Z/ell)^n x R``) in the same order.
    """

    torus: FiniteGroup
    codomain: FiniteGroup
    domain: np.ndarray
    images: np.ndarray
    k: tuple[int, ...]

    def is_bijective(self) -> bool:
        return np.unique(self.images).size == self.images.size == self.codomain.order

    def is_homomorphism(self) -> bool:
        pos = np.full(self.torus.order, -1, dtype=np.int64)
        pos[self.domain] = np.arange(self.domain.size)
        prod = pos[self.torus.table[np.ix_(self.domain, self.domain)]]
        if (prod < 0).any():
            return False
        return bool(np.array_equal(self.images[prod], self.codomain.table[np.ix_(self.images, self.images)]))


def ev_preimage(G: FiniteGroup, a: Sequence[int], R: Subgroup, ell: int) -> np.ndarray:
    """Members of ``ev_a^-1(R)`` inside ``(Z/ell)^n x C_G(a)``, sorted."""
    C = centralizer(G, a)
    dom, _, _ = _wind_arrays(G, tuple(a), C, R.array, ell, tuple(_k(G, a, R.mask)))
    return np.sort(dom)


def _wind_arrays(G, a, C: Subgroup, R_amb: np.ndarray, ell: int, k: Sequence[int]):
    """Domain codes, wound ambient elements of ``R`` and torus codes, aligned."""
    n = len(a)
    T = torus_codes(ell, n)
    codes = encode_torus(ell, T)
    P = tuple_powers(G, a, T)
    Q = tuple_powers(G, a, -(T * np.asarray(k, dtype=np.int64)) if n else T)
    # z = p_t^-1 r ranges over the fibre of ev_a over R
    z = G.table[G.inverse[P][:, None], R_amb[None, :]]
    dom = codes[:, None] * C.order + C.local(z)
    wound = G.table[Q[:, None], R_amb[None, :]]
    return dom.ravel(), wound.ravel(), np.repeat(codes, R_amb.size)


def wind_iso(G: FiniteGroup, a: Sequence[int], R: Subgroup, ell: int) -> WindIso:
    a = tuple(a)
    for x in a:
        if ell % G.element_order(x):
            raise ModulusError(f"ell={ell} is not a multiple of the order of {G.name(x)}")
    C = centralizer(G, a)
    if not C.mask[R.array].all():
        raise GroupError("R is not inside the centralizer of the tuple")
    k = tuple(_k(G, a, R.mask))
    dom, wound, codes = _wind_arrays(G, a, C, R.array, ell, k)
    RG = R.group()
    images = codes * RG.order + R.local(wound)
    return WindIso(torus_times(ell, len(a), C.group()), torus_times(ell, len(a), RG), dom, images, k)


def wind_inverse(G: FiniteGroup, a: Sequence[int], R: Subgroup, ell: int) -> np.ndarray:
    """``(t, r) -> (t, a^{(k-1)t} r)`` as codes in ``(Z/ell)^n x C_G(a)``, indexed by codes of ``(Z/ell)^n x R``."""
    a = tuple(a)
    C = centralizer(G, a)
    k = np.asarray(_k(G, a, R.mask), dtype=np.int64)
    T = torus_codes(ell, len(a))
    codes = encode_torus(ell, T)
    S = tuple_powers(G, a, T * (k - 1) if len(a) else T)
    z = G.table[S[:, None], R.array[None, :]]
    return (codes[:, None] * C.order + C.local(z)).ravel()


# -- the per-key engine ------------------------------------------------------------------


def _restriction_terms(G: FiniteGroup, C: Subgroup, key: TransitiveBisetKey):
    res = restriction_biset(G, C)
    (rkey, _), = res.terms.items()
    return compose_keys(rkey, key)


@functools.lru_cache(maxsize=None)
def twist_key_terms(key: TransitiveBisetKey, n: int, ell: int | None, mode: str, pred: TupleClassPredicate | None):
    """Sparse matrix ``{(i, j): {key: coef}}`` of one basis element.

    ``mode`` is ``"twist"``, ``"untwist"`` or ``"orbit"`` (no torus factor,
    terms with ``a`` in ``R`` only).
    """
    if mode not in ("twist", "untwist", "orbit"):
        raise ValueError(f"unknown mode {mode!r}")
    G, H = key.source, key.target
    TG, TH = classify_tuples(G, n), classify_tuples(H, n)
    out: dict[tuple[int, int], dict] = defaultdict(lambda: defaultdict(int))
    for i in kept_classes(G, n, pred):
        a = TG.reps[i]
        C = TG.centralizers[i]
        A = C.group()
        for rkey, c in _restriction_terms(G, C, key):
            R_loc = np.asarray(rkey.members, dtype=np.int64)
            R_amb = C.array[R_loc]
            mask = np.zeros(G.order, dtype=bool)
            mask[R_amb] = True
            k = _k(G, a, mask)
            if mode != "twist" and any(x != 1 for x in k):
                continue
            phi = rkey.phi()
            ak = [G.power(x, e) for x, e in zip(a, k)]
            j, h = TH.locate([int(phi[C.local(x)]) for x in ak])
            D = TH.centralizers[j]
            B = D.group()
            if mode == "orbit":
                imgs = H.table[H.table[H.inverse[h], np.asarray(rkey.images)], h]
                new = canonical_key(A, B, R_loc, D.local(imgs))
            else:
                dom, wound, codes = _wind_arrays(G, a, C, R_amb, ell, k)
                imgs = phi[C.local(wound)]
                imgs = H.table[H.table[H.inverse[h], imgs], h]
                new = canonical_key(
                    torus_times(ell, n, A), torus_times(ell, n, B), dom, codes * B.order + D.local(imgs)
                )
            out[(i, j)][new] += c
    return {ij: dict(d) for ij, d in out.items()}


def _morphism(M, n: int, ell: int, mode: str, pred) -> BisetMatrix:
    M = _as_matrix(M)
    for G in list(M.domain) + list(M.codomain):
        check_modulus(G, n, ell, pred)
    dom = twist_object(M.domain, n, ell, pred)
    cod = twist_object(M.codomain, n, ell, pred)
    return assemble(M, dom, cod, lambda k: twist_key_terms(k, n, ell, mode, pred))


def twist_morphism(M, n: int, ell: int, pred: TupleClassPredicate | None = None) -> BisetMatrix:
    """The twisted loop functor on a virtual biset or biset matrix."""
    return _morphism(M, n, ell, "twist", pred)


def untwist_morphism(M, n: int, ell: int, pred: TupleClassPredicate | None = None) -> BisetMatrix:
    """The same sum keeping only terms whose subgroup contains the tuple."""
    return _morphism(M, n, ell, "untwist", pred)
