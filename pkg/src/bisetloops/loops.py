"""The free loop functor on objects and morphisms, plus the structural matrices.

``L^n G`` is the formal union of ``C_G(a)`` over canonical representatives
``a`` of commuting n-tuples. Torus-extended objects ``(Z/ell)^n x L^n G``
use :func:`torus_times`, whose elements ``(t, z)`` are encoded as
``t_enc * |C_G(a)| + z`` with ``t_enc`` the mixed-radix code of ``t`` (first
coordinate most significant) and ``z`` the local index inside the
centralizer.
"""

from __future__ import annotations

import functools
import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bisets import TransitiveBisetKey, VirtualBiset, canonical_key, decompose, realize
from .groups import FiniteGroup, GroupError, Subgroup, cyclic_group, direct_product
from .matrices import BisetMatrix, FormalUnion, as_union
from .tuples import classify_tuples, permute_tuple


class ModulusError(GroupError):
    """Raised when ``ell`` is not a multiple of the relevant element orders."""


def torus_times(ell: int, n: int, A: FiniteGroup) -> FiniteGroup:
    """``(Z/ell)^n x A``; ``A`` itself when ``n == 0``."""
    if n == 0:
        return A
    C = cyclic_group(ell)
    return direct_product(*([C] * n), A)


def torus_codes(ell: int, n: int) -> np.ndarray:
    """All ``t`` in ``(Z/ell)^n`` as rows, in code order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(ell), repeat=n)), dtype=np.int64).reshape(-1, n)


def encode_torus(ell: int, t: np.ndarray) -> np.ndarray:
    code = np.zeros(t.shape[0], dtype=np.int64)
    for col in range(t.shape[1]):
        code = code * ell + t[:, col]
    return code


def tuple_powers(G: FiniteGroup, a: Sequence[int], T: np.ndarray) -> np.ndarray:
    """``a_1^{t_1} ... a_n^{t_n}`` for each row ``t`` of ``T``."""
    out = np.zeros(T.shape[0], dtype=np.int64)
    for i, x in enumerate(a):
        pw = np.asarray(G.powers(x), dtype=np.int64)
        out = G.table[out, pw[T[:, i] % pw.size]]
    return out


# -- class predicates ------------------------------------------------------------


@dataclass(frozen=True)
class TupleClassPredicate:
    """Decides whether the subgroup generated by a commuting tuple lies in a class of groups.

    The class must be closed under isomorphism, subgroups and quotients.
    The shipped predicates satisfy this by construction.
    """

    name: str
    test: Callable[[FiniteGroup, tuple[int, ...]], bool]

    def __call__(self, G: FiniteGroup, tup: Sequence[int]) -> bool:
        return bool(self.test(G, tuple(tup)))


def kept_classes(G: FiniteGroup, n: int, pred: TupleClassPredicate | None = None) -> list[int]:
    table = classify_tuples(G, n)
    if pred is None:
        return list(range(len(table)))
    memo = G.cache("kept_classes")
    key = (n, pred.name)
    if key not in memo:
        memo[key] = [i for i, a in enumerate(table.reps) if pred(G, a)]
    return memo[key]


def check_modulus(G: FiniteGroup, n: int, ell: int, pred: TupleClassPredicate | None = None) -> None:
    if ell is None or ell < 1:
        raise ModulusError("modulus must be a positive integer")
    if n == 0:
        return
    if pred is None:
        if ell % G.exponent():
            raise ModulusError(f"ell={ell} is not a multiple of exponent({G.label})={G.exponent()}")
        return
    table = classify_tuples(G, n)
    for i in kept_classes(G, n, pred):
        for x in table.reps[i]:
            if ell % G.element_order(x):
                raise ModulusError(f"ell={ell} is not a multiple of the order of {G.name(x)} in {G.label}")


# -- objects ---------------------------------------------------------------------


@dataclass
class LoopComponent:
    block: int
    cls: int
    rep: tuple[int, ...]
    centralizer: Subgroup


class LoopObject:
    """``L^n`` (or ``(Z/ell)^n x L^n``) of a formal union, component by component."""

    def __init__(self, base, n: int, ell: int | None = None, pred: TupleClassPredicate | None = None):
        self.base = as_union(base)
        self.n = n
        self.ell = ell
        self.pred = pred
        self.components: list[LoopComponent] = []
        self.offsets: list[int] = []
        groups, labels = [], []
        for b, G in enumerate(self.base):
            if ell is not None:
                check_modulus(G, n, ell, pred)
            table = classify_tuples(G, n)
            self.offsets.append(len(self.components))
            for i in kept_classes(G, n, pred):
                C = table.centralizers[i]
                self.components.append(LoopComponent(b, i, table.reps[i], C))
                A = C.group()
                groups.append(torus_times(ell, n, A) if ell is not None else A)
                labels.append(_label(G, table.reps[i], len(self.base) > 1, b))
        self.union = FormalUnion(groups, labels)

    def __len__(self) -> int:
        return len(self.components)

    def position(self, block: int, cls: int) -> int:
        G = self.base[block]
        kept = kept_classes(G, self.n, self.pred)
        return self.offsets[block] + kept.index(cls)

    def block_positions(self, block: int) -> dict[int, int]:
        G = self.base[block]
        return {c: self.offsets[block] + k for k, c in enumerate(kept_classes(G, self.n, self.pred))}

    def __repr__(self) -> str:
        return f"LoopObject(n={self.n}, ell={self.ell}, components={list(self.union.labels)})"


def _label(G: FiniteGroup, rep: tuple[int, ...], many: bool, block: int) -> str:
    body = "(" + ",".join(G.name(x) for x in rep) + ")"
    return f"{block}:{body}" if many else body


def loop_object(G, n: int, pred: TupleClassPredicate | None = None) -> LoopObject:
    if n < 0:
        raise GroupError("arity must be non-negative")
    return LoopObject(G, n, None, pred)


def twist_object(G, n: int, ell: int, pred: TupleClassPredicate | None = None) -> LoopObject:
    if n < 0:
        raise GroupError("arity must be non-negative")
    return LoopObject(G, n, ell, pred)


# -- morphisms via fixed points ----------------------------------------------------


@functools.lru_cache(maxsize=None)
def _loop_key_fixed(key: TransitiveBisetKey, n: int) -> dict:
    G, H = key.source, key.target
    TG, TH = classify_tuples(G, n), classify_tuples(H, n)
    X = realize(key)
    out = {}
    for i, a in enumerate(TG.reps):
        for j, b in enumerate(TH.reps):
            mask = np.ones(X.size, dtype=bool)
            for x, y in zip(a, b):
                mask &= X.left[x] == X.right[:, y]
            if not mask.any():
                continue
            part = decompose(X.restrict(TG.centralizers[i], TH.centralizers[j], mask))
            out[(i, j)] = dict(part.terms)
    return out


def _as_matrix(M) -> BisetMatrix:
    if isinstance(M, VirtualBiset):
        return BisetMatrix.from_biset(M)
    return M


def assemble(M, dom: LoopObject, cod: LoopObject, per_key: Callable[[TransitiveBisetKey], dict]) -> BisetMatrix:
    """Sum per-key sparse blocks into a matrix between two loop objects."""
    M = _as_matrix(M)
    acc: dict[tuple[int, int], dict] = defaultdict(lambda: defaultdict(int))
    for bi, row in enumerate(M.entries):
        rpos = dom.block_positions(bi)
        for bj, entry in enumerate(row):
            cpos = cod.block_positions(bj)
            for key, c in entry.terms.items():
                for (i, j), terms in per_key(key).items():
                    if i not in rpos:
                        continue
                    if j not in cpos:
                        raise ModulusError("a kept class maps to a dropped class")
                    cell = acc[(rpos[i], cpos[j])]
                    for k2, c2 in terms.items():
                        cell[k2] += c * c2
    return BisetMatrix.from_sparse(dom.union, cod.union, acc)


def loop_morphism(M, n: int, method: str = "fixed", pred: TupleClassPredicate | None = None) -> BisetMatrix:
    """``L^n(M)`` for a virtual biset or a biset matrix.

    ``method="fixed"`` decomposes the fixed sets ``{m | a_i m = m b_i}``;
    ``method="orbit"`` restricts to centralizers and keeps the terms with
    ``a`` in ``R``.
    """
    M = _as_matrix(M)
    dom = loop_object(M.domain, n, pred)
    cod = loop_object(M.codomain, n, pred)
    if method == "fixed":
        per_key = lambda k: _loop_key_fixed(k, n)
    elif method == "orbit":
        from .twist import twist_key_terms

        per_key = lambda k: twist_key_terms(k, n, None, "orbit", pred)
    else:
        raise ValueError(f"unknown method {method!r}")
    return assemble(M, dom, cod, per_key)


# -- torus extension ---------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def torus_key(key: TransitiveBisetKey, n: int, ell: int) -> TransitiveBisetKey:
    """``[(Z/ell)^n x R, id x phi]`` from ``(Z/ell)^n x G`` to ``(Z/ell)^n x H``."""
    if n == 0:
        return key
    G, H = key.source, key.target
    codes = np.arange(ell**n, dtype=np.int64)
    R = np.asarray(key.members, dtype=np.int64)
    im = np.asarray(key.images, dtype=np.int64)
    members = (codes[:, None] * G.order + R[None, :]).ravel()
    images = (codes[:, None] * H.order + im[None, :]).ravel()
    return canonical_key(torus_times(ell, n, G), torus_times(ell, n, H), members, images)


def torus_extend(M, n: int, ell: int) -> BisetMatrix:
    """Apply ``(Z/ell)^n x -`` entrywise."""
    M = _as_matrix(M)
    dom = FormalUnion([torus_times(ell, n, G) for G in M.domain], M.domain.labels)
    cod = FormalUnion([torus_times(ell, n, H) for H in M.codomain], M.codomain.labels)
    entries = [
        [VirtualBiset(dom[i], cod[j], {torus_key(k, n, ell): c for k, c in e.terms.items()}) for j, e in enumerate(row)]
        for i, row in enumerate(M.entries)
    ]
    return BisetMatrix(dom, cod, entries, check=False)


# -- structural matrices -------------------------------------------------------------


def _induced(src: FiniteGroup, tgt: FiniteGroup, members: np.ndarray, images: np.ndarray) -> VirtualBiset:
    return VirtualBiset.basis(canonical_key(src, tgt, members, images))


def _grid(dom: LoopObject | FormalUnion, cod: LoopObject | FormalUnion) -> BisetMatrix:
    du = dom.union if isinstance(dom, LoopObject) else dom
    cu = cod.union if isinstance(cod, LoopObject) else cod
    return BisetMatrix(du, cu, check=False)


def evaluation_family(G: FiniteGroup, n: int, ell: int, pred: TupleClassPredicate | None = None):
    """``ev_a`` as image arrays on ``(Z/ell)^n x C_G(a)``, one per component."""
    obj = twist_object(G, n, ell, pred)
    T = torus_codes(ell, n)
    out = []
    for comp in obj.components:
        P = tuple_powers(G, comp.rep, T)
        out.append(G.table[P[:, None], comp.centralizer.array[None, :]].ravel())
    return out


def ev_matrix(U, n: int, ell: int, pred: TupleClassPredicate | None = None) -> BisetMatrix:
    """Column matrix of ``[(Z/ell)^n x C_G(a), ev_a]`` into the base union."""
    U = as_union(U)
    obj = twist_object(U, n, ell, pred)
    M = _grid(obj, U)
    T = torus_codes(ell, n)
    for pos, comp in enumerate(obj.components):
        G = U[comp.block]
        P = tuple_powers(G, comp.rep, T)
        images = G.table[P[:, None], comp.centralizer.array[None, :]].ravel()
        src = obj.union[pos]
        M.entries[pos][comp.block] = _induced(src, G, np.arange(src.order), images)
    return M


def pev_matrix(U, n: int, ell: int, pred: TupleClassPredicate | None = None) -> BisetMatrix:
    """``(Z/ell)^n x pev`` from ``(Z/ell)^(n+1) x L^(n+1)`` to ``(Z/ell)^n x L^n``.

    ``((t_1..t_{n+1}), z) -> ((t_1..t_n), a_{n+1}^{t_{n+1}} z)`` followed by
    the zeta conjugation when the prefix is not itself a representative.
    """
    U = as_union(U)
    src_obj = twist_object(U, n + 1, ell, pred)
    tgt_obj = twist_object(U, n, ell, pred)
    M = _grid(src_obj, tgt_obj)
    T = torus_codes(ell, n + 1)
    head = encode_torus(ell, T[:, :n])
    for pos, comp in enumerate(src_obj.components):
        G = U[comp.block]
        j, g = classify_tuples(G, n).locate(comp.rep[:-1])
        tpos = tgt_obj.position(comp.block, j)
        B = tgt_obj.components[tpos].centralizer
        last = tuple_powers(G, comp.rep[-1:], T[:, -1:])
        moved = G.table[last[:, None], comp.centralizer.array[None, :]]
        moved = G.table[G.table[G.inverse[g], moved], g]
        images = (head[:, None] * B.order + B.local(moved)).ravel()
        src = src_obj.union[pos]
        M.entries[pos][tpos] = _induced(src, tgt_obj.union[tpos], np.arange(src.order), images)
    return M


def sigma_matrix(U, n: int, sigma: Sequence[int], ell: int | None = None, pred: TupleClassPredicate | None = None) -> BisetMatrix:
    """The coordinate permutation ``sigma`` acting on ``L^n`` (or its torus extension).

    Tuples move by ``sigma(a)[sigma[i]] = a[i]``; torus coordinates move the
    same way and centralizers are identified through the zeta conjugation.
    """
    U = as_union(U)
    if sorted(sigma) != list(range(n)):
        raise GroupError("not a permutation of the coordinates")
    obj = LoopObject(U, n, ell, pred)
    M = _grid(obj, obj)
    if ell is not None:
        T = torus_codes(ell, n)
        Tp = np.empty_like(T)
        Tp[:, list(sigma)] = T
        codes = encode_torus(ell, Tp)
    else:
        codes = np.zeros(1, dtype=np.int64)
    for pos, comp in enumerate(obj.components):
        G = U[comp.block]
        j, g = classify_tuples(G, n).locate(permute_tuple(sigma, comp.rep))
        tpos = obj.position(comp.block, j)
        B = obj.components[tpos].centralizer
        moved = B.local(G.table[G.table[G.inverse[g], comp.centralizer.array], g])
        images = (codes[:, None] * B.order + moved[None, :]).ravel()
        src = obj.union[pos]
        M.entries[pos][tpos] = _induced(src, obj.union[tpos], np.arange(src.order), images)
    return M


def iteration_embedding(U, n: int, m: int, ell: int) -> BisetMatrix:
    """``((s, r), z) -> (r, (s, z))`` from ``(Z/ell)^(n+m) x L^(n+m)`` into ``(Z/ell)^m x L^m((Z/ell)^n x L^n)``.

    The component of ``(x, y)`` lands in the class of ``0 x y`` inside
    ``K_x = (Z/ell)^n x C_G(x)``.
    """
    U = as_union(U)
    src_obj = twist_object(U, n + m, ell)
    inner = twist_object(U, n, ell)
    tgt_obj = twist_object(inner.union, m, ell)
    M = _grid(src_obj, tgt_obj)
    T = torus_codes(ell, n + m)
    s_code = encode_torus(ell, T[:, :n])
    r_code = encode_torus(ell, T[:, n:])
    for pos, comp in enumerate(src_obj.components):
        G = U[comp.block]
        x, y = comp.rep[:n], comp.rep[n:]
        j, g = classify_tuples(G, n).locate(x)
        kpos = inner.position(comp.block, j)
        Cx = inner.components[kpos].centralizer
        K = inner.union[kpos]
        # 0 x y' inside K, with y' = g^-1 y g
        yk = tuple(int(v) for v in Cx.local([G.conj(g, v) for v in y]))
        c, w = classify_tuples(K, m).locate(yk)
        tpos = tgt_obj.position(kpos, c)
        D = tgt_obj.components[tpos].centralizer
        z = Cx.local(G.table[G.table[G.inverse[g], comp.centralizer.array], g])
        kel = s_code[:, None] * Cx.order + z[None, :]
        kel = K.table[K.table[K.inverse[w], kel], w]
        images = (r_code[:, None] * D.order + D.local(kel)).ravel()
        src = src_obj.union[pos]
        M.entries[pos][tpos] = _induced(src, tgt_obj.union[tpos], np.arange(src.order), images)
    return M


def projection_matrix(U, n: int, ell: int, ell2: int, pred: TupleClassPredicate | None = None) -> BisetMatrix:
    """``(t, z) -> (t mod ell2, z)`` from the modulus ``ell`` object to the modulus ``ell2`` object."""
    if ell % ell2:
        raise ModulusError("the smaller modulus must divide the larger one")
    U = as_union(U)
    big = twist_object(U, n, ell, pred)
    small = twist_object(U, n, ell2, pred)
    M = _grid(big, small)
    codes = encode_torus(ell2, torus_codes(ell, n) % ell2)
    for pos, comp in enumerate(big.components):
        C = comp.centralizer
        images = (codes[:, None] * C.order + np.arange(C.order)[None, :]).ravel()
        src = big.union[pos]
        M.entries[pos][pos] = _induced(src, small.union[pos], np.arange(src.order), images)
    return M
