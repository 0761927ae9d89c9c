"""Class-restricted loop functors, p-adic power tests and the obstruction report."""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bisets import VirtualBiset
from .groups import FiniteGroup
from .loops import LoopObject, TupleClassPredicate, loop_object
from .matrices import BisetMatrix, augmentation_matrix
from .twist import twist_morphism


def _is_power_of(x: int, p: int) -> bool:
    while x % p == 0:
        x //= p
    return x == 1


ALL_ABELIAN = TupleClassPredicate("abelian", lambda G, tup: True)


@functools.lru_cache(maxsize=None)
def abelian_p_groups(p: int) -> TupleClassPredicate:
    """Tuples generating an abelian p-group, i.e. every entry has p-power order."""
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not a prime")
    return TupleClassPredicate(
        f"abelian-{p}-groups", lambda G, tup: all(_is_power_of(G.element_order(x), p) for x in tup)
    )


def p_part(m: int, p: int) -> int:
    out = 1
    while m % p == 0:
        m //= p
        out *= p
    return out


def local_exponent(groups: Sequence[FiniteGroup], p: int) -> int:
    """Least ``e >= 1`` with ``p^e`` at least the p-part of every exponent."""
    e = 1
    for G in groups:
        while p**e < p_part(G.exponent(), p):
            e += 1
    return e


def loop_object_restricted(G, n: int, pred: TupleClassPredicate) -> LoopObject:
    return loop_object(G, n, pred)


def twist_morphism_restricted(M, n: int, p: int, e: int | None = None) -> BisetMatrix:
    """The twisted loop functor on classes generating abelian p-groups, with ``ell = p^e``."""
    if isinstance(M, VirtualBiset):
        groups = [M.source, M.target]
    else:
        groups = list(M.domain) + list(M.codomain)
    if e is None:
        e = local_exponent(groups, p)
    return twist_morphism(M, n, p**e, abelian_p_groups(p))


# -- p-adic powers -----------------------------------------------------------------------


def _as_int_matrix(A) -> np.ndarray:
    arr = np.array(A, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("expected a square matrix")
    return np.vectorize(int, otypes=[object])(arr) if arr.size else arr


def matrix_powers(A, m_max: int) -> list[np.ndarray]:
    """``[A^1, ..., A^m_max]`` with exact integers."""
    A = _as_int_matrix(A)
    out = []
    P = A.copy()
    for _ in range(m_max):
        out.append(P)
        P = P.dot(A)
    return out


def is_nilpotent(A) -> bool:
    """Exact test: ``A^size == 0``."""
    A = _as_int_matrix(A)
    P = np.identity(A.shape[0], dtype=object)
    for _ in range(A.shape[0]):
        P = P.dot(A)
    return not any(P.ravel())


@dataclass
class PadicReport:
    """For each precision ``j``, the least ``m >= 1`` with ``A^m = 0 mod p^j`` (``None`` if not found)."""

    p: int
    j_max: int
    m_max: int
    first_power: dict[int, int | None]

    @property
    def converges(self) -> bool:
        return all(m is not None for m in self.first_power.values())


def padic_power_analysis(A, p: int, j_max: int, m_max: int = 64) -> PadicReport:
    powers = matrix_powers(A, m_max)
    first: dict[int, int | None] = {}
    for j in range(1, j_max + 1):
        q = p**j
        first[j] = next((m for m, P in enumerate(powers, start=1) if all(int(v) % q == 0 for v in P.ravel())), None)
    return PadicReport(p, j_max, m_max, first)


# -- obstruction report -----------------------------------------------------------------


@dataclass
class ObstructionReport:
    group: str
    n: int
    ell: int
    augmentation: int
    matrix: BisetMatrix
    epsilon: np.ndarray
    powers: list[np.ndarray]
    diagonal_witnesses: list[tuple[int, int]]
    nilpotent: bool
    padic: PadicReport | None
    symbolic: list[list[str]]
    warnings: list[str] = field(default_factory=list)

    @property
    def obstructed(self) -> bool:
        """Augmentation powers cannot tend to zero: a diagonal entry of size at least 2."""
        return bool(self.diagonal_witnesses)


def symbolic_entries(L: BisetMatrix) -> list[list[str]]:
    """Augmentations with every proper-subgroup basis element replaced by a symbol.

    Only the terms on the whole group are evaluated; the others stand for
    unknown orbit sizes and are named ``s0, s1, ...`` in order of appearance.
    """
    names: dict = {}
    out = []
    for row in L.entries:
        line = []
        for e in row:
            const = 0
            terms: list[tuple[int, str]] = []
            for key, c in e.items():
                if key.order == key.source.order:
                    const += c
                    continue
                if key not in names:
                    names[key] = f"s{len(names)}"
                terms.append((c, names[key]))
            if const or not terms:
                terms.append((const, ""))
            line.append(_linear_form(terms))
        out.append(line)
    return out


def _linear_form(terms: list[tuple[int, str]]) -> str:
    out = ""
    for c, name in terms:
        mag = abs(c)
        body = name if (name and mag == 1) else (f"{mag}*{name}" if name else str(mag))
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


def obstruction_witness(
    X: VirtualBiset, n: int, ell: int | None = None, p: int | None = None, j_max: int = 6, m_max: int = 10
) -> ObstructionReport:
    notes = []
    if X.source != X.target:
        raise ValueError("expected an endomorphism")
    G = X.source
    eps = X.augmentation()
    if eps != 0:
        msg = f"augmentation of the input is {eps}, not 0"
        warnings.warn(msg)
        notes.append(msg)
    ell = ell or G.exponent()
    L = twist_morphism(X, n, ell)
    A = augmentation_matrix(L)
    powers = matrix_powers(A, m_max)
    diag = [(i, int(A[i, i])) for i in range(A.shape[0]) if abs(int(A[i, i])) >= 2]
    padic = padic_power_analysis(A, p, j_max, max(m_max, j_max)) if p else None
    return ObstructionReport(G.label, n, ell, eps, L, A, powers, diag, is_nilpotent(A), padic, symbolic_entries(L), notes)
