"""Commuting n-tuples up to conjugacy, with canonical prefix-closed representatives.

The representative of a class is its lexicographically smallest member. A
smallest tuple has a smallest prefix, so representatives of length ``n + 1``
are exactly ``(a, x)`` with ``a`` a representative of length ``n`` and ``x``
the least element of its orbit under conjugation by ``C_G(a)``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .groups import FiniteGroup, GroupError, Subgroup, centralizer


class NoWitnessError(GroupError):
    """Raised when two tuples are not conjugate."""


class TupleClassTable:
    """Canonical representatives of commuting n-tuples in ``G`` up to conjugacy.

    ``reps`` is sorted lexicographically and ``locate`` returns, for any
    commuting tuple, its class index and an element ``g`` with
    ``g^-1 tup g == reps[index]``.
    """

    def __init__(self, G: FiniteGroup, n: int, reps: list[tuple[int, ...]], parent: "TupleClassTable | None"):
        self.group = G
        self.n = n
        self.reps = reps
        self.index = {r: i for i, r in enumerate(reps)}
        self.parent = parent
        self.centralizers = [centralizer(G, r) for r in reps]
        self._witness: dict[tuple[int, ...], tuple[int, int]] = {}
        self._orbits: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def __len__(self) -> int:
        return len(self.reps)

    def __repr__(self) -> str:
        return f"TupleClassTable({self.group.label}, n={self.n}, classes={len(self.reps)})"

    def orbit_data(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """For rep ``i``: least conjugate of each centralizer element and a conjugator.

        Arrays have the ambient group's length; entries outside ``C_G(rep)`` are -1.
        """
        hit = self._orbits.get(i)
        if hit is None:
            hit = _conjugation_orbits(self.group, self.centralizers[i])
            self._orbits[i] = hit
        return hit

    def locate(self, tup: Sequence[int]) -> tuple[int, int]:
        tup = tuple(int(x) for x in tup)
        if len(tup) != self.n:
            raise GroupError(f"expected a {self.n}-tuple, got length {len(tup)}")
        hit = self._witness.get(tup)
        if hit is not None:
            return hit
        G = self.group
        if self.n == 0:
            hit = (0, 0)
        else:
            for x in tup:
                if not 0 <= x < G.order:
                    raise GroupError(f"element index {x} out of range")
            pi, g1 = self.parent.locate(tup[:-1])
            prefix = self.parent.reps[pi]
            y = G.conj(g1, tup[-1])
            least, conjugator = self.parent.orbit_data(pi)
            if least[y] < 0:
                raise GroupError("tuple entries do not commute")
            h = int(conjugator[y])
            hit = (self.index[prefix + (int(least[y]),)], G.mul(g1, h))
        self._witness[tup] = hit
        return hit

    def class_size(self, i: int) -> int:
        return self.group.order // self.centralizers[i].order


def _conjugation_orbits(G: FiniteGroup, C: Subgroup) -> tuple[np.ndarray, np.ndarray]:
    # conjugation by central elements is trivial, so one element per coset of Z(G) suffices
    coset_id, _ = G.left_cosets(tuple(G.center().tolist()))
    _, first = np.unique(coset_id[C.array], return_index=True)
    hs = C.array[np.sort(first)]
    y = C.array
    conj = G.table[G.table[G.inverse[hs][:, None], y[None, :]], hs[:, None]]
    arg = conj.argmin(axis=0)
    least = np.full(G.order, -1, dtype=np.int64)
    conjugator = np.full(G.order, -1, dtype=np.int64)
    least[y] = conj[arg, np.arange(y.size)]
    conjugator[y] = hs[arg]
    return least, conjugator


def classify_tuples(G: FiniteGroup, n: int) -> TupleClassTable:
    if n < 0:
        raise GroupError("arity must be non-negative")
    memo = G.cache("tuple_tables")
    hit = memo.get(n)
    if hit is not None:
        return hit
    if n == 0:
        table = TupleClassTable(G, 0, [()], None)
    else:
        parent = classify_tuples(G, n - 1)
        reps = []
        for i, a in enumerate(parent.reps):
            least, _ = parent.orbit_data(i)
            for x in parent.centralizers[i].array:
                if least[x] == x:
                    reps.append(a + (int(x),))
        table = TupleClassTable(G, n, reps, parent)
    memo[n] = table
    return table


def commuting_tuples(G: FiniteGroup, n: int) -> list[tuple[int, ...]]:
    """All commuting n-tuples, by brute force."""
    out: list[tuple[int, ...]] = [()]
    for _ in range(n):
        nxt = []
        for t in out:
            for x in centralizer(G, t).array:
                nxt.append(t + (int(x),))
        out = nxt
    return out


def conjugate_tuple(G: FiniteGroup, g: int, tup: Sequence[int]) -> tuple[int, ...]:
    return tuple(G.conj(g, x) for x in tup)


def conjugating_element(G: FiniteGroup, a: Sequence[int], b: Sequence[int]) -> int:
    """Some ``g`` with ``g^-1 a g == b``."""
    table = classify_tuples(G, len(a))
    i, g1 = table.locate(a)
    j, g2 = table.locate(b)
    if i != j:
        raise NoWitnessError("tuples are not conjugate")
    return G.mul(g1, G.inv(g2))


def permute_tuple(sigma: Sequence[int], tup: Sequence) -> tuple:
    """Move entry ``i`` to position ``sigma[i]``."""
    out = [None] * len(tup)
    for i, x in enumerate(tup):
        out[sigma[i]] = x
    return tuple(out)


def zeta_biset(G: FiniteGroup, a: Sequence[int], b: Sequence[int]):
    """The isomorphism biset ``[C_G(a), c_g]`` from ``C_G(a)`` to ``C_G(b)`` for ``g^-1 a g = b``."""
    from .bisets import VirtualBiset, canonical_key

    g = conjugating_element(G, a, b)
    Ca, Cb = centralizer(G, a), centralizer(G, b)
    images = Cb.local(G.table[G.table[G.inverse[g], Ca.array], g])
    A, B = Ca.group(), Cb.group()
    key = canonical_key(A, B, np.arange(A.order), images)
    return VirtualBiset.basis(key)


def permute_class(table: TupleClassTable, sigma: Sequence[int]):
    """For each rep ``a``: the class index of ``sigma(a)`` and the zeta biset onto its rep."""
    if sorted(sigma) != list(range(table.n)):
        raise GroupError("not a permutation of the coordinates")
    out = []
    for a in table.reps:
        moved = permute_tuple(sigma, a)
        j, _ = table.locate(moved)
        # C_G(a) and C_G(sigma(a)) are the same subgroup
        out.append((j, zeta_biset(table.group, moved, table.reps[j])))
    return out
