"""Formal unions of groups and matrices of virtual bisets."""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Sequence

import numpy as np

from .bisets import BisetError, TransitiveBisetKey, VirtualBiset, compose_keys
from .groups import FiniteGroup


class FormalUnion:
    """An ordered list of groups; ``labels`` are for display only."""

    def __init__(self, components: Sequence[FiniteGroup], labels: Sequence | None = None):
        self.components = tuple(components)
        self.labels = tuple(labels) if labels is not None else tuple(range(len(self.components)))
        if len(self.labels) != len(self.components):
            raise BisetError("one label per component")

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> FiniteGroup:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalUnion):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return "FormalUnion(" + " + ".join(f"{G.label}" for G in self.components) + ")"

    def __add__(self, other: "FormalUnion") -> "FormalUnion":
        return FormalUnion(self.components + other.components, self.labels + other.labels)

    @classmethod
    def single(cls, G: FiniteGroup, label=None) -> "FormalUnion":
        return cls([G], [label if label is not None else G.label])


def as_union(X) -> FormalUnion:
    if isinstance(X, FormalUnion):
        return X
    return FormalUnion.single(X)


class BisetMatrix:
    """Entry ``(i, j)`` is a virtual biset from ``domain[i]`` to ``codomain[j]``."""

    def __init__(self, domain: FormalUnion, codomain: FormalUnion, entries=None, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        if entries is None:
            entries = [[VirtualBiset.zero(G, H) for H in codomain] for G in domain]
        self.entries = [list(row) for row in entries]
        if check:
            if len(self.entries) != len(domain) or any(len(r) != len(codomain) for r in self.entries):
                raise BisetError("entry grid does not match the formal unions")
            for i, row in enumerate(self.entries):
                for j, e in enumerate(row):
                    if e.source != domain[i] or e.target != codomain[j]:
                        raise BisetError(f"entry ({i},{j}) has the wrong source or target")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.domain), len(self.codomain)

    def __getitem__(self, ij) -> VirtualBiset:
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def from_biset(cls, X: VirtualBiset) -> "BisetMatrix":
        return cls(FormalUnion.single(X.source), FormalUnion.single(X.target), [[X]])

    @classmethod
    def from_sparse(cls, domain: FormalUnion, codomain: FormalUnion, terms: dict) -> "BisetMatrix":
        """Build from ``{(i, j): entry}`` with entries given as virtual bisets or ``{key: coef}``."""
        M = cls(domain, codomain, check=False)
        for (i, j), d in terms.items():
            if isinstance(d, VirtualBiset):
                d = d.terms
            M.entries[i][j] = VirtualBiset(domain[i], codomain[j], d)
        return M

    def __eq__(self, other) -> bool:
        if not isinstance(other, BisetMatrix):
            return NotImplemented
        return self.domain == other.domain and self.codomain == other.codomain and self.entries == other.entries

    def __add__(self, other: "BisetMatrix") -> "BisetMatrix":
        self._same_shape(other)
        return BisetMatrix(
            self.domain, self.codomain,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            check=False,
        )

    def __neg__(self) -> "BisetMatrix":
        return BisetMatrix(self.domain, self.codomain, [[-a for a in r] for r in self.entries], check=False)

    def __sub__(self, other: "BisetMatrix") -> "BisetMatrix":
        return self + (-other)

    def __rmul__(self, c: int) -> "BisetMatrix":
        return BisetMatrix(self.domain, self.codomain, [[c * a for a in r] for r in self.entries], check=False)

    def __matmul__(self, other: "BisetMatrix") -> "BisetMatrix":
        return matrix_compose(self, other)

    def _same_shape(self, other: "BisetMatrix"):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise BisetError("matrices have different shapes")

    def is_zero(self) -> bool:
        return not any(e for r in self.entries for e in r)

    def nonzero(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.entries) for j, e in enumerate(r) if e]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "BisetMatrix":
        dom = FormalUnion([self.domain[i] for i in rows], [self.domain.labels[i] for i in rows])
        cod = FormalUnion([self.codomain[j] for j in cols], [self.codomain.labels[j] for j in cols])
        return BisetMatrix(dom, cod, [[self.entries[i][j] for j in cols] for i in rows], check=False)

    def map_entries(self, f: Callable[[VirtualBiset], VirtualBiset], domain=None, codomain=None) -> "BisetMatrix":
        return BisetMatrix(domain or self.domain, codomain or self.codomain, [[f(e) for e in r] for r in self.entries])

    def __repr__(self) -> str:
        rows = ["  [" + ", ".join(repr(e) for e in r) + "]" for r in self.entries]
        return f"BisetMatrix {self.shape[0]}x{self.shape[1]}\n" + "\n".join(rows)


def matrix_compose(X: BisetMatrix, Y: BisetMatrix) -> BisetMatrix:
    """``(X . Y)[i, k] = sum_j X[i, j] . Y[j, k]``."""
    if len(X.codomain) != len(Y.domain) or X.codomain != Y.domain:
        raise BisetError("shape mismatch in matrix composition")
    nr, nm, nc = len(X.domain), len(Y.domain), len(Y.codomain)
    acc: list[list[dict[TransitiveBisetKey, int]]] = [[defaultdict(int) for _ in range(nc)] for _ in range(nr)]
    ycols = [[(k, Y.entries[j][k]) for k in range(nc) if Y.entries[j][k]] for j in range(nm)]
    for i in range(nr):
        for j in range(nm):
            xij = X.entries[i][j]
            if not xij:
                continue
            for k, yjk in ycols[j]:
                out = acc[i][k]
                for kx, cx in xij.terms.items():
                    for ky, cy in yjk.terms.items():
                        for key, m in compose_keys(kx, ky):
                            out[key] += cx * cy * m
    entries = [[VirtualBiset(X.domain[i], Y.codomain[k], acc[i][k]) for k in range(nc)] for i in range(nr)]
    return BisetMatrix(X.domain, Y.codomain, entries, check=False)


def identity_matrix(U: FormalUnion) -> BisetMatrix:
    M = BisetMatrix(U, U, check=False)
    for i, G in enumerate(U):
        M.entries[i][i] = VirtualBiset.identity(G)
    return M


def zero_matrix(U: FormalUnion, V: FormalUnion) -> BisetMatrix:
    return BisetMatrix(U, V, check=False)


def augmentation_matrix(X: BisetMatrix) -> np.ndarray:
    return np.array([[e.augmentation() for e in r] for r in X.entries], dtype=object).reshape(X.shape)


def block_diagonal(blocks: Sequence[BisetMatrix]) -> BisetMatrix:
    dom = FormalUnion([])
    cod = FormalUnion([])
    for b in blocks:
        dom = dom + b.domain
        cod = cod + b.codomain
    M = BisetMatrix(dom, cod, check=False)
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.entries):
            for j, e in enumerate(row):
                M.entries[r0 + i][c0 + j] = e
        r0 += len(b.domain)
        c0 += len(b.codomain)
    return M
