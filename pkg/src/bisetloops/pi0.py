"""The action of virtual bisets on the free abelian group on components of ``L^n``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GroupError, Subgroup, is_subgroup
from .loops import loop_object, loop_morphism
from .matrices import FormalUnion, augmentation_matrix
from .tuples import classify_tuples


@dataclass
class Pi0Vector:
    union: FormalUnion
    coeffs: list[int]

    def __post_init__(self):
        if len(self.coeffs) != len(self.union):
            raise ValueError("one coefficient per component")


def pi0_map(M, n: int) -> np.ndarray:
    """Entry ``(a, b)`` is the augmentation of ``L^n(M)[a, b]``."""
    return augmentation_matrix(loop_morphism(M, n)).astype(np.int64)


def pi0_transfer_oracle(G: FiniteGroup, H: Subgroup, a, n: int) -> Pi0Vector:
    """``sum over gH in G/H with g^-1 a g inside H of [g^-1 a g]_H``, by coset enumeration."""
    if H.ambient != G or not is_subgroup(G, H.array):
        raise GroupError("H is not a subgroup of G")
    a = tuple(a)
    if len(a) != n:
        raise GroupError(f"expected a {n}-tuple")
    HG = H.group()
    table = classify_tuples(HG, n)
    coeffs = [0] * len(table)
    _, reps = G.left_cosets(H.members)
    for g in reps.tolist():
        moved = [G.conj(g, x) for x in a]
        if all(H.mask[x] for x in moved):
            i, _ = table.locate(H.local(moved).tolist())
            coeffs[i] += 1
    return Pi0Vector(loop_object(HG, n).union, coeffs)
