import random

import numpy as np
import pytest

from bisetloops.bisets import BisetError, VirtualBiset, canonical_key
from bisetloops.checks import catalog_groups, random_biset
from bisetloops.matrices import (
    BisetMatrix,
    FormalUnion,
    augmentation_matrix,
    block_diagonal,
    identity_matrix,
    zero_matrix,
)


def random_matrix(rng, U, V):
    return BisetMatrix(U, V, [[random_biset(rng, G, H) for H in V] for G in U])


def test_single_group_identity(s3):
    I = identity_matrix(FormalUnion.single(s3))
    assert I.shape == (1, 1)
    assert I[0, 0] == VirtualBiset.identity(s3)


def test_two_component_identity(c2, s3):
    I = identity_matrix(FormalUnion([c2, s3]))
    assert I[0, 0] == VirtualBiset.identity(c2) and I[1, 1] == VirtualBiset.identity(s3)
    assert not I[0, 1] and not I[1, 0]
    assert I @ I == I
    assert augmentation_matrix(I).tolist() == [[1, 0], [0, 1]]


def test_one_by_one_reduces_to_composition(c2, s3):
    rng = random.Random(0)
    X, Y = random_biset(rng, c2, s3), random_biset(rng, s3, c2)
    assert (BisetMatrix.from_biset(X) @ BisetMatrix.from_biset(Y))[0, 0] == X @ Y


def test_identity_is_neutral_and_augmentation_multiplies():
    rng = random.Random(1)
    groups = catalog_groups()
    for _ in range(10):
        U = FormalUnion(rng.sample(groups, 2))
        V = FormalUnion(rng.sample(groups, 3))
        W = FormalUnion(rng.sample(groups, 2))
        X, Y = random_matrix(rng, U, V), random_matrix(rng, V, W)
        assert X @ identity_matrix(V) == X
        assert identity_matrix(U) @ X == X
        lhs = augmentation_matrix(X @ Y)
        rhs = augmentation_matrix(X).dot(augmentation_matrix(Y))
        assert np.array_equal(lhs.astype(np.int64), rhs.astype(np.int64))


def test_shape_mismatch(c2, s3):
    with pytest.raises(BisetError):
        BisetMatrix.from_biset(VirtualBiset.identity(c2)) @ BisetMatrix.from_biset(VirtualBiset.identity(s3))


def test_entry_with_wrong_groups(c2, s3):
    with pytest.raises(BisetError):
        BisetMatrix(FormalUnion([c2]), FormalUnion([c2]), [[VirtualBiset.identity(s3)]])


def test_block_diagonal(c2, s3):
    M = block_diagonal([identity_matrix(FormalUnion([c2])), identity_matrix(FormalUnion([s3]))])
    assert M == identity_matrix(FormalUnion([c2, s3]))


def test_zero_matrix(c2, s3):
    Z = zero_matrix(FormalUnion([c2]), FormalUnion([s3, c2]))
    assert Z.is_zero() and Z.shape == (1, 2)
    X = BisetMatrix.from_sparse(Z.domain, Z.codomain, {(0, 1): {canonical_key(c2, c2, [0], [0]): 3}})
    assert X.nonzero() == [(0, 1)]
    assert (X - X).is_zero() and X + Z == X
