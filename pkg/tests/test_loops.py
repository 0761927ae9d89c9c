import random

import numpy as np
import pytest

from bisetloops.bisets import VirtualBiset, canonical_key, transfer_biset
from bisetloops.checks import (
    catalog_groups,
    check_fixed_vs_orbit,
    check_iteration,
    check_pev,
    check_sigma,
)
from bisetloops.groups import Subgroup, make_catalog_group, parse_element
from bisetloops.loops import (
    ModulusError,
    ev_matrix,
    evaluation_family,
    iteration_embedding,
    loop_morphism,
    loop_object,
    pev_matrix,
    sigma_matrix,
    torus_extend,
    twist_object,
)
from bisetloops.matrices import augmentation_matrix, identity_matrix


def test_c2_loop_object(c2):
    obj = loop_object(c2, 1)
    assert [G.order for G in obj.union] == [2, 2]
    assert list(obj.union.labels) == ["(e)", "(a)"]


def test_zero_loops_are_the_group(s3):
    obj = loop_object(s3, 0)
    assert len(obj) == 1 and obj.union[0].order == 6


def test_s3_loop_object(s3):
    assert [G.order for G in loop_object(s3, 1).union] == [6, 2, 3]


def test_loop_of_identity(s3):
    obj = loop_object(s3, 2)
    assert loop_morphism(VirtualBiset.identity(s3), 2) == identity_matrix(obj.union)


def test_forward_map_entries(s3, c2):
    sign = canonical_key(s3, c2, range(6), [0, 1, 0, 1, 1, 0])
    L = loop_morphism(VirtualBiset.basis(sign), 1)
    # e and (123) go to the class of e, (12) to the class of a
    assert L.nonzero() == [(0, 0), (1, 1), (2, 0)]
    for i, j in L.nonzero():
        ((key, coef),) = L[i, j].items()
        assert coef == 1 and key.order == L.domain[i].order
    assert augmentation_matrix(L).tolist() == [[1, 0], [0, 1], [1, 0]]


def test_transfer_entries_vanish_without_conjugates(s3):
    A3 = Subgroup(s3, [0, parse_element(s3, "(123)"), parse_element(s3, "(132)")])
    L = loop_morphism(transfer_biset(s3, A3), 1)
    assert not L[1, 0] and not L[1, 1] and not L[1, 2]
    # C_G(e) = S3 meets A3 in A3
    ((key, coef),) = L[0, 0].items()
    assert coef == 1 and key.order == 3


@pytest.mark.parametrize("name", ["C2", "S3", "C2xC2"])
def test_fixed_point_and_orbit_methods_agree(name):
    G = make_catalog_group(name)
    for H in catalog_groups(("C2", "S3")):
        assert check_fixed_vs_orbit(G, H, 1)


def test_unknown_method(s3):
    with pytest.raises(ValueError):
        loop_morphism(VirtualBiset.identity(s3), 1, "bogus")


def test_evaluation_at_zero_arity(s3):
    E = ev_matrix(s3, 0, 6)
    assert E.shape == (1, 1)
    ((key, coef),) = E[0, 0].items()
    assert key.order == 6 and key.images == tuple(range(6))


def test_evaluation_values(c2):
    ev_e, ev_tau = evaluation_family(c2, 1, 2)
    # code t*|C| + z
    assert ev_tau[1 * 2 + 0] == 1
    assert ev_e.tolist() == [0, 1, 0, 1]
    assert ev_tau[0:2].tolist() == [0, 1]


def test_pev_to_zero_arity(c2):
    P = pev_matrix(c2, 0, 2)
    E = ev_matrix(c2, 1, 2)
    assert P == E


def test_sigma_identity_and_composition():
    D = make_catalog_group("D8")
    n = 3
    assert sigma_matrix(D, n, [0, 1, 2]) == identity_matrix(loop_object(D, n).union)
    s, t = [1, 2, 0], [1, 0, 2]
    st = [t[s[i]] for i in range(3)]
    assert sigma_matrix(D, n, s) @ sigma_matrix(D, n, t) == sigma_matrix(D, n, st)


def test_sigma_is_a_permutation_for_abelian_groups():
    G = make_catalog_group("C2xC2")
    A = augmentation_matrix(sigma_matrix(G, 2, [1, 0], 2)).astype(int)
    assert (A.sum(axis=0) == 1).all() and (A.sum(axis=1) == 1).all()
    assert np.array_equal(A @ A, np.eye(len(A), dtype=int))


def test_iteration_embedding_shape(c2):
    M = iteration_embedding(c2, 1, 1, 2)
    assert len(M.domain) == 4
    assert len(M.codomain) == 8
    assert all(G.order == 4 for G in twist_object(c2, 1, 2).union)
    A = augmentation_matrix(M).astype(int)
    assert (A.sum(axis=1) == 1).all()


def test_modulus_must_kill_the_exponent(s3):
    with pytest.raises(ModulusError):
        twist_object(s3, 1, 4)


def test_torus_extension_of_identity(c2):
    T = torus_extend(loop_morphism(VirtualBiset.identity(c2), 1), 1, 2)
    assert T == identity_matrix(twist_object(c2, 1, 2).union)


@pytest.mark.parametrize("check", [check_sigma, lambda r: check_pev(r, 1), check_iteration])
def test_structural_naturality(check):
    rng = random.Random(5)
    assert all(check(rng) for _ in range(5))
