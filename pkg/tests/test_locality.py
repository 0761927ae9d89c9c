import random

import pytest

from bisetloops.bisets import VirtualBiset, canonical_key
from bisetloops.checks import catalog_groups, check_cross_boundary, check_projection_square, random_biset
from bisetloops.groups import make_catalog_group
from bisetloops.locality import (
    ALL_ABELIAN,
    abelian_p_groups,
    is_nilpotent,
    local_exponent,
    loop_object_restricted,
    matrix_powers,
    obstruction_witness,
    padic_power_analysis,
    twist_morphism_restricted,
)
from bisetloops.loops import kept_classes
from bisetloops.twist import twist_morphism


def free_minus_twice_identity(G):
    return VirtualBiset.basis(canonical_key(G, G, [0], [0])) - 2 * VirtualBiset.identity(G)


def test_all_abelian_is_unrestricted(s3):
    X = random_biset(random.Random(0), s3, s3)
    assert twist_morphism(X, 1, 6, ALL_ABELIAN) == twist_morphism(X, 1, 6)


def test_two_local_s3_drops_three_cycles(s3):
    assert kept_classes(s3, 1, abelian_p_groups(2)) == [0, 1]
    obj = loop_object_restricted(s3, 1, abelian_p_groups(2))
    assert [G.order for G in obj.union] == [6, 2]


def test_predicate_is_cached():
    assert abelian_p_groups(3) is abelian_p_groups(3)
    with pytest.raises(ValueError):
        abelian_p_groups(6)


def test_local_exponent():
    groups = catalog_groups(("S3", "D8"))
    assert local_exponent(groups, 2) == 2
    assert local_exponent(groups, 3) == 1
    assert local_exponent([make_catalog_group("C3")], 2) == 1


def test_restricted_functoriality():
    rng = random.Random(7)
    groups = catalog_groups(("C2", "C2xC2", "C4", "D8", "S3"))
    for _ in range(10):
        G, H, K = (rng.choice(groups) for _ in range(3))
        X, Y = random_biset(rng, G, H), random_biset(rng, H, K)
        lhs = twist_morphism_restricted(X @ Y, 1, 2, e=2)
        assert lhs == twist_morphism_restricted(X, 1, 2, e=2) @ twist_morphism_restricted(Y, 1, 2, e=2)


def test_cross_boundary_on_s3(s3):
    rng = random.Random(8)
    assert all(check_cross_boundary(rng, abelian_p_groups(2), [s3]) for _ in range(10))


def test_projection_square():
    rng = random.Random(9)
    groups = catalog_groups(("C2", "C2xC2"))
    assert all(check_projection_square(rng, abelian_p_groups(2), groups, 4, 2) for _ in range(10))


def test_powers_of_example_matrix():
    A = [[0, 0], [2, -2]]
    for m, P in enumerate(matrix_powers(A, 10), start=1):
        assert P.tolist() == [[0, 0], [-((-2) ** m), (-2) ** m]]


def test_padic_first_power_equals_precision():
    report = padic_power_analysis([[0, 0], [2, -2]], 2, 6)
    assert report.first_power == {j: j for j in range(1, 7)}
    assert report.converges


def test_padic_of_zero_starts_at_one():
    report = padic_power_analysis([[0, 0], [0, 0]], 2, 3)
    assert report.first_power == {1: 1, 2: 1, 3: 1}


def test_padic_no_convergence():
    report = padic_power_analysis([[1]], 2, 2, m_max=8)
    assert report.first_power == {1: None, 2: None} and not report.converges


def test_nilpotency():
    assert is_nilpotent([[0, 1], [0, 0]])
    assert not is_nilpotent([[0, 0], [2, -2]])


def test_obstruction_c2(c2):
    rep = obstruction_witness(free_minus_twice_identity(c2), 1, p=2)
    assert rep.augmentation == 0 and not rep.warnings
    assert rep.epsilon.tolist() == [[0, 0], [2, -2]]
    assert rep.diagonal_witnesses == [(1, -2)]
    assert rep.obstructed and not rep.nilpotent
    assert rep.padic.converges
    assert rep.symbolic == [["s0 - 2", "0"], ["s1", "-2"]]


def test_obstruction_of_zero(c2):
    rep = obstruction_witness(VirtualBiset.zero(c2, c2), 1, p=2)
    assert not rep.obstructed and rep.nilpotent


def test_obstruction_c3_analogue():
    G = make_catalog_group("C3")
    Y = free_minus_twice_identity(G)
    with pytest.warns(UserWarning):
        rep = obstruction_witness(Y, 1, p=3)
    # the input has augmentation 3 - 2 = 1
    assert rep.augmentation == 1
    assert rep.diagonal_witnesses == [(1, -2), (2, -2)]
    assert rep.obstructed
    assert rep.epsilon.tolist() == [[1, 0, 0], [3, -2, 0], [3, 0, -2]]
    assert not rep.padic.converges
