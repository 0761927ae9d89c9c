import itertools

import pytest

from bisetloops.bisets import VirtualBiset
from bisetloops.checks import check_classification, check_prefix_closure
from bisetloops.groups import make_catalog_group, parse_element
from bisetloops.tuples import (
    NoWitnessError,
    classify_tuples,
    commuting_tuples,
    conjugating_element,
    permute_class,
    zeta_biset,
)


def test_c2_has_two_classes(c2):
    table = classify_tuples(c2, 1)
    assert len(table) == 2
    assert table.reps == [(0,), (1,)]


def test_zero_tuples_have_one_class(s3):
    table = classify_tuples(s3, 0)
    assert table.reps == [()]
    assert table.centralizers[0].order == 6


def test_s3_classes(s3):
    table = classify_tuples(s3, 1)
    names = [s3.name(r[0]) for r in table.reps]
    assert names == ["e", "(12)", "(123)"]
    assert [C.order for C in table.centralizers] == [6, 2, 3]


@pytest.mark.parametrize("name", ["C2", "C3", "C4", "C2xC2", "S3", "D8", "Q8"])
def test_class_sizes_sum_to_commuting_tuples(name):
    G = make_catalog_group(name)
    for n in (1, 2):
        table = classify_tuples(G, n)
        total = sum(table.class_size(i) for i in range(len(table)))
        assert total == len(commuting_tuples(G, n))


@pytest.mark.parametrize("name", ["S3", "D8", "S4"])
def test_prefix_closure_and_classification(name):
    G = make_catalog_group(name)
    assert check_prefix_closure(G, 3 if G.order < 24 else 2)
    assert check_classification(G, 2)


def test_zeta_identity(s3):
    a = (parse_element(s3, "(12)"),)
    Z = zeta_biset(s3, a, a)
    assert Z == VirtualBiset.identity(Z.source)


def test_zeta_transpositions(s3):
    a = (parse_element(s3, "(12)"),)
    b = (parse_element(s3, "(13)"),)
    g = conjugating_element(s3, a, b)
    assert s3.conj(g, a[0]) == b[0]
    ((key, coef),) = zeta_biset(s3, a, b).items()
    assert coef == 1 and key.order == 2
    assert key.source.names[1] == "(12)" and key.target.names[1] == "(13)"
    assert key.images == (0, 1)


def test_zeta_cocycle(s3):
    t = [(parse_element(s3, x),) for x in ("(12)", "(13)", "(23)")]
    for a, b, c in itertools.permutations(t):
        assert zeta_biset(s3, a, b) @ zeta_biset(s3, b, c) == zeta_biset(s3, a, c)


def test_non_conjugate_tuples(s3):
    with pytest.raises(NoWitnessError):
        conjugating_element(s3, (parse_element(s3, "(12)"),), (parse_element(s3, "(123)"),))


def test_identity_permutation_fixes_classes(s3):
    table = classify_tuples(s3, 2)
    for i, (j, Z) in enumerate(permute_class(table, [0, 1])):
        assert i == j
        assert Z == VirtualBiset.identity(Z.source)


def test_swap_in_abelian_group():
    G = make_catalog_group("C2xC2")
    table = classify_tuples(G, 2)
    for i, (j, Z) in enumerate(permute_class(table, [1, 0])):
        x, y = table.reps[i]
        assert table.reps[j] == (y, x)
        assert Z == VirtualBiset.identity(Z.source)
