import pytest

from bisetloops.bisets import VirtualBiset, canonical_key, transfer_biset
from bisetloops.checks import check_pi0_transfer
from bisetloops.groups import GroupError, Subgroup, make_catalog_group, parse_element
from bisetloops.loops import loop_object
from bisetloops.pi0 import pi0_map, pi0_transfer_oracle


def alternating(s3):
    return Subgroup(s3, [0, parse_element(s3, "(123)"), parse_element(s3, "(132)")])


def test_identity_acts_as_identity(s3):
    assert pi0_map(VirtualBiset.identity(s3), 1).tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_three_cycle_into_a3(s3):
    A = alternating(s3)
    a = (parse_element(s3, "(123)"),)
    v = pi0_transfer_oracle(s3, A, a, 1)
    assert v.coeffs == [0, 1, 1]
    row = pi0_map(transfer_biset(s3, A), 1)[2]
    assert row.tolist() == v.coeffs
    # |C_S3(a)| / |C_A3(a)| = 1 per hit class, two classes hit
    assert sum(v.coeffs) == 2


def test_transposition_misses_a3(s3):
    v = pi0_transfer_oracle(s3, alternating(s3), (parse_element(s3, "(12)"),), 1)
    assert v.coeffs == [0, 0, 0]


def test_whole_group(s3):
    a = (parse_element(s3, "(12)"),)
    assert pi0_transfer_oracle(s3, Subgroup(s3, range(6)), a, 1).coeffs == [0, 1, 0]


def test_forward_map_is_a_function(s3):
    c2 = make_catalog_group("C2")
    sign = VirtualBiset.basis(canonical_key(s3, c2, range(6), [0, 1, 0, 1, 1, 0]))
    assert pi0_map(sign, 1).tolist() == [[1, 0], [0, 1], [1, 0]]


@pytest.mark.parametrize("name", ["S3", "D8"])
@pytest.mark.parametrize("n", [1, 2])
def test_transfer_matches_cosets(name, n):
    assert check_pi0_transfer(make_catalog_group(name), n)


def test_pi0_is_functorial(s3):
    A = alternating(s3)
    X = transfer_biset(s3, A)
    Y = VirtualBiset.basis(canonical_key(A.group(), s3, range(3), A.array))
    assert (pi0_map(X, 2) @ pi0_map(Y, 2)).tolist() == pi0_map(X @ Y, 2).tolist()


def test_oracle_rejects_wrong_arity(s3):
    with pytest.raises(GroupError):
        pi0_transfer_oracle(s3, alternating(s3), (1, 2), 1)
    assert len(loop_object(s3, 1)) == 3
