import json
import random

import pytest

from bisetloops.bisets import VirtualBiset
from bisetloops.checks import catalog_groups, random_biset
from bisetloops.groups import make_catalog_group
from bisetloops.matrices import BisetMatrix, FormalUnion
from bisetloops.serialize import (
    FormatError,
    biset_from_json,
    biset_from_text,
    biset_to_json,
    biset_to_text,
    group_from_json,
    group_from_text,
    group_to_json,
    group_to_text,
    matrix_from_json,
    matrix_from_text,
    matrix_to_json,
    matrix_to_text,
)
from bisetloops.twist import twist_morphism


@pytest.mark.parametrize("name", ["1", "C2", "S3", "D8", "Q8", "C2xC2"])
def test_group_round_trip(name):
    G = make_catalog_group(name)
    for back in (group_from_text(group_to_text(G)), group_from_json(json.loads(json.dumps(group_to_json(G))))):
        assert (back.table == G.table).all()
        assert back.names == G.names and back.label == G.label


def test_biset_round_trip():
    rng = random.Random(0)
    groups = catalog_groups()
    for _ in range(30):
        G, H = rng.choice(groups), rng.choice(groups)
        X = random_biset(rng, G, H)
        assert biset_from_text(biset_to_text(X), G, H) == X
        assert biset_from_json(json.loads(json.dumps(biset_to_json(X))), G, H) == X


def test_zero_biset_text(c2):
    Z = VirtualBiset.zero(c2, c2)
    assert biset_to_text(Z) == "0\n"
    assert biset_from_text("0", c2, c2) == Z


def test_matrix_round_trip(s3):
    X = random_biset(random.Random(1), s3, s3)
    M = twist_morphism(X, 1, 6)
    assert matrix_from_text(matrix_to_text(M), M.domain, M.codomain) == M
    assert matrix_from_json(json.loads(json.dumps(matrix_to_json(M))), M.domain, M.codomain) == M


def test_printing_is_deterministic(s3):
    X = random_biset(random.Random(2), s3, s3)
    assert matrix_to_text(twist_morphism(X, 1, 6)) == matrix_to_text(twist_morphism(X, 1, 6))


@pytest.mark.parametrize(
    "text",
    ["", "grp C2 2\n0 1\n1 0", "group C2 2\n0 1", "group C2 2\n0 x\n1 0", "group C2 2\n0 1\n1 0\nlabels e a"],
)
def test_bad_group_text(text):
    with pytest.raises(FormatError):
        group_from_text(text)


@pytest.mark.parametrize("text", ["1 [ 0 ; ]", "1 [ 0 1 ; 0 0 0 ]", "x [ 0 ; 0 ]", "1 [ 0 ; 7 ]"])
def test_bad_biset_text(c2, text):
    with pytest.raises(FormatError):
        biset_from_text(text, c2, c2)


def test_bad_matrix_text(c2):
    U = FormalUnion([c2])
    with pytest.raises(FormatError):
        matrix_from_text("matrix 2 2\n0\n0\n0\n0", U, U)
    with pytest.raises(FormatError):
        matrix_from_text("matrix 1 1\n1 [ 0 ; 0 ] junk", U, U)
    assert matrix_from_text("matrix 1 1\n0", U, U) == BisetMatrix(U, U)
