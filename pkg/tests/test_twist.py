import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisetloops.bisets import VirtualBiset, canonical_key
from bisetloops.checks import (
    catalog_groups,
    check_ev_naturality,
    check_induced,
    check_untwist,
    check_zero_arity,
    random_biset,
    random_key,
    shared_modulus,
)
from bisetloops.groups import Subgroup, all_subgroups, decode, make_catalog_group
from bisetloops.loops import ModulusError, loop_morphism, torus_extend, twist_object
from bisetloops.matrices import identity_matrix
from bisetloops.tuples import classify_tuples
from bisetloops.twist import ev_preimage, k_exponents, twist_morphism, untwist_morphism, wind_iso


def test_k_exponent_of_involution(c2):
    assert k_exponents(c2, (1,), Subgroup(c2, [0])).k == (2,)


def test_k_exponents_inside_r(s3):
    table = classify_tuples(s3, 2)
    for i, a in enumerate(table.reps):
        assert k_exponents(s3, a, table.centralizers[i]).k == (1, 1)
    assert k_exponents(s3, (), Subgroup(s3, [0])).k == ()


def test_preimage_of_trivial_subgroup(c2):
    # codes t*2 + z: (0, e) and (1, a)
    assert ev_preimage(c2, (1,), Subgroup(c2, [0]), 2).tolist() == [0, 3]


def test_wind_sends_loop_to_trivial(c2):
    W = wind_iso(c2, (1,), Subgroup(c2, [0]), 2)
    assert W.k == (2,)
    assert dict(zip(W.domain.tolist(), W.images.tolist())) == {0: 0, 3: 1}
    assert W.is_bijective() and W.is_homomorphism()


def test_wind_is_identity_when_tuple_lies_in_r(s3):
    table = classify_tuples(s3, 1)
    C = table.centralizers[2]
    W = wind_iso(s3, table.reps[2], C, 6)
    assert W.domain.tolist() == W.images.tolist()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["C2", "C4", "C2xC2", "S3", "D8", "Q8"]), st.integers(1, 2), st.data())
def test_wind_commutes_with_evaluation(name, n, data):
    G = make_catalog_group(name)
    ell = G.exponent()
    table = classify_tuples(G, n)
    i = data.draw(st.integers(0, len(table) - 1))
    a, C = table.reps[i], table.centralizers[i]
    subs = all_subgroups(C.group())
    R = Subgroup(G, C.array[data.draw(st.sampled_from(subs)).array])
    W = wind_iso(G, a, R, ell)
    assert W.is_bijective() and W.is_homomorphism()
    ak = [G.power(x, k) for x, k in zip(a, W.k)]
    for d, im in zip(W.domain.tolist(), W.images.tolist()):
        t, z = divmod(d, C.order)
        s, r = divmod(im, R.order)
        assert s == t
        ts = decode([make_catalog_group(f"C{ell}")] * n, t)
        lhs = G.mul(G.product(G.power(x, e) for x, e in zip(a, ts)), int(C.array[z]))
        rhs = G.mul(G.product(G.power(x, e) for x, e in zip(ak, ts)), int(R.array[r]))
        assert lhs == rhs


def test_twist_object_c2(c2):
    obj = twist_object(c2, 1, 2)
    assert [G.order for G in obj.union] == [4, 4]
    assert twist_object(c2, 0, 2).union[0].order == 2


def test_identity_and_zero(s3):
    obj = twist_object(s3, 1, 6)
    assert twist_morphism(VirtualBiset.identity(s3), 1, 6) == identity_matrix(obj.union)
    assert twist_morphism(VirtualBiset.zero(s3, s3), 1, 6).is_zero()


def test_forward_maps_are_untwisted(s3, c2):
    sign = VirtualBiset.basis(canonical_key(s3, c2, range(6), [0, 1, 0, 1, 1, 0]))
    expected = torus_extend(loop_morphism(sign, 1), 1, 6)
    assert twist_morphism(sign, 1, 6) == expected
    assert untwist_morphism(sign, 1, 6) == expected


def test_untwisted_c2_example(c2):
    free = VirtualBiset.basis(canonical_key(c2, c2, [0], [0]))
    U = untwist_morphism(free, 1, 2)
    assert U == torus_extend(loop_morphism(free, 1), 1, 2)
    assert not U[1, 0] and not U[1, 1]
    assert twist_morphism(free, 1, 2)[1, 0]


def test_modulus_error(c2):
    with pytest.raises(ModulusError):
        twist_morphism(VirtualBiset.identity(c2), 1, 3)


@pytest.mark.parametrize(
    "check",
    [check_zero_arity, lambda r: check_induced(r, 1), lambda r: check_ev_naturality(r, 1), lambda r: check_untwist(r, 2)],
)
def test_theorem_properties(check):
    rng = random.Random(11)
    assert all(check(rng) for _ in range(5))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_functoriality_n1(seed):
    rng = random.Random(seed)
    G, H, K = (rng.choice(catalog_groups()) for _ in range(3))
    ell = shared_modulus(G, H, K)
    X, Y = random_biset(rng, G, H), random_biset(rng, H, K)
    assert twist_morphism(X @ Y, 1, ell) == twist_morphism(X, 1, ell) @ twist_morphism(Y, 1, ell)


def test_effective_inputs_stay_effective_on_samples():
    # observed, not a proven property
    rng = random.Random(4)
    for _ in range(20):
        G, H = rng.choice(catalog_groups()), rng.choice(catalog_groups())
        X = sum((VirtualBiset.basis(random_key(rng, G, H), rng.randint(1, 2)) for _ in range(2)), VirtualBiset.zero(G, H))
        L = twist_morphism(X, 1, shared_modulus(G, H))
        assert all(e.is_effective() for row in L.entries for e in row)
